#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <string>

// Closed-form geometry on the three model manifolds: the round sphere
// (positive constant curvature), a Euclidean box, and the square flat
// torus. Points are stored as ambient 3-vectors; 2-dimensional manifolds
// leave the third coordinate at zero (the sphere uses all three as an
// embedded unit-direction times radius).

namespace ccv {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Requested point lies at or beyond the injectivity radius.
struct cut_locus_error : geometry_error {
  using geometry_error::geometry_error;
};
// Source and target coincide where a direction would be needed.
struct degenerate_point_error : geometry_error {
  using geometry_error::geometry_error;
};
// A field or counterexample constructor could not satisfy its contract.
struct construction_error : geometry_error {
  using geometry_error::geometry_error;
};

enum class ManifoldKind { Sphere, Euclidean, FlatTorus };

struct Manifold {
  ManifoldKind kind = ManifoldKind::Sphere;
  double radius = 1.0;   // sphere only
  double period = 1.0;   // torus only
  int dim = 2;           // intrinsic dimension (sphere and torus are 2)
  Vec3 box_min = Vec3::Zero();  // Euclidean sampling box
  Vec3 box_max = Vec3::Ones();

  static Manifold sphere(double R);
  static Manifold euclidean(int dim, const Vec3& lo, const Vec3& hi);
  static Manifold flat_torus(double L);

  // Supremum of the positive part of the sectional curvature.
  double curvature_bound() const;
  double injectivity_radius() const;  // +inf on Euclidean space
  double diameter() const;
  int dimension() const { return dim; }
  std::string name() const;
};

struct Point {
  Vec3 x = Vec3::Zero();
  Point() = default;
  explicit Point(const Vec3& v) : x(v) {}
  Point(double a, double b, double c) : x(a, b, c) {}
};

struct TangentVector {
  Point base;
  Vec3 v = Vec3::Zero();
  TangentVector() = default;
  TangentVector(const Point& p, const Vec3& w) : base(p), v(w) {}
  double norm() const { return v.norm(); }
};

// Orthonormal tangent basis at a point, columns of `axes`. Deterministic
// in (manifold, point) so that forms produced independently at the same
// point can be combined.
struct Frame {
  Point base;
  Eigen::Matrix<double, 3, Eigen::Dynamic> axes;  // 3 x dim
  int dim = 2;
  Eigen::VectorXd components(const Vec3& ambient) const {
    return axes.transpose() * ambient;
  }
  Vec3 from_components(const Eigen::VectorXd& c) const { return axes * c; }
};

// Symmetric bilinear form on a tangent space, expressed in `frame`.
struct SymForm {
  Frame frame;
  Eigen::MatrixXd m;  // dim x dim, symmetric

  double operator()(const TangentVector& u, const TangentVector& w) const {
    Eigen::VectorXd cu = frame.components(u.v);
    Eigen::VectorXd cw = frame.components(w.v);
    return cu.dot(m * cw);
  }
  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  double min_eigenvalue() const { return eigenvalues().minCoeff(); }
  double max_eigenvalue() const { return eigenvalues().maxCoeff(); }
  double operator_norm() const { return eigenvalues().cwiseAbs().maxCoeff(); }
};

SymForm operator+(const SymForm& a, const SymForm& b);
SymForm operator-(const SymForm& a, const SymForm& b);
SymForm operator*(double s, const SymForm& a);

// A <= B in the positive semi-definite order, up to tol on eigenvalues.
bool psd_leq(const SymForm& a, const SymForm& b, double tol = 0.0);

// Canonical point cleanup: renormalize onto the sphere, reduce torus
// coordinates mod L. Euclidean points pass through.
Point project(const Manifold& M, const Point& p);
bool valid_point(const Manifold& M, const Point& p, double tol = 1e-9);

double distance(const Manifold& M, const Point& p, const Point& q);
Point exp_map(const Manifold& M, const TangentVector& v);
TangentVector log_map(const Manifold& M, const Point& p, const Point& q,
                      double cut_tol = 1e-9);

// Unit gradient of y -> d(center, y), defined for 0 < d < inj.
TangentVector distance_gradient(const Manifold& M, const Point& center,
                                const Point& y);

Frame frame_at(const Manifold& M, const Point& p);

// Hessian of the distance function r = d(center, .) at y. Closed form:
// (1/R) cot(r/R) (g - dr (x) dr) on the sphere, (g - dr (x) dr)/r on the
// flat manifolds, valid strictly inside the injectivity radius.
SymForm hessian_r(const Manifold& M, const Point& center, const Point& y);

// Hessian of (1/2) r^2 at y; equals g at y = center (the r -> 0 limit).
// Sphere: (r/R)cot(r/R) g + (1 - (r/R)cot(r/R)) dr (x) dr, so the radial
// eigenvalue is exactly 1. Flat manifolds: g.
SymForm hessian_half_r2(const Manifold& M, const Point& center, const Point& y);

SymForm metric_form(const Manifold& M, const Point& p);
SymForm tensor_square(const Manifold& M, const TangentVector& u);

}  // namespace ccv
