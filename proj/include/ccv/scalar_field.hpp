#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ccv/manifold.hpp"
#include "ccv/sampling.hpp"

namespace ccv {

// C2 profile used to flatten distance-squared potentials: identity up to
// t0, constant from t1 on, glued by two cubic pieces meeting at the
// midpoint so the result is C2 with rho' in [0,1] and rho'' <= 0.
struct RampProfile {
  double t0 = 0.1;
  double t1 = 0.3;

  RampProfile() = default;
  RampProfile(double slope_end, double plateau_start);

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double plateau_value() const { return t0 + (t1 - t0) / 2.0; }
};

// C2 radial cutoff: 1 on [0, r_in], 0 on [r_out, inf), quintic smoothstep
// in between.
struct RadialCutoff {
  double r_in = 0.5;
  double r_out = 1.0;
  double w(double r) const;
  double dw(double r) const;
  double d2w(double r) const;
};

class ScalarField;

namespace detail {
struct FieldNode {
  enum class Kind {
    Constant,
    DistSqPotential,
    AmbientLinear,
    NormalCoordLinear,
    NormalCoordCubic,
    Sum
  };
  Kind kind = Kind::Constant;
  double value = 0.0;             // Constant
  Point center;                   // potentials and normal-coordinate fields
  RampProfile ramp;               // DistSqPotential
  Vec3 ambient = Vec3::Zero();    // AmbientLinear covector
  double coeff = 0.0;             // linear a / cubic c
  RadialCutoff cutoff;            // normal-coordinate fields
  Vec3 axis = Vec3::Zero();       // first normal-coordinate direction
  std::vector<std::pair<double, ScalarField>> terms;  // Sum
};
}  // namespace detail

// Immutable C2 scalar field on a model manifold with analytic value,
// gradient and Hessian. Built from a closed constructor algebra so the
// derivatives are exact compositions of the closed-form geometry.
class ScalarField {
 public:
  static ScalarField constant(const Manifold& M, double c);
  // rho(half d^2(center, .)); rho must plateau strictly inside the
  // injectivity radius so the field is smooth across the cut locus.
  static ScalarField dist_sq_potential(const Manifold& M, const Point& center,
                                       const RampProfile& ramp);
  // x -> <x, v>, sphere only.
  static ScalarField ambient_linear(const Manifold& M, const Vec3& v);
  // a * u1 in normal coordinates at `center`, radially cut off; u1 is the
  // coordinate along the first axis of the canonical frame at center.
  static ScalarField normal_coord_linear(const Manifold& M, const Point& center,
                                         double a, const RadialCutoff& cutoff);
  // -c * |u|^3 in normal coordinates at `center`, radially cut off.
  static ScalarField normal_coord_cubic(const Manifold& M, const Point& center,
                                        double c, const RadialCutoff& cutoff);
  static ScalarField sum(const Manifold& M,
                         std::vector<std::pair<double, ScalarField>> terms);

  double eval(const Point& p) const;
  TangentVector grad(const Point& p) const;
  SymForm hess(const Point& p) const;

  const Manifold& manifold() const { return m_; }
  const detail::FieldNode& node() const { return *node_; }

 private:
  ScalarField(const Manifold& M, std::shared_ptr<const detail::FieldNode> n)
      : m_(M), node_(std::move(n)) {}
  Manifold m_;
  std::shared_ptr<const detail::FieldNode> node_;
};

// Central-difference oracles along geodesics. Second derivatives along
// exp_p(t w) converge to the covariant Hessian at O(h^2); off-diagonal
// entries come from the polarization identity.
template <class F>
TangentVector fd_gradient(const Manifold& M, F&& f, const Point& p, double h) {
  Frame fr = frame_at(M, p);
  Eigen::VectorXd c(M.dim);
  for (int i = 0; i < M.dim; ++i) {
    Vec3 e = fr.axes.col(i);
    double fp = f(exp_map(M, TangentVector(p, h * e)));
    double fm = f(exp_map(M, TangentVector(p, -h * e)));
    c[i] = (fp - fm) / (2.0 * h);
  }
  return TangentVector(p, fr.from_components(c));
}

template <class F>
SymForm fd_hessian(const Manifold& M, F&& f, const Point& p, double h) {
  Frame fr = frame_at(M, p);
  double f0 = f(p);
  auto second = [&](const Vec3& w) {
    double fp = f(exp_map(M, TangentVector(p, h * w)));
    double fm = f(exp_map(M, TangentVector(p, -h * w)));
    return (fp - 2.0 * f0 + fm) / (h * h);
  };
  SymForm out;
  out.frame = fr;
  out.m.resize(M.dim, M.dim);
  for (int i = 0; i < M.dim; ++i) out.m(i, i) = second(fr.axes.col(i));
  for (int i = 0; i < M.dim; ++i)
    for (int j = i + 1; j < M.dim; ++j) {
      double qp = second(fr.axes.col(i) + fr.axes.col(j));
      double qm = second(fr.axes.col(i) - fr.axes.col(j));
      out.m(i, j) = out.m(j, i) = 0.25 * (qp - qm);
    }
  return out;
}

TangentVector fd_gradient(const ScalarField& f, const Point& p, double h);
SymForm fd_hessian(const ScalarField& f, const Point& p, double h);

// Certified upper bound: grid maximum inflated by spacing times the grid
// maximum of the Hessian operator norm (gradient) or of the gradient norm
// (oscillation). Sound under the smoothness budget of the field algebra.
double sup_gradient_norm(const ScalarField& f, const SampleGrid& grid);
double oscillation(const ScalarField& f, const SampleGrid& grid);

}  // namespace ccv
