#include "ccv/manifold.hpp"

#include <cmath>

namespace ccv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_coord(double x, double L) {
  double y = std::fmod(x, L);
  if (y < 0) y += L;
  // fmod can return L itself after the correction when x is a tiny
  // negative number.
  if (y >= L) y -= L;
  return y;
}

// Shortest signed representative of x in (-L/2, L/2].
double wrap_shift(double x, double L) {
  double y = x - L * std::round(x / L);
  if (y <= -L / 2) y += L;
  return y;
}

double sinc(double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }
}  // namespace

Manifold Manifold::sphere(double R) {
  if (!(R > 0)) throw std::invalid_argument("sphere radius must be positive");
  Manifold m;
  m.kind = ManifoldKind::Sphere;
  m.radius = R;
  m.dim = 2;
  return m;
}

Manifold Manifold::euclidean(int dim, const Vec3& lo, const Vec3& hi) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("euclidean dim must be 2 or 3");
  for (int i = 0; i < dim; ++i)
    if (!(hi[i] > lo[i])) throw std::invalid_argument("degenerate sampling box");
  Manifold m;
  m.kind = ManifoldKind::Euclidean;
  m.dim = dim;
  m.box_min = lo;
  m.box_max = hi;
  if (dim == 2) {
    m.box_min[2] = 0;
    m.box_max[2] = 0;
  }
  return m;
}

Manifold Manifold::flat_torus(double L) {
  if (!(L > 0)) throw std::invalid_argument("torus period must be positive");
  Manifold m;
  m.kind = ManifoldKind::FlatTorus;
  m.period = L;
  m.dim = 2;
  return m;
}

double Manifold::curvature_bound() const {
  return kind == ManifoldKind::Sphere ? 1.0 / (radius * radius) : 0.0;
}

double Manifold::injectivity_radius() const {
  switch (kind) {
    case ManifoldKind::Sphere: return M_PI * radius;
    case ManifoldKind::FlatTorus: return period / 2.0;
    case ManifoldKind::Euclidean: return kInf;
  }
  return kInf;
}

double Manifold::diameter() const {
  switch (kind) {
    case ManifoldKind::Sphere: return M_PI * radius;
    case ManifoldKind::FlatTorus: return period * std::sqrt(2.0) / 2.0;
    case ManifoldKind::Euclidean: {
      Vec3 d = box_max - box_min;
      return d.head(dim).norm();
    }
  }
  return 0;
}

std::string Manifold::name() const {
  switch (kind) {
    case ManifoldKind::Sphere: return "sphere";
    case ManifoldKind::FlatTorus: return "flat_torus";
    case ManifoldKind::Euclidean: return "euclidean";
  }
  return "?";
}

Point project(const Manifold& M, const Point& p) {
  switch (M.kind) {
    case ManifoldKind::Sphere: {
      double n = p.x.norm();
      if (n == 0) throw degenerate_point_error("cannot project origin onto sphere");
      return Point(p.x * (M.radius / n));
    }
    case ManifoldKind::FlatTorus: {
      Vec3 q(wrap_coord(p.x[0], M.period), wrap_coord(p.x[1], M.period), 0.0);
      return Point(q);
    }
    case ManifoldKind::Euclidean: {
      Vec3 q = p.x;
      if (M.dim == 2) q[2] = 0;
      return Point(q);
    }
  }
  return p;
}

bool valid_point(const Manifold& M, const Point& p, double tol) {
  switch (M.kind) {
    case ManifoldKind::Sphere:
      return std::abs(p.x.norm() - M.radius) <= tol * M.radius;
    case ManifoldKind::FlatTorus:
      return p.x[0] >= 0 && p.x[0] < M.period && p.x[1] >= 0 && p.x[1] < M.period &&
             p.x[2] == 0;
    case ManifoldKind::Euclidean:
      return M.dim == 3 || p.x[2] == 0;
  }
  return false;
}

double distance(const Manifold& M, const Point& p, const Point& q) {
  switch (M.kind) {
    case ManifoldKind::Sphere: {
      // atan2 form is accurate near both 0 and pi.
      double c = p.x.dot(q.x);
      double s = p.x.cross(q.x).norm();
      return M.radius * std::atan2(s, c);
    }
    case ManifoldKind::FlatTorus: {
      double d0 = wrap_shift(q.x[0] - p.x[0], M.period);
      double d1 = wrap_shift(q.x[1] - p.x[1], M.period);
      return std::sqrt(d0 * d0 + d1 * d1);
    }
    case ManifoldKind::Euclidean:
      return (q.x - p.x).norm();
  }
  return 0;
}

Point exp_map(const Manifold& M, const TangentVector& tv) {
  const Point& p = tv.base;
  const Vec3& v = tv.v;
  switch (M.kind) {
    case ManifoldKind::Sphere: {
      double theta = v.norm() / M.radius;
      Vec3 r = std::cos(theta) * p.x + sinc(theta) * v;
      return project(M, Point(r));
    }
    case ManifoldKind::FlatTorus:
      return project(M, Point(p.x + v));
    case ManifoldKind::Euclidean:
      return Point(p.x + v);
  }
  return p;
}

TangentVector log_map(const Manifold& M, const Point& p, const Point& q,
                      double cut_tol) {
  double r = distance(M, p, q);
  if (r >= M.injectivity_radius() - cut_tol)
    throw cut_locus_error("log_map: target at or beyond the injectivity radius");
  switch (M.kind) {
    case ManifoldKind::Sphere: {
      Vec3 w = q.x - (p.x.dot(q.x) / (M.radius * M.radius)) * p.x;
      double wn = w.norm();
      if (wn < 1e-300) return TangentVector(p, Vec3::Zero());
      return TangentVector(p, (r / wn) * w);
    }
    case ManifoldKind::FlatTorus: {
      Vec3 d = Vec3::Zero();
      for (int i = 0; i < 2; ++i) {
        double s = wrap_shift(q.x[i] - p.x[i], M.period);
        // Ambiguous minimizing shift: |s| and L - |s| essentially tie.
        if (std::abs(M.period - 2.0 * std::abs(s)) < 1e-9)
          throw cut_locus_error("log_map: ambiguous minimizing shift on torus");
        d[i] = s;
      }
      return TangentVector(p, d);
    }
    case ManifoldKind::Euclidean:
      return TangentVector(p, q.x - p.x);
  }
  return TangentVector(p, Vec3::Zero());
}

TangentVector distance_gradient(const Manifold& M, const Point& center,
                                const Point& y) {
  double r = distance(M, center, y);
  if (r < 1e-14) throw degenerate_point_error("distance_gradient: y coincides with center");
  TangentVector back = log_map(M, y, center);
  return TangentVector(y, -back.v / r);
}

Frame frame_at(const Manifold& M, const Point& p) {
  Frame f;
  f.base = p;
  f.dim = M.dim;
  f.axes.resize(3, M.dim);
  if (M.kind == ManifoldKind::Sphere) {
    Vec3 n = p.x.normalized();
    int k = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(n[i]) < std::abs(n[k])) k = i;
    Vec3 e = Vec3::Unit(k);
    Vec3 a1 = (e - e.dot(n) * n).normalized();
    Vec3 a2 = n.cross(a1);
    f.axes.col(0) = a1;
    f.axes.col(1) = a2;
  } else {
    for (int i = 0; i < M.dim; ++i) f.axes.col(i) = Vec3::Unit(i);
  }
  return f;
}

SymForm operator+(const SymForm& a, const SymForm& b) {
  SymForm r = a;
  r.m += b.m;
  return r;
}
SymForm operator-(const SymForm& a, const SymForm& b) {
  SymForm r = a;
  r.m -= b.m;
  return r;
}
SymForm operator*(double s, const SymForm& a) {
  SymForm r = a;
  r.m *= s;
  return r;
}

bool psd_leq(const SymForm& a, const SymForm& b, double tol) {
  return (b - a).min_eigenvalue() >= -tol;
}

SymForm metric_form(const Manifold& M, const Point& p) {
  SymForm f;
  f.frame = frame_at(M, p);
  f.m = Eigen::MatrixXd::Identity(M.dim, M.dim);
  return f;
}

SymForm tensor_square(const Manifold& M, const TangentVector& u) {
  SymForm f;
  f.frame = frame_at(M, u.base);
  Eigen::VectorXd c = f.frame.components(u.v);
  f.m = c * c.transpose();
  return f;
}

namespace {
// Assemble coeff_g * g + coeff_rr * dr (x) dr at y, with dr the unit
// radial covector away from `center`.
SymForm radial_form(const Manifold& M, const Point& center, const Point& y,
                    double coeff_g, double coeff_rr) {
  SymForm f;
  f.frame = frame_at(M, y);
  Eigen::VectorXd u = f.frame.components(distance_gradient(M, center, y).v);
  f.m = coeff_g * Eigen::MatrixXd::Identity(M.dim, M.dim) +
        coeff_rr * (u * u.transpose());
  return f;
}
}  // namespace

SymForm hessian_r(const Manifold& M, const Point& center, const Point& y) {
  double r = distance(M, center, y);
  if (r < 1e-14) throw degenerate_point_error("hessian_r: y coincides with center");
  if (r >= M.injectivity_radius() - 1e-9)
    throw cut_locus_error("hessian_r: beyond injectivity radius");
  double coeff;
  if (M.kind == ManifoldKind::Sphere) {
    double u = r / M.radius;
    coeff = std::cos(u) / std::sin(u) / M.radius;
  } else {
    coeff = 1.0 / r;
  }
  return radial_form(M, center, y, coeff, -coeff);
}

SymForm hessian_half_r2(const Manifold& M, const Point& center, const Point& y) {
  double r = distance(M, center, y);
  if (r >= M.injectivity_radius() - 1e-9)
    throw cut_locus_error("hessian_half_r2: beyond injectivity radius");
  if (M.kind != ManifoldKind::Sphere || r < 1e-14) return metric_form(M, y);
  double u = r / M.radius;
  // u cot u; the series avoids cancellation for tiny u.
  double beta = u < 1e-7 ? 1.0 - u * u / 3.0 : u * std::cos(u) / std::sin(u);
  return radial_form(M, center, y, beta, 1.0 - beta);
}

}  // namespace ccv
