#include "ccv/scalar_field.hpp"

#include <cmath>

namespace ccv {

using detail::FieldNode;
using Kind = FieldNode::Kind;

RampProfile::RampProfile(double slope_end, double plateau_start)
    : t0(slope_end), t1(plateau_start) {
  if (!(t0 > 0) || !(t1 > t0))
    throw construction_error("ramp profile requires 0 < t0 < t1");
}

// Two cubic pieces on [t0, tm] and [tm, t1]; rho'' is a hat function with
// peak -2/w at the midpoint, which is the unique C2 interpolant between
// slope 1 and slope 0 with cubic pieces.
double RampProfile::value(double t) const {
  if (t <= t0) return t;
  if (t >= t1) return plateau_value();
  double w = t1 - t0, tm = 0.5 * (t0 + t1);
  if (t <= tm) {
    double s = t - t0;
    return t0 + s - (2.0 / (3.0 * w * w)) * s * s * s;
  }
  double s = t1 - t;
  return plateau_value() - (2.0 / (3.0 * w * w)) * s * s * s;
}

double RampProfile::d1(double t) const {
  if (t <= t0) return 1.0;
  if (t >= t1) return 0.0;
  double w = t1 - t0, tm = 0.5 * (t0 + t1);
  if (t <= tm) {
    double s = t - t0;
    return 1.0 - (2.0 / (w * w)) * s * s;
  }
  double s = t1 - t;
  return (2.0 / (w * w)) * s * s;
}

double RampProfile::d2(double t) const {
  if (t <= t0 || t >= t1) return 0.0;
  double w = t1 - t0, tm = 0.5 * (t0 + t1);
  if (t <= tm) return -(4.0 / (w * w)) * (t - t0);
  return -(4.0 / (w * w)) * (t1 - t);
}

double RadialCutoff::w(double r) const {
  if (r <= r_in) return 1.0;
  if (r >= r_out) return 0.0;
  double s = (r - r_in) / (r_out - r_in);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double RadialCutoff::dw(double r) const {
  if (r <= r_in || r >= r_out) return 0.0;
  double b = r_out - r_in, s = (r - r_in) / b;
  return -30.0 * s * s * (1.0 - s) * (1.0 - s) / b;
}

double RadialCutoff::d2w(double r) const {
  if (r <= r_in || r >= r_out) return 0.0;
  double b = r_out - r_in, s = (r - r_in) / b;
  return -(60.0 * s - 180.0 * s * s + 120.0 * s * s * s) / (b * b);
}

namespace {

// u / sin(u) and its first two derivatives; series below u = 1e-3 where
// the closed forms lose digits to cancellation.
void u_over_sin(double u, double& f, double& f1, double& f2) {
  if (std::abs(u) < 1e-3) {
    double u2 = u * u;
    f = 1.0 + u2 / 6.0 + 7.0 * u2 * u2 / 360.0;
    f1 = u / 3.0 + 7.0 * u * u2 / 90.0;
    f2 = 1.0 / 3.0 + 7.0 * u2 / 30.0;
    return;
  }
  double s = std::sin(u), c = std::cos(u);
  f = u / s;
  f1 = (s - u * c) / (s * s);
  f2 = (u * (1.0 + c * c) - 2.0 * s * c) / (s * s * s);
}

std::shared_ptr<const FieldNode> make_node(FieldNode n) {
  return std::make_shared<const FieldNode>(std::move(n));
}

void check_inside_injectivity(const Manifold& M, double reach, const char* what) {
  double inj = M.injectivity_radius();
  if (std::isfinite(inj) && !(reach < 0.995 * inj))
    throw construction_error(std::string(what) +
                             ": support must end strictly inside the injectivity radius");
}

struct Eval {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
  bool has_hess = false;
  Eigen::MatrixXd hess;  // in frame_at(M, p)
};

Eval eval_node(const Manifold& M, const FieldNode& n, const Point& p, bool want_hess);

Eval eval_constant(const Manifold& M, const FieldNode& n, const Point& p, bool want_hess) {
  Eval e;
  e.value = n.value;
  if (want_hess) {
    e.has_hess = true;
    e.hess = Eigen::MatrixXd::Zero(M.dim, M.dim);
  }
  return e;
}

Eval eval_dist_sq(const Manifold& M, const FieldNode& n, const Point& p, bool want_hess) {
  Eval e;
  double r = distance(M, n.center, p);
  double s = 0.5 * r * r;
  if (s >= n.ramp.t1) {
    e.value = n.ramp.plateau_value();
    if (want_hess) {
      e.has_hess = true;
      e.hess = Eigen::MatrixXd::Zero(M.dim, M.dim);
    }
    return e;
  }
  e.value = n.ramp.value(s);
  double d1 = n.ramp.d1(s), d2 = n.ramp.d2(s);
  if (r < 1e-14) {
    // ds vanishes and hess(half r^2) tends to the metric.
    if (want_hess) {
      e.has_hess = true;
      e.hess = d1 * Eigen::MatrixXd::Identity(M.dim, M.dim);
    }
    return e;
  }
  Vec3 ds = -log_map(M, p, n.center).v;  // gradient of half d^2
  e.grad = d1 * ds;
  if (want_hess) {
    Frame fr = frame_at(M, p);
    Eigen::VectorXd dsc = fr.components(ds);
    e.hess = d2 * (dsc * dsc.transpose()) + d1 * hessian_half_r2(M, n.center, p).m;
    e.has_hess = true;
  }
  return e;
}

Eval eval_ambient_linear(const Manifold& M, const FieldNode& n, const Point& p,
                         bool want_hess) {
  Eval e;
  double R2 = M.radius * M.radius;
  double l = p.x.dot(n.ambient);
  e.value = l;
  e.grad = n.ambient - (l / R2) * p.x;
  if (want_hess) {
    e.has_hess = true;
    e.hess = -(l / R2) * Eigen::MatrixXd::Identity(M.dim, M.dim);
  }
  return e;
}

// Shared assembly for chi(r) * ell(y) with ell the ambient height along
// the axis (sphere) or the flat first normal coordinate, and chi a C2
// radial profile. Hessian by the product rule:
//   ell (chi'' dr dr + chi' hess r) + chi'(dr (x) dl + dl (x) dr) + chi hess ell.
Eval eval_linear_times_radial(const Manifold& M, const FieldNode& n, const Point& p,
                              bool want_hess, double r) {
  Eval e;
  double a = n.coeff;
  const RadialCutoff& co = n.cutoff;

  double l, chi, chi1, chi2;
  Vec3 dl;
  double hess_l_coeff = 0.0;  // hess ell = coeff * g
  if (M.kind == ManifoldKind::Sphere) {
    double R = M.radius, u = r / R;
    double phi, phi1u, phi2u;
    u_over_sin(u, phi, phi1u, phi2u);
    double phi1 = phi1u / R, phi2 = phi2u / (R * R);
    double W = co.w(r), W1 = co.dw(r), W2 = co.d2w(r);
    chi = a * W * phi;
    chi1 = a * (W1 * phi + W * phi1);
    chi2 = a * (W2 * phi + 2.0 * W1 * phi1 + W * phi2);
    l = p.x.dot(n.axis);
    dl = n.axis - (l / (R * R)) * p.x;
    hess_l_coeff = -l / (R * R);
  } else {
    double W = co.w(r);
    chi = a * W;
    chi1 = a * co.dw(r);
    chi2 = a * co.d2w(r);
    l = log_map(M, n.center, p).v.dot(n.axis);
    dl = n.axis;
  }

  if (r < 1e-7) {
    e.value = chi * l;
    e.grad = chi * dl;
    if (want_hess) {
      e.has_hess = true;
      e.hess = Eigen::MatrixXd::Zero(M.dim, M.dim);
    }
    return e;
  }

  Vec3 dr = distance_gradient(M, n.center, p).v;
  e.value = chi * l;
  e.grad = l * chi1 * dr + chi * dl;
  if (want_hess) {
    Frame fr = frame_at(M, p);
    Eigen::VectorXd drc = fr.components(dr);
    Eigen::VectorXd dlc = fr.components(dl);
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(M.dim, M.dim);
    Eigen::MatrixXd hr = hessian_r(M, n.center, p).m;
    e.hess = l * (chi2 * (drc * drc.transpose()) + chi1 * hr) +
             chi1 * (drc * dlc.transpose() + dlc * drc.transpose()) +
             chi * hess_l_coeff * g;
    e.has_hess = true;
  }
  return e;
}

Eval eval_normal_linear(const Manifold& M, const FieldNode& n, const Point& p,
                        bool want_hess) {
  double r = distance(M, n.center, p);
  if (r >= n.cutoff.r_out) {
    Eval e;
    if (want_hess) {
      e.has_hess = true;
      e.hess = Eigen::MatrixXd::Zero(M.dim, M.dim);
    }
    return e;
  }
  return eval_linear_times_radial(M, n, p, want_hess, r);
}

// Radial profile psi(r) = -c r^3 w(r).
Eval eval_normal_cubic(const Manifold& M, const FieldNode& n, const Point& p,
                       bool want_hess) {
  Eval e;
  double c = n.coeff;
  double r = distance(M, n.center, p);
  if (r >= n.cutoff.r_out || r < 1e-7) {
    if (want_hess) {
      e.has_hess = true;
      e.hess = Eigen::MatrixXd::Zero(M.dim, M.dim);
    }
    return e;
  }
  double W = n.cutoff.w(r), W1 = n.cutoff.dw(r), W2 = n.cutoff.d2w(r);
  double psi = -c * r * r * r * W;
  double psi1 = -c * (3.0 * r * r * W + r * r * r * W1);
  double psi2 = -c * (6.0 * r * W + 6.0 * r * r * W1 + r * r * r * W2);
  Vec3 dr = distance_gradient(M, n.center, p).v;
  e.value = psi;
  e.grad = psi1 * dr;
  if (want_hess) {
    Frame fr = frame_at(M, p);
    Eigen::VectorXd drc = fr.components(dr);
    e.hess = psi2 * (drc * drc.transpose()) + psi1 * hessian_r(M, n.center, p).m;
    e.has_hess = true;
  }
  return e;
}

Eval eval_sum(const Manifold& M, const FieldNode& n, const Point& p, bool want_hess) {
  Eval e;
  if (want_hess) {
    e.has_hess = true;
    e.hess = Eigen::MatrixXd::Zero(M.dim, M.dim);
  }
  for (const auto& [coeff, field] : n.terms) {
    Eval part = eval_node(M, field.node(), p, want_hess);
    e.value += coeff * part.value;
    e.grad += coeff * part.grad;
    if (want_hess) e.hess += coeff * part.hess;
  }
  return e;
}

Eval eval_node(const Manifold& M, const FieldNode& n, const Point& p, bool want_hess) {
  switch (n.kind) {
    case Kind::Constant: return eval_constant(M, n, p, want_hess);
    case Kind::DistSqPotential: return eval_dist_sq(M, n, p, want_hess);
    case Kind::AmbientLinear: return eval_ambient_linear(M, n, p, want_hess);
    case Kind::NormalCoordLinear: return eval_normal_linear(M, n, p, want_hess);
    case Kind::NormalCoordCubic: return eval_normal_cubic(M, n, p, want_hess);
    case Kind::Sum: return eval_sum(M, n, p, want_hess);
  }
  return {};
}

}  // namespace

ScalarField ScalarField::constant(const Manifold& M, double c) {
  FieldNode n;
  n.kind = Kind::Constant;
  n.value = c;
  return ScalarField(M, make_node(std::move(n)));
}

ScalarField ScalarField::dist_sq_potential(const Manifold& M, const Point& center,
                                           const RampProfile& ramp) {
  check_inside_injectivity(M, std::sqrt(2.0 * ramp.t1), "dist_sq_potential");
  FieldNode n;
  n.kind = Kind::DistSqPotential;
  n.center = project(M, center);
  n.ramp = ramp;
  return ScalarField(M, make_node(std::move(n)));
}

ScalarField ScalarField::ambient_linear(const Manifold& M, const Vec3& v) {
  if (M.kind != ManifoldKind::Sphere)
    throw construction_error("ambient_linear: only defined on the sphere");
  FieldNode n;
  n.kind = Kind::AmbientLinear;
  n.ambient = v;
  return ScalarField(M, make_node(std::move(n)));
}

ScalarField ScalarField::normal_coord_linear(const Manifold& M, const Point& center,
                                             double a, const RadialCutoff& cutoff) {
  if (!(cutoff.r_out > cutoff.r_in) || !(cutoff.r_in >= 0))
    throw construction_error("normal_coord_linear: bad cutoff band");
  check_inside_injectivity(M, cutoff.r_out, "normal_coord_linear");
  FieldNode n;
  n.kind = Kind::NormalCoordLinear;
  n.center = project(M, center);
  n.coeff = a;
  n.cutoff = cutoff;
  n.axis = frame_at(M, n.center).axes.col(0);
  return ScalarField(M, make_node(std::move(n)));
}

ScalarField ScalarField::normal_coord_cubic(const Manifold& M, const Point& center,
                                            double c, const RadialCutoff& cutoff) {
  if (!(cutoff.r_out > cutoff.r_in) || !(cutoff.r_in >= 0))
    throw construction_error("normal_coord_cubic: bad cutoff band");
  check_inside_injectivity(M, cutoff.r_out, "normal_coord_cubic");
  FieldNode n;
  n.kind = Kind::NormalCoordCubic;
  n.center = project(M, center);
  n.coeff = c;
  n.cutoff = cutoff;
  return ScalarField(M, make_node(std::move(n)));
}

ScalarField ScalarField::sum(const Manifold& M,
                             std::vector<std::pair<double, ScalarField>> terms) {
  FieldNode n;
  n.kind = Kind::Sum;
  n.terms = std::move(terms);
  return ScalarField(M, make_node(std::move(n)));
}

double ScalarField::eval(const Point& p) const {
  return eval_node(m_, *node_, p, false).value;
}

TangentVector ScalarField::grad(const Point& p) const {
  return TangentVector(p, eval_node(m_, *node_, p, false).grad);
}

SymForm ScalarField::hess(const Point& p) const {
  SymForm out;
  out.frame = frame_at(m_, p);
  out.m = eval_node(m_, *node_, p, true).hess;
  return out;
}

TangentVector fd_gradient(const ScalarField& f, const Point& p, double h) {
  return fd_gradient(f.manifold(), [&](const Point& q) { return f.eval(q); }, p, h);
}

SymForm fd_hessian(const ScalarField& f, const Point& p, double h) {
  return fd_hessian(f.manifold(), [&](const Point& q) { return f.eval(q); }, p, h);
}

double sup_gradient_norm(const ScalarField& f, const SampleGrid& grid) {
  double max_grad = 0.0, max_hess = 0.0;
  for (const Point& p : grid.points) {
    max_grad = std::max(max_grad, f.grad(p).norm());
    max_hess = std::max(max_hess, f.hess(p).operator_norm());
  }
  return max_grad + grid.spacing * max_hess;
}

double oscillation(const ScalarField& f, const SampleGrid& grid) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Point& p : grid.points) {
    double v = f.eval(p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return (hi - lo) + grid.spacing * sup_gradient_norm(f, grid);
}

}  // namespace ccv
