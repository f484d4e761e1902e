#include "ccv/counterexample.hpp"

#include <cmath>

namespace ccv {

namespace {

double slack_min_eig(const ScalarField& f, const Point& p) {
  const Manifold& M = f.manifold();
  Eigen::MatrixXd slack =
      Eigen::MatrixXd::Identity(M.dim, M.dim) - f.hess(p).m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(slack, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Pattern search lowering the slack eigenvalue around a start point.
std::pair<Point, double> descend_slack(const ScalarField& f, const Point& start,
                                       double radius) {
  const Manifold& M = f.manifold();
  Point p = start;
  double val = slack_min_eig(f, p);
  Frame fr = frame_at(M, p);
  while (radius > 1e-6) {
    bool moved = false;
    for (int i = 0; i < 4 * M.dim; ++i) {
      double ang = 2.0 * M_PI * double(i) / double(4 * M.dim);
      Vec3 dir = std::cos(ang) * fr.axes.col(0) + std::sin(ang) * fr.axes.col(1);
      Point q = exp_map(M, TangentVector(p, radius * dir));
      double v = slack_min_eig(f, q);
      if (v < val) {
        p = q;
        val = v;
        fr = frame_at(M, p);
        moved = true;
        break;
      }
    }
    if (!moved) radius *= 0.5;
  }
  return {p, val};
}

}  // namespace

ScalarField build_f1(const Manifold& M, const Point& north, const RampProfile& ramp) {
  return ScalarField::dist_sq_potential(M, north, ramp);
}

F2Result build_f2(const Manifold& M, const Point& north, double a, double c,
                  const RadialCutoff& cutoff) {
  if (a == 0.0) throw construction_error("build_f2: linear coefficient must be nonzero");
  if (!(c > 0.0)) throw construction_error("build_f2: cubic coefficient must be positive");
  if (!(cutoff.r_out < M_PI * M.radius / 2.0))
    throw construction_error("build_f2: cutoff must end inside the quarter sphere");
  Point n = project(M, north);
  Vec3 e1 = frame_at(M, n).axes.col(0);
  ScalarField f2 = ScalarField::sum(
      M, {{1.0, ScalarField::ambient_linear(M, a * e1)},
          {1.0, ScalarField::normal_coord_cubic(M, n, c, cutoff)}});

  // Outward scan for the largest radius on which -hess f2 stays PSD.
  Frame fr = frame_at(M, n);
  const int n_radii = 400, n_azimuth = 64;
  double r_max = 0.999 * cutoff.r_out;
  double neg_radius = 0.0;
  bool broken = false;
  for (int i = 1; i <= n_radii && !broken; ++i) {
    double r = r_max * double(i) / double(n_radii);
    for (int j = 0; j < n_azimuth; ++j) {
      double psi = 2.0 * M_PI * double(j) / double(n_azimuth);
      Vec3 dir = std::cos(psi) * fr.axes.col(0) + std::sin(psi) * fr.axes.col(1);
      Point p = exp_map(M, TangentVector(n, r * dir));
      if (f2.hess(p).max_eigenvalue() > 1e-10) {
        broken = true;
        break;
      }
    }
    if (!broken) neg_radius = r;
  }
  if (neg_radius < 1e-2)
    throw construction_error(
        "build_f2: no verified neighborhood with hess f2 <= 0 (c too small relative to a)");
  return F2Result{f2, neg_radius};
}

HessianScan scan_hessian_bound(const ScalarField& f, const SampleGrid& grid,
                               int refine_top) {
  HessianScan scan;
  scan.samples = grid.size();
  std::vector<std::pair<double, std::size_t>> vals;
  vals.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    vals.emplace_back(slack_min_eig(f, grid.points[i]), i);
  std::sort(vals.begin(), vals.end());
  scan.min_eig = vals.front().first;
  scan.worst = grid.points[vals.front().second];
  int top = std::min<std::size_t>(refine_top, vals.size());
  for (int k = 0; k < top; ++k) {
    auto [p, v] = descend_slack(f, grid.points[vals[k].second], grid.spacing);
    if (v < scan.min_eig) {
      scan.min_eig = v;
      scan.worst = p;
    }
  }
  return scan;
}

ScalarField build_counterexample(const CounterexampleConfig& cfg) {
  if (!(cfg.eps_mix > 0)) throw construction_error("eps_mix must be positive");
  Manifold M = cfg.manifold();
  Point north = cfg.north();
  ScalarField f1 = build_f1(M, north, RampProfile(cfg.t0, cfg.t1));
  F2Result f2 = build_f2(M, north, cfg.a, cfg.c, RadialCutoff{cfg.cut_in, cfg.cut_out});
  ScalarField f =
      ScalarField::sum(M, {{1.0, f1}, {cfg.eps_mix, f2.field}});

  HessianScan scan = scan_hessian_bound(f, make_grid(M, cfg.scan_n, cfg.seed));
  if (scan.min_eig < -cfg.scan_tol)
    throw construction_error("build_counterexample: hess f <= g fails on the scan; "
                             "shrink eps_mix");
  return f;
}

CounterexampleReport verify_counterexample(const ScalarField& f,
                                           const CounterexampleConfig& cfg) {
  const Manifold& M = f.manifold();
  Point north = cfg.north();
  CounterexampleReport rep;

  HessianScan scan = scan_hessian_bound(f, make_grid(M, cfg.scan_n, cfg.seed + 1));
  rep.hessian_scan_min = scan.min_eig;
  rep.hessian_bound_ok = scan.min_eig >= -cfg.scan_tol;

  SampleGrid x_grid = make_grid(M, cfg.grid_n, cfg.seed + 2);
  x_grid.points.push_back(north);  // the mechanism lives at N
  SampleGrid y_grid = make_grid(M, cfg.grid_n, cfg.seed + 3);
  CconcavityResult cc = empirical_cconcavity(f, x_grid, y_grid, cfg.tol);
  rep.violation = cc.worst_violation;
  rep.violation_found = !cc.pass && cc.worst_violation > 10.0 * cfg.tol;
  rep.witness = cc.witness;
  rep.smallness = cc.smallness;
  rep.small_oscillation_regime = cc.small_oscillation_regime;
  if (cc.witness) {
    rep.witness_dist_north = distance(M, cc.witness->x, north);
    rep.witness_local = rep.witness_dist_north <= 3.0 * cfg.eps_mix * cfg.a;
  }

  // hess h at N with h = (1/2) d^2(x*, .) - f: the tangential eigenvalue
  // r* cot(r*) - 1 is negative whenever grad f(N) is nonzero.
  TangentVector g = f.grad(north);
  rep.r_star = g.norm();
  Point xstar = exp_map(M, TangentVector(north, -g.v));
  SymForm hess_h = hessian_half_r2(M, xstar, north) - f.hess(north);
  rep.mechanism_eig = hess_h.min_eigenvalue();
  double u = rep.r_star / M.radius;
  rep.mechanism_expected = u * std::cos(u) / std::sin(u) - 1.0;
  rep.mechanism_ok =
      rep.mechanism_eig < 0.0 && std::abs(rep.mechanism_eig - rep.mechanism_expected) < 1e-4;
  return rep;
}

}  // namespace ccv
