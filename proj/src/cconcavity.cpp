#include "ccv/cconcavity.hpp"

#include <cmath>

namespace ccv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double delta_budget(const Manifold& M) {
  double K = M.curvature_bound();
  double b = M.injectivity_radius() / 2.0;
  if (K > 0) b = std::min(b, 1.0 / std::sqrt(K));
  return b;
}

double convexity_budget(const Manifold& M) {
  double K = M.curvature_bound();
  double b = M.injectivity_radius() / 2.0;
  if (K > 0) b = std::min(b, M_PI / (2.0 * std::sqrt(K)));
  return b;
}

// Vectorized h(y) = (1/2) d^2(xstar, y) - f(y) over a fixed table of
// sample points; the per-x inner loop of the empirical check.
struct YTable {
  Manifold M;
  Eigen::Matrix3Xd pts;
  Eigen::ArrayXd fvals;
  std::vector<Point> points;

  YTable(const ScalarField& f, const SampleGrid& grid) : M(f.manifold()) {
    const auto n = grid.size();
    pts.resize(3, n);
    fvals.resize(n);
    points = grid.points;
    for (std::size_t i = 0; i < n; ++i) {
      pts.col(i) = grid.points[i].x;
      fvals[i] = f.eval(grid.points[i]);
    }
  }

  Eigen::ArrayXd h_values(const Point& xstar) const {
    const auto n = pts.cols();
    Eigen::ArrayXd half_d2(n);
    switch (M.kind) {
      case ManifoldKind::Sphere: {
        double R2 = M.radius * M.radius;
        Eigen::ArrayXd c = (pts.transpose() * xstar.x).array() / R2;
        c = c.min(1.0).max(-1.0);
        Eigen::ArrayXd theta = c.acos() * M.radius;
        half_d2 = 0.5 * theta.square();
        break;
      }
      case ManifoldKind::FlatTorus: {
        double L = M.period;
        Eigen::ArrayXd d0 = (pts.row(0).transpose().array() - xstar.x[0]).abs();
        Eigen::ArrayXd d1 = (pts.row(1).transpose().array() - xstar.x[1]).abs();
        d0 = d0.min(L - d0);
        d1 = d1.min(L - d1);
        half_d2 = 0.5 * (d0.square() + d1.square());
        break;
      }
      case ManifoldKind::Euclidean: {
        half_d2 = 0.5 * (pts.colwise() - xstar.x).colwise().squaredNorm().transpose().array();
        break;
      }
    }
    return half_d2 - fvals;
  }
};

double h_value(const ScalarField& f, const Point& xstar, const Point& y) {
  double d = distance(f.manifold(), xstar, y);
  return 0.5 * d * d - f.eval(y);
}

// Gradient descent on h restricted to where the distance part stays
// smooth; returns the best (point, value) reached from y0.
std::pair<Point, double> refine_minimum(const ScalarField& f, const Point& xstar,
                                        const Point& y0, double initial_step) {
  const Manifold& M = f.manifold();
  double inj = M.injectivity_radius();
  Point y = y0;
  double hy = h_value(f, xstar, y);
  double step = initial_step;
  for (int iter = 0; iter < 120 && step > 1e-10; ++iter) {
    if (std::isfinite(inj) && distance(M, xstar, y) >= 0.995 * inj) break;
    Vec3 grad_h = -log_map(M, y, xstar).v - f.grad(y).v;
    double gn = grad_h.norm();
    if (gn < 1e-14) break;
    bool moved = false;
    while (step > 1e-10) {
      Point y_try = exp_map(M, TangentVector(y, -(step / gn) * grad_h));
      double h_try = h_value(f, xstar, y_try);
      if (h_try < hy) {
        y = y_try;
        hy = h_try;
        step *= 1.7;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {y, hy};
}

}  // namespace

double delta_for(double diam, double grad_bound) {
  return std::sqrt(2.0 * diam * grad_bound + grad_bound * grad_bound);
}

double delta_of(const ScalarField& f, const SampleGrid& grid) {
  return delta_for(f.manifold().diameter(), sup_gradient_norm(f, grid));
}

AdmissibleBound admissible_gradient_bound(double K, double inj, double diam, double eps) {
  if (!(inj > 0) || !(diam > 0)) throw std::invalid_argument("inj and diam must be positive");
  if (!(K >= 0)) throw std::invalid_argument("curvature bound must be non-negative");
  double budget = inj / 2.0;
  if (K > 0) budget = std::min(budget, 1.0 / std::sqrt(K));
  AdmissibleBound out;
  out.c_star = std::isfinite(budget)
                   ? -diam + std::sqrt(diam * diam + budget * budget)
                   : kInf;
  out.eps_bound = K > 0 ? eps / (3.0 * K * diam) : kInf;
  return out;
}

std::string Certificate::verdict_name() const {
  switch (verdict) {
    case Verdict::Certified: return "Certified";
    case Verdict::FailedDelta: return "FailedDelta";
    case Verdict::FailedHessian: return "FailedHessian";
  }
  return "?";
}

namespace {
double grid_hessian_margin(const ScalarField& f, const SampleGrid& grid, double threshold) {
  double margin = kInf;
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(f.manifold().dim, f.manifold().dim);
  for (const Point& p : grid.points) {
    Eigen::MatrixXd slack = threshold * id - f.hess(p).m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(slack, Eigen::EigenvaluesOnly);
    margin = std::min(margin, es.eigenvalues().minCoeff());
  }
  return margin;
}
}  // namespace

Certificate certify_technical(const ScalarField& f, const SampleGrid& grid, double tol) {
  const Manifold& M = f.manifold();
  Certificate c;
  c.K = M.curvature_bound();
  c.inj = M.injectivity_radius();
  c.diam = M.diameter();
  c.tol = tol;
  c.grid_seed = grid.seed;
  c.grid_n = grid.size();
  c.grad_bound = sup_gradient_norm(f, grid);
  c.delta = delta_for(c.diam, c.grad_bound);
  c.delta_budget = delta_budget(M);
  c.hess_threshold = 1.0 - c.K * c.delta * c.delta;
  c.hess_margin = grid_hessian_margin(f, grid, c.hess_threshold);
  if (c.delta > c.delta_budget)
    c.verdict = Certificate::Verdict::FailedDelta;
  else if (c.hess_margin < -tol)
    c.verdict = Certificate::Verdict::FailedHessian;
  else
    c.verdict = Certificate::Verdict::Certified;
  return c;
}

Certificate certify_main(const ScalarField& f, double eps, const SampleGrid& grid,
                         double tol) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie in (0, 1)");
  const Manifold& M = f.manifold();
  Certificate c;
  c.K = M.curvature_bound();
  c.inj = M.injectivity_radius();
  c.diam = M.diameter();
  c.tol = tol;
  c.epsilon = eps;
  c.grid_seed = grid.seed;
  c.grid_n = grid.size();
  c.grad_bound = sup_gradient_norm(f, grid);
  c.delta = delta_for(c.diam, c.grad_bound);
  c.delta_budget = delta_budget(M);
  c.hess_threshold = 1.0 - eps;
  c.hess_margin = grid_hessian_margin(f, grid, c.hess_threshold);

  AdmissibleBound ab = admissible_gradient_bound(c.K, c.inj, c.diam, eps);
  if (c.grad_bound > std::min(ab.c_star, ab.eps_bound))
    c.verdict = Certificate::Verdict::FailedDelta;
  else if (c.hess_margin < -tol)
    c.verdict = Certificate::Verdict::FailedHessian;
  else
    c.verdict = Certificate::Verdict::Certified;

  if (c.certified() && !certify_technical(f, grid, tol).certified())
    throw std::logic_error("main certificate not confirmed by the technical one");
  return c;
}

double recompute_violation(const ScalarField& f, const ViolationWitness& w) {
  return h_value(f, w.x_star, w.x) - h_value(f, w.x_star, w.y);
}

CconcavityResult empirical_cconcavity(const ScalarField& f, const SampleGrid& x_grid,
                                      const SampleGrid& y_grid, double tol, bool refine) {
  const Manifold& M = f.manifold();
  double inj = M.injectivity_radius();

  CconcavityResult res;
  double scale = 1.0;
  YTable table(f, y_grid);
  scale = std::max(1.0, table.fvals.abs().maxCoeff());
  double h_eff = refine ? 1e-6 : y_grid.spacing;
  res.threshold = std::max(tol, 5.0 * h_eff * h_eff * scale);

  ViolationWitness worst;
  for (const Point& x : x_grid.points) {
    TangentVector g = f.grad(x);
    if (g.norm() >= inj)
      throw cut_locus_error("empirical_cconcavity: |grad f| exceeds the injectivity radius");
    Point xstar = exp_map(M, TangentVector(x, -g.v));
    double hx = 0.5 * g.v.squaredNorm() - f.eval(x);

    Eigen::ArrayXd hy = table.h_values(xstar);
    Eigen::Index best;
    double hy_min = hy.minCoeff(&best);
    Point y_best = table.points[std::size_t(best)];
    if (refine) {
      auto [y_ref, h_ref] = refine_minimum(f, xstar, y_best, y_grid.spacing);
      if (h_ref < hy_min) {
        hy_min = h_ref;
        y_best = y_ref;
      }
    }
    double margin = hx - hy_min;
    res.x_margins.push_back(margin);
    if (margin > res.worst_violation) {
      res.worst_violation = margin;
      worst = ViolationWitness{x, xstar, y_best, margin};
    }
    ++res.x_checked;
  }

  if (res.worst_violation > res.threshold) {
    res.pass = false;
    res.witness = worst;
  }

  double G = sup_gradient_norm(f, y_grid);
  res.smallness = oscillation(f, y_grid) + 0.5 * G * G;
  double cb = convexity_budget(M);
  res.smallness_budget = 0.5 * cb * cb;
  res.small_oscillation_regime = res.smallness <= res.smallness_budget;
  return res;
}

ThreeClaimsReport check_three_claims(const ScalarField& f, const Point& x,
                                     const SampleGrid& grid, double tol) {
  const Manifold& M = f.manifold();
  double inj = M.injectivity_radius();
  TangentVector g = f.grad(x);
  if (g.norm() >= inj)
    throw cut_locus_error("check_three_claims: |grad f| exceeds the injectivity radius");
  Point xstar = exp_map(M, TangentVector(x, -g.v));
  double hx = 0.5 * g.v.squaredNorm() - f.eval(x);

  ThreeClaimsReport rep;
  rep.delta = delta_of(f, grid);

  // Claim 1: far samples cannot beat x.
  rep.claim1_margin = kInf;
  for (const Point& y : grid.points) {
    if (distance(M, xstar, y) < rep.delta) continue;
    rep.claim1_margin = std::min(rep.claim1_margin, h_value(f, xstar, y) - hx);
  }
  rep.pass1 = rep.claim1_margin >= -tol;

  // Claim 2: the arrival velocity of the geodesic from x* equals grad f(x).
  Vec3 arrival = g.norm() < 1e-14 ? Vec3(Vec3::Zero()) : Vec3(-log_map(M, x, xstar).v);
  rep.claim2_error = (arrival - g.v).norm();
  rep.pass2 = rep.claim2_error <= std::max(tol, 1e-9);

  // Claim 3: h is convex on B(x*, delta).
  rep.claim3_margin = kInf;
  double ball = rep.delta;
  if (std::isfinite(inj)) ball = std::min(ball, 0.99 * inj);
  std::mt19937_64 rng(grid.seed ^ 0xabcdef12345ull);
  std::vector<Point> ball_samples;
  ball_samples.push_back(xstar);
  for (int i = 0; i < 256; ++i)
    ball_samples.push_back(random_point_in_ball(M, xstar, ball, rng));
  for (const Point& y : grid.points)
    if (distance(M, xstar, y) < ball) ball_samples.push_back(y);
  for (const Point& y : ball_samples) {
    SymForm hess_h = hessian_half_r2(M, xstar, y) - f.hess(y);
    rep.claim3_margin = std::min(rep.claim3_margin, hess_h.min_eigenvalue());
  }
  rep.pass3 = rep.claim3_margin >= -tol;
  return rep;
}

}  // namespace ccv
