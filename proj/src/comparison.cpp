#include "ccv/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ccv {

namespace {

std::string describe_pair(const Point& a, const Point& b, double r) {
  std::ostringstream os;
  os << "x*=(" << a.x.transpose() << ") y=(" << b.x.transpose() << ") r=" << r;
  return os.str();
}

// Deterministically pair each grid point with another one as the center.
std::vector<std::size_t> pairing(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

}  // namespace

double alpha(double t) {
  if (std::abs(t) < 1e-7) return 1.0 - t * t / 3.0;
  return t * std::cos(t) / std::sin(t);
}

ComparisonReport check_hessian_comparison(const Manifold& M, const SampleGrid& grid,
                                          double tol) {
  ComparisonReport rep;
  rep.name = "hessian_comparison";
  rep.tol = tol;
  double K = M.curvature_bound();
  double bound = M.injectivity_radius();
  if (K > 0) bound = std::min(bound, M_PI / std::sqrt(K));

  auto partner = pairing(grid.size(), grid.seed);
  double max_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point& y = grid.points[i];
    const Point& c = grid.points[partner[i]];
    double r = distance(M, c, y);
    if (r < 1e-6 || r > bound - 1e-6) continue;
    double coeff = K > 0 ? std::sqrt(K) * std::cos(std::sqrt(K) * r) /
                               std::sin(std::sqrt(K) * r)
                         : 1.0 / r;
    SymForm lhs = hessian_r(M, c, y);
    SymForm rhs = coeff * (metric_form(M, y) - tensor_square(M, distance_gradient(M, c, y)));
    double margin = (lhs - rhs).min_eigenvalue();
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.worst = describe_pair(c, y, r);
    }
    max_margin = std::max(max_margin, (lhs - rhs).max_eigenvalue());
    ++rep.samples;
  }
  rep.stats["max_margin"] = max_margin;
  rep.pass = rep.min_margin >= -tol;
  return rep;
}

ComparisonReport check_half_square_bound(const Manifold& M, const SampleGrid& grid,
                                         double tol) {
  ComparisonReport rep;
  rep.name = "half_square_bound";
  rep.tol = tol;
  double K = M.curvature_bound();
  double bound = M.injectivity_radius();
  if (K > 0) bound = std::min(bound, 1.0 / std::sqrt(K));

  auto partner = pairing(grid.size(), grid.seed);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point& y = grid.points[i];
    const Point& c = grid.points[partner[i]];
    double r = distance(M, c, y);
    if (r > bound - 1e-6) continue;
    SymForm lhs = hessian_half_r2(M, c, y);
    SymForm rhs = (1.0 - K * r * r) * metric_form(M, y);
    double margin = (lhs - rhs).min_eigenvalue();
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.worst = describe_pair(c, y, r);
    }
    ++rep.samples;
  }
  rep.pass = rep.min_margin >= -tol;
  return rep;
}

std::vector<double> alpha_default_grid(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = double(i) / double(n);  // [0, 1)
  return t;
}

ComparisonReport check_alpha_inequality(const std::vector<double>& t_grid, double tol) {
  ComparisonReport rep;
  rep.name = "alpha_inequality";
  rep.tol = tol;
  for (double t : t_grid) {
    if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("alpha grid must lie in [0,1)");
    double margin = t * t / 2.0 - std::abs(1.0 - alpha(t));
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.worst = "t=" + std::to_string(t);
    }
    ++rep.samples;
  }
  rep.pass = rep.min_margin >= -tol;
  return rep;
}

ComparisonReport check_convexity_radius(const Manifold& M, const Point& x, double delta,
                                        std::size_t pair_samples, std::uint64_t seed,
                                        double tol, bool enforce_radius_bound) {
  double K = M.curvature_bound();
  double budget = M.injectivity_radius() / 2.0;
  if (K > 0) budget = std::min(budget, M_PI / (2.0 * std::sqrt(K)));
  if (!(delta > 0)) throw std::invalid_argument("convexity radius must be positive");
  if (enforce_radius_bound && delta > budget)
    throw std::invalid_argument("radius exceeds the guaranteed convexity bound");

  ComparisonReport rep;
  rep.name = "convexity_radius";
  rep.tol = tol;
  rep.stats["delta"] = delta;
  rep.stats["budget"] = budget;

  std::mt19937_64 rng(seed);
  const int kGeodesicSteps = 33;
  for (std::size_t s = 0; s < pair_samples; ++s) {
    Point p = random_point_in_ball(M, x, delta, rng);
    Point q = random_point_in_ball(M, x, delta, rng);
    if (distance(M, p, q) >= 0.999 * M.injectivity_radius()) continue;
    TangentVector dir = log_map(M, p, q);
    for (int k = 0; k <= kGeodesicSteps; ++k) {
      double t = double(k) / kGeodesicSteps;
      Point g = exp_map(M, TangentVector(p, t * dir.v));
      double margin = delta - distance(M, x, g);
      if (margin < rep.min_margin) {
        rep.min_margin = margin;
        rep.worst = describe_pair(p, q, distance(M, p, q)) + " t=" + std::to_string(t);
      }
    }
    ++rep.samples;
  }
  rep.pass = rep.min_margin >= -tol;
  return rep;
}

ComparisonReport check_sphere_identity(double R, std::size_t n_pairs, double h,
                                       std::uint64_t seed, double tol, double angle_lo) {
  Manifold M = Manifold::sphere(R);
  if (tol <= 0) tol = std::max(1e-6, 10.0 * h * h);
  ComparisonReport rep;
  rep.name = "sphere_identity";
  rep.tol = tol;
  rep.stats["h"] = h;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(angle_lo, M_PI - angle_lo);
  double max_err_r = 0.0, max_err_half = 0.0, max_radial_leak = 0.0;
  for (std::size_t s = 0; s < n_pairs; ++s) {
    Point c = random_point(M, rng);
    TangentVector dir = random_unit_tangent(M, c, rng);
    double r = R * angle(rng);
    Point y = exp_map(M, TangentVector(c, r * dir.v));

    SymForm fd_r = fd_hessian(M, [&](const Point& q) { return distance(M, c, q); }, y, h);
    SymForm fd_h2 = fd_hessian(
        M, [&](const Point& q) { double d = distance(M, c, q); return 0.5 * d * d; }, y, h);
    SymForm cf_r = hessian_r(M, c, y);
    SymForm cf_h2 = hessian_half_r2(M, c, y);

    double err_r = (fd_r.m - cf_r.m).cwiseAbs().maxCoeff();
    double err_h2 = (fd_h2.m - cf_h2.m).cwiseAbs().maxCoeff();
    max_err_r = std::max(max_err_r, err_r);
    max_err_half = std::max(max_err_half, err_h2);

    // The closed form annihilates the radial direction; the FD Hessian
    // should agree there up to the same O(h^2) budget.
    Eigen::VectorXd u = fd_r.frame.components(distance_gradient(M, c, y).v);
    max_radial_leak = std::max(max_radial_leak, (fd_r.m * u).cwiseAbs().maxCoeff());

    double err = std::max(err_r, err_h2);
    double margin = tol - err;
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.worst = describe_pair(c, y, distance(M, c, y));
    }
    ++rep.samples;
  }
  rep.stats["max_err_r"] = max_err_r;
  rep.stats["max_err_half_r2"] = max_err_half;
  rep.stats["max_err"] = std::max(max_err_r, max_err_half);
  rep.stats["max_radial_leak"] = max_radial_leak;
  rep.pass = rep.min_margin >= 0.0;
  return rep;
}

}  // namespace ccv
