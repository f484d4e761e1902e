#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ccv/sampling.hpp"
#include "ccv/scalar_field.hpp"

namespace ccv {

struct ComparisonReport {
  std::string name;
  std::size_t samples = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double tol = 0.0;
  bool pass = false;
  std::string worst;                     // description of the worst sample
  std::map<std::string, double> stats;   // check-specific extras
};

// t cos(t)/sin(t), continuously extended by alpha(0) = 1.
double alpha(double t);

// Hessian of r = d(x, .) against the constant-curvature lower bound
// sqrt(K) cos(sqrt(K) r)/sin(sqrt(K) r) (g - dr (x) dr), K -> 0 giving
// (g - dr (x) dr)/r. On these constant-curvature models the bound is an
// identity, so the margin must vanish to rounding.
ComparisonReport check_hessian_comparison(const Manifold& M, const SampleGrid& grid,
                                          double tol = 1e-8);

// (1/2) hess(r^2) >= (1 - K r^2) g for r < min(1/sqrt(K), inj).
ComparisonReport check_half_square_bound(const Manifold& M, const SampleGrid& grid,
                                         double tol = 1e-8);

// |1 - alpha(t)| <= t^2/2 on [0, 1).
ComparisonReport check_alpha_inequality(const std::vector<double>& t_grid,
                                        double tol = 1e-8);
std::vector<double> alpha_default_grid(std::size_t n = 4096);

// Geodesics between sampled pairs in B(x, delta) must stay inside the
// ball whenever delta <= min(inj/2, pi/(2 sqrt(K))). Pass
// enforce_radius_bound = false to probe oversized balls for violations.
ComparisonReport check_convexity_radius(const Manifold& M, const Point& x,
                                        double delta, std::size_t pair_samples,
                                        std::uint64_t seed, double tol = 1e-8,
                                        bool enforce_radius_bound = true);

// Finite-difference Hessians of r and (1/2) r^2 on the sphere of radius R
// against the closed forms cot(r)(g - dr dr) and
// r cot(r) g + (1 - r cot r) dr dr (unit radius; scaled for general R).
// Samples keep r/R in [angle_lo, pi - angle_lo]: the FD error constant
// grows like 1/sin^3(r/R) toward either end, so the window keeps the
// observed error inside the 10 h^2 budget.
ComparisonReport check_sphere_identity(double R, std::size_t n_pairs, double h,
                                       std::uint64_t seed, double tol = 0.0,
                                       double angle_lo = 0.6);

}  // namespace ccv
