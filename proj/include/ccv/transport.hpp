#pragma once

#include <cstdint>
#include <vector>

#include "ccv/cconcavity.hpp"

namespace ccv {

struct size_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Discrete measure support (uniform weights unless given).
struct PointCloud {
  Manifold manifold;
  std::vector<Point> points;
  std::vector<double> weights;  // empty = uniform

  std::size_t size() const { return points.size(); }
};

constexpr std::size_t kMaxAssignmentSize = 512;

struct Assignment {
  std::vector<std::size_t> perm;  // row i matched to column perm[i]
  double cost = 0.0;
};

// Images exp_{x_i}(-grad f(x_i)) of the cloud under the gradient map.
PointCloud mccann_map(const ScalarField& f, const PointCloud& cloud);

// C_ij = (1/2) d^2(source_i, target_j).
Eigen::MatrixXd cost_matrix(const PointCloud& sources, const PointCloud& targets);
double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<std::size_t>& perm);

// Exact solver for the square linear assignment problem (shortest
// augmenting paths with potentials, O(n^3)); n capped at 512.
Assignment optimal_assignment(const Eigen::MatrixXd& cost);

struct MonotonicityReport {
  std::size_t trials = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::string worst;  // subset and permutation achieving the minimum
  bool pass = false;
};

// Sampled c-cyclical monotonicity of the paired graph (x_i, T_i):
// permuted cost minus paired cost over random subsets (full permutation
// enumeration up to size 6) and random full-length permutations.
MonotonicityReport check_cyclical_monotonicity(const PointCloud& sources,
                                               const PointCloud& targets,
                                               std::size_t trials, std::uint64_t seed,
                                               double tol = 1e-9);

struct OptimalityReport {
  std::size_t n = 0;
  double paired_cost = 0.0;
  double optimal_cost = 0.0;
  double gap = 0.0;  // paired - optimal
  bool certified = false;
  bool pass = false;
};

// The McCann pairing x_i -> T_i must be an optimal assignment between the
// cloud and its image when f carries a certificate. Set
// require_certificate = false to run falsification experiments.
OptimalityReport verify_optimality(const ScalarField& f, const PointCloud& cloud,
                                   const SampleGrid& grid, double tol = 1e-9,
                                   bool require_certificate = true);

}  // namespace ccv
