#include "ccv/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ccv {

PointCloud mccann_map(const ScalarField& f, const PointCloud& cloud) {
  const Manifold& M = f.manifold();
  double inj = M.injectivity_radius();
  PointCloud out;
  out.manifold = M;
  out.weights = cloud.weights;
  out.points.reserve(cloud.size());
  for (const Point& x : cloud.points) {
    TangentVector g = f.grad(x);
    if (g.norm() >= inj)
      throw cut_locus_error("mccann_map: |grad f| exceeds the injectivity radius");
    out.points.push_back(exp_map(M, TangentVector(x, -g.v)));
  }
  return out;
}

Eigen::MatrixXd cost_matrix(const PointCloud& sources, const PointCloud& targets) {
  if (sources.size() != targets.size())
    throw size_error("cost_matrix: source and target sizes differ");
  const std::size_t n = sources.size();
  Eigen::MatrixXd c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double d = distance(sources.manifold, sources.points[i], targets.points[j]);
      c(i, j) = 0.5 * d * d;
    }
  return c;
}

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<std::size_t>& perm) {
  double total = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) total += cost(i, perm[i]);
  return total;
}

Assignment optimal_assignment(const Eigen::MatrixXd& cost) {
  const int n = int(cost.rows());
  if (cost.cols() != n) throw size_error("optimal_assignment: matrix must be square");
  if (std::size_t(n) > kMaxAssignmentSize)
    throw size_error("optimal_assignment: size exceeds the 512 cap");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = match[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  Assignment a;
  a.perm.assign(n, 0);
  for (int j = 1; j <= n; ++j)
    if (match[j] > 0) a.perm[match[j] - 1] = std::size_t(j - 1);
  a.cost = assignment_cost(cost, a.perm);
  return a;
}

MonotonicityReport check_cyclical_monotonicity(const PointCloud& sources,
                                               const PointCloud& targets,
                                               std::size_t trials, std::uint64_t seed,
                                               double tol) {
  if (sources.size() != targets.size())
    throw size_error("check_cyclical_monotonicity: paired clouds must match in size");
  const std::size_t n = sources.size();
  const Manifold& M = sources.manifold;

  auto half_d2 = [&](std::size_t i, std::size_t j) {
    double d = distance(M, sources.points[i], targets.points[j]);
    return 0.5 * d * d;
  };

  MonotonicityReport rep;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});

  auto record = [&](const std::vector<std::size_t>& subset,
                    const std::vector<std::size_t>& sigma) {
    double paired = 0.0, permuted = 0.0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
      paired += half_d2(subset[k], subset[k]);
      permuted += half_d2(subset[k], subset[sigma[k]]);
    }
    double slack = permuted - paired;
    if (slack < rep.min_slack) {
      rep.min_slack = slack;
      std::ostringstream os;
      os << "subset={";
      for (std::size_t s : subset) os << s << " ";
      os << "} sigma={";
      for (std::size_t s : sigma) os << s << " ";
      os << "}";
      rep.worst = os.str();
    }
  };

  for (std::size_t t = 0; t < trials; ++t) {
    if (n >= 2 && t % 4 != 3) {
      // Small subset with full permutation enumeration; short cycles are
      // where monotonicity violations concentrate.
      std::uniform_int_distribution<std::size_t> size_dist(2, std::min<std::size_t>(6, n));
      std::size_t k = size_dist(rng);
      std::vector<std::size_t> subset = all;
      std::shuffle(subset.begin(), subset.end(), rng);
      subset.resize(k);
      std::sort(subset.begin(), subset.end());
      std::vector<std::size_t> sigma(k);
      std::iota(sigma.begin(), sigma.end(), std::size_t{0});
      do {
        record(subset, sigma);
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    } else {
      std::vector<std::size_t> sigma = all;
      std::shuffle(sigma.begin(), sigma.end(), rng);
      record(all, sigma);
    }
    ++rep.trials;
  }
  if (n < 2) {
    record(all, all);
    rep.trials = 1;
  }
  rep.pass = rep.min_slack >= -tol;
  return rep;
}

OptimalityReport verify_optimality(const ScalarField& f, const PointCloud& cloud,
                                   const SampleGrid& grid, double tol,
                                   bool require_certificate) {
  OptimalityReport rep;
  rep.n = cloud.size();
  Certificate cert = certify_technical(f, grid);
  rep.certified = cert.certified();
  if (require_certificate && !rep.certified)
    throw std::invalid_argument(
        "verify_optimality: field is not certified (pass require_certificate=false "
        "to run anyway)");

  PointCloud images = mccann_map(f, cloud);
  Eigen::MatrixXd c = cost_matrix(cloud, images);
  std::vector<std::size_t> identity(cloud.size());
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  rep.paired_cost = assignment_cost(c, identity);
  rep.optimal_cost = optimal_assignment(c).cost;
  rep.gap = rep.paired_cost - rep.optimal_cost;
  rep.pass = rep.gap <= tol;
  return rep;
}

}  // namespace ccv
