#include "ccv/sampling.hpp"

#include <cmath>

namespace ccv {

namespace {

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

double probe_covering_radius(const Manifold& M, const std::vector<Point>& pts,
                             std::size_t probes, std::mt19937_64& rng) {
  double worst = 0.0;
  for (std::size_t i = 0; i < probes; ++i) {
    Point p = random_point(M, rng);
    double best = std::numeric_limits<double>::infinity();
    for (const Point& q : pts) best = std::min(best, distance(M, p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

SampleGrid make_grid(const Manifold& M, std::size_t n, std::uint64_t seed) {
  SampleGrid g;
  g.manifold = M;
  g.seed = seed;
  std::mt19937_64 rng(seed);
  if (n == 0) throw std::invalid_argument("empty grid requested");

  switch (M.kind) {
    case ManifoldKind::Sphere: {
      const double ga = M_PI * (3.0 - std::sqrt(5.0));  // golden angle
      Eigen::Matrix3d rot = random_rotation(rng);
      g.points.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        double z = 1.0 - (2.0 * i + 1.0) / double(n);
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double th = ga * double(i);
        Vec3 p(rho * std::cos(th), rho * std::sin(th), z);
        g.points.push_back(Point(M.radius * (rot * p)));
      }
      // The lattice has no simple closed-form covering radius; probe it
      // and inflate so the stored value is a sound upper bound.
      g.spacing = 1.3 * probe_covering_radius(M, g.points, 1024, rng);
      break;
    }
    case ManifoldKind::FlatTorus: {
      std::size_t m = std::size_t(std::ceil(std::sqrt(double(n))));
      double cell = M.period / double(m);
      std::uniform_real_distribution<double> u(0.0, cell);
      double ox = u(rng), oy = u(rng);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          g.points.push_back(project(M, Point(ox + cell * double(i),
                                              oy + cell * double(j), 0.0)));
      g.spacing = cell * std::sqrt(2.0) / 2.0;
      break;
    }
    case ManifoldKind::Euclidean: {
      int d = M.dim;
      std::size_t m = std::size_t(std::ceil(std::pow(double(n), 1.0 / d)));
      Vec3 cell = Vec3::Zero();
      for (int k = 0; k < d; ++k) cell[k] = (M.box_max[k] - M.box_min[k]) / double(m);
      // Cell-center lattice: covering radius is half of the cell diagonal.
      std::vector<std::size_t> idx(d, 0);
      while (true) {
        Vec3 p = Vec3::Zero();
        for (int k = 0; k < d; ++k) p[k] = M.box_min[k] + (idx[k] + 0.5) * cell[k];
        g.points.push_back(Point(p));
        int k = 0;
        while (k < d && ++idx[k] == m) idx[k++] = 0;
        if (k == d) break;
      }
      g.spacing = 0.5 * cell.head(d).norm();
      break;
    }
  }
  return g;
}

Point random_point(const Manifold& M, std::mt19937_64& rng) {
  switch (M.kind) {
    case ManifoldKind::Sphere: {
      std::normal_distribution<double> g(0.0, 1.0);
      Vec3 v(g(rng), g(rng), g(rng));
      while (v.norm() < 1e-12) v = Vec3(g(rng), g(rng), g(rng));
      return Point(M.radius * v.normalized());
    }
    case ManifoldKind::FlatTorus: {
      std::uniform_real_distribution<double> u(0.0, M.period);
      return Point(u(rng), u(rng), 0.0);
    }
    case ManifoldKind::Euclidean: {
      Vec3 p = Vec3::Zero();
      for (int k = 0; k < M.dim; ++k) {
        std::uniform_real_distribution<double> u(M.box_min[k], M.box_max[k]);
        p[k] = u(rng);
      }
      return Point(p);
    }
  }
  return Point();
}

std::vector<Point> random_points(const Manifold& M, std::size_t n, std::mt19937_64& rng) {
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_point(M, rng));
  return out;
}

TangentVector random_unit_tangent(const Manifold& M, const Point& p,
                                  std::mt19937_64& rng) {
  Frame f = frame_at(M, p);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd c(M.dim);
  do {
    for (int i = 0; i < M.dim; ++i) c[i] = g(rng);
  } while (c.norm() < 1e-12);
  c.normalize();
  return TangentVector(p, f.from_components(c));
}

Point random_point_in_ball(const Manifold& M, const Point& center, double radius,
                           std::mt19937_64& rng) {
  // Radius distributed so the sample is area-uniform in the flat picture;
  // close enough to uniform for verification sampling on the sphere.
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = radius * std::sqrt(u(rng));
  TangentVector dir = random_unit_tangent(M, center, rng);
  return exp_map(M, TangentVector(center, r * dir.v));
}

}  // namespace ccv
