#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ccv/manifold.hpp"

namespace ccv {

// Deterministic quasi-uniform sample set with a certified covering radius
// (every point of M lies within `spacing` of some sample).
struct SampleGrid {
  Manifold manifold;
  std::vector<Point> points;
  double spacing = 0.0;
  std::uint64_t seed = 0;
  std::size_t size() const { return points.size(); }
};

// Fibonacci lattice on the sphere, square lattice on the torus, box
// lattice on Euclidean space; `seed` randomizes the lattice placement.
SampleGrid make_grid(const Manifold& M, std::size_t n, std::uint64_t seed);

Point random_point(const Manifold& M, std::mt19937_64& rng);
std::vector<Point> random_points(const Manifold& M, std::size_t n, std::mt19937_64& rng);
TangentVector random_unit_tangent(const Manifold& M, const Point& p, std::mt19937_64& rng);

// Uniform sample inside the metric ball B(center, radius).
Point random_point_in_ball(const Manifold& M, const Point& center, double radius,
                           std::mt19937_64& rng);

}  // namespace ccv
