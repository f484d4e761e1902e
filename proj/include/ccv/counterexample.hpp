#pragma once

#include "ccv/cconcavity.hpp"

namespace ccv {

// Configuration of the sphere field f = f1 + eps_mix * f2 with
// hess f <= g everywhere yet no c-concavity: f1 flattens (1/2) d^2(N, .)
// through a C2 ramp, f2 tilts the gradient at the north pole while
// keeping its own Hessian non-positive nearby.
struct CounterexampleConfig {
  double radius = 1.0;
  double eps_mix = 0.16;
  double t0 = 0.02;      // ramp identity zone, in units of (1/2) d^2
  double t1 = 0.1;       // ramp plateau start
  double a = 1.0;        // gradient size of f2 at N
  double c = 0.4;        // cubic coefficient of f2
  double cut_in = 0.45;  // cubic cutoff band
  double cut_out = 1.5;
  std::size_t scan_n = 16384;  // Hessian bound scan
  std::size_t grid_n = 4096;   // empirical check grids
  std::uint64_t seed = 20240601;
  double tol = 1e-7;       // empirical check tolerance
  double scan_tol = 1e-8;  // Hessian scan tolerance

  Manifold manifold() const { return Manifold::sphere(radius); }
  Point north() const { return Point(0.0, 0.0, radius); }
};

// rho((1/2) d^2(N, .)): gradient vanishes at N, Hessian equals g there
// and never exceeds it.
ScalarField build_f1(const Manifold& M, const Point& north, const RampProfile& ramp);

struct F2Result {
  ScalarField field;
  double neg_radius;  // largest scanned r with -hess f2 >= 0 on r' <= r
};

// a <y, E1> - c |u|^3 (cubic radially cut off): nonzero gradient and zero
// Hessian at N, Hessian <= 0 on a scanned neighborhood. Throws
// construction_error when the scan cannot verify a neighborhood of radius
// at least 1e-2 (c too small relative to a).
F2Result build_f2(const Manifold& M, const Point& north, double a, double c,
                  const RadialCutoff& cutoff);

struct HessianScan {
  double min_eig = 0.0;  // min over samples of min eig(g - hess f)
  Point worst;
  std::size_t samples = 0;
};

// Grid scan of the slack g - hess f with local descent from the worst
// points to guard against aliasing.
HessianScan scan_hessian_bound(const ScalarField& f, const SampleGrid& grid,
                               int refine_top = 20);

// f1 + eps_mix f2, with the composite Hessian bound verified by scan;
// throws construction_error when the scan fails (shrink eps_mix).
ScalarField build_counterexample(const CounterexampleConfig& cfg);

struct CounterexampleReport {
  // (i) hess f <= g globally (scan margin >= -scan_tol)
  bool hessian_bound_ok = false;
  double hessian_scan_min = 0.0;
  // (ii) the argmin characterization fails with a clear witness
  bool violation_found = false;
  double violation = 0.0;
  std::optional<ViolationWitness> witness;
  double witness_dist_north = 0.0;
  bool witness_local = false;  // d(x, N) <= 3 eps_mix a, informative only
  // (iii) hess h at N has the predicted negative tangential eigenvalue
  bool mechanism_ok = false;
  double mechanism_eig = 0.0;
  double mechanism_expected = 0.0;  // r* cot(r*) - 1
  double r_star = 0.0;
  double smallness = 0.0;
  bool small_oscillation_regime = false;

  bool pass() const { return hessian_bound_ok && violation_found && mechanism_ok; }
};

CounterexampleReport verify_counterexample(const ScalarField& f,
                                           const CounterexampleConfig& cfg);

}  // namespace ccv
