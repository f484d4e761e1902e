#pragma once

#include <optional>
#include <string>

#include "ccv/sampling.hpp"
#include "ccv/scalar_field.hpp"

namespace ccv {

// delta = sqrt(2 diam G + G^2) for a gradient bound G.
double delta_for(double diam, double grad_bound);

// delta computed from the certified gradient bound of f on `grid`.
double delta_of(const ScalarField& f, const SampleGrid& grid);

struct AdmissibleBound {
  double c_star;     // largest gradient bound keeping delta within budget
  double eps_bound;  // eps / (3 K diam); +inf when K = 0
};

// Gradient budget under which the Hessian condition hess f <= (1-eps) g
// certifies c-concavity: C* is the positive root of
// t^2 + 2 diam t - min(inj/2, 1/sqrt(K))^2 = 0.
AdmissibleBound admissible_gradient_bound(double K, double inj, double diam, double eps);

struct Certificate {
  enum class Verdict { Certified, FailedDelta, FailedHessian };

  double K = 0.0, inj = 0.0, diam = 0.0;
  double grad_bound = 0.0;    // certified sup |grad f|
  double delta = 0.0;
  double delta_budget = 0.0;  // min(inj/2, 1/sqrt(K))
  double hess_margin = 0.0;   // min eig of (threshold g - hess f) over the grid
  double hess_threshold = 1.0;  // 1 - K delta^2, or 1 - eps for the main variant
  Verdict verdict = Verdict::Certified;
  double epsilon = std::numeric_limits<double>::quiet_NaN();  // main variant only
  double tol = 0.0;
  std::uint64_t grid_seed = 0;
  std::size_t grid_n = 0;

  bool certified() const { return verdict == Verdict::Certified; }
  std::string verdict_name() const;
};

// Hypotheses of the quantitative sufficient condition:
// delta <= min(inj/2, 1/sqrt(K)) and hess f <= (1 - K delta^2) g.
Certificate certify_technical(const ScalarField& f, const SampleGrid& grid,
                              double tol = 1e-8);

// Hypotheses of the headline sufficient condition: |grad f| bounded by
// min(eps/(3 K diam), C*) and hess f <= (1 - eps) g. A Certified result
// is re-checked against certify_technical at runtime.
Certificate certify_main(const ScalarField& f, double eps, const SampleGrid& grid,
                         double tol = 1e-8);

// A pair (x, y) falsifying the argmin characterization: with
// x* = exp_x(-grad f(x)) and h = (1/2) d^2(x*, .) - f, h(y) < h(x).
struct ViolationWitness {
  Point x, x_star, y;
  double violation = 0.0;  // h(x) - h(y) > 0
};

double recompute_violation(const ScalarField& f, const ViolationWitness& w);

struct CconcavityResult {
  bool pass = true;
  // max over x of h(x) - min_y h(y); positive values are candidate
  // violations, reported as witnesses only above `threshold`.
  double worst_violation = -std::numeric_limits<double>::infinity();
  double threshold = 0.0;
  std::optional<ViolationWitness> witness;
  std::size_t x_checked = 0;
  std::vector<double> x_margins;  // per-x h(x) - min_y h(y), grid order
  // Small-oscillation regime marker: when osc(f) + |grad f|^2/2 fits in
  // half the squared convexity radius, a failure also disproves
  // c-concavity (not only the argmin condition).
  double smallness = 0.0;
  double smallness_budget = 0.0;
  bool small_oscillation_regime = false;
};

// Tests the argmin characterization with x* = exp_x(-grad f(x)) on the
// given grids: a coarse scan over y followed by gradient descent on h
// from the best candidate. Pass is one-sided at grid resolution; Fail
// with a margin above `threshold` disproves the argmin condition.
CconcavityResult empirical_cconcavity(const ScalarField& f, const SampleGrid& x_grid,
                                      const SampleGrid& y_grid, double tol = 1e-7,
                                      bool refine = true);

struct ThreeClaimsReport {
  double delta = 0.0;
  double claim1_margin = 0.0;  // min over y outside B(x*, delta) of h(y) - h(x)
  double claim2_error = 0.0;   // |gamma'(1) - grad f(x)|
  double claim3_margin = 0.0;  // min eig of hess h over B(x*, delta)
  bool pass1 = false, pass2 = false, pass3 = false;
  bool pass() const { return pass1 && pass2 && pass3; }
};

// The three steps behind the sufficient condition, checked numerically
// at one base point x: far points cannot beat x, x is critical for h,
// and h is convex on the ball B(x*, delta).
ThreeClaimsReport check_three_claims(const ScalarField& f, const Point& x,
                                     const SampleGrid& grid, double tol = 1e-7);

}  // namespace ccv
