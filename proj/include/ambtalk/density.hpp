#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ambtalk/interval.hpp"
#include "ambtalk/numerics.hpp"

namespace ambtalk {

enum class DensityKind {
  uniform,
  piecewise_linear,
  piecewise_polynomial,
  truncated_normal,
  counterexample,
  // Exponentially tilted worst case produced by the receiver solver.
  tilted,
};

std::string_view to_string(DensityKind kind);

// Immutable probability density on a sub-interval of [0, 1].
//
// Values are produced by a breakpoint-segmented evaluator: between
// consecutive breakpoints the density is smooth, so every integral over it
// is split there. Evaluation outside the support returns 0. Copies share the
// underlying evaluator and are safe to read from multiple threads.
class Density {
 public:
  using Evaluator = std::function<double(double)>;

  // Builds a density from a nonnegative, not necessarily normalized,
  // evaluator. The result is rescaled so that it integrates to 1 over the
  // support. Throws ZeroMassError if the total mass is not positive.
  static Density from_unnormalized(DensityKind kind, Interval support, std::vector<double> breakpoints,
                                   Evaluator unnormalized, std::string description,
                                   const numerics::QuadratureSpec& quad = {});

  // Builds a density from an evaluator that is already normalized and its
  // log. No quadrature is performed.
  static Density from_normalized_log(DensityKind kind, Interval support, std::vector<double> breakpoints,
                                     Evaluator log_density, std::string description);

  const Interval& support() const { return impl_->support; }
  DensityKind kind() const { return impl_->kind; }
  std::span<const double> breakpoints() const { return impl_->breakpoints; }
  const std::string& description() const { return impl_->description; }

  double operator()(double theta) const;
  // log density; -inf where the density vanishes or outside the support.
  double log_value(double theta) const;

  // Integral of fn(theta) * density(theta) over the support.
  double expectation(const numerics::ScalarFn& fn, const numerics::QuadratureSpec& quad = {}) const;
  // Integral of the density over iv intersected with the support.
  double mass(const Interval& iv, const numerics::QuadratureSpec& quad = {}) const;

 private:
  struct Impl {
    Interval support;
    DensityKind kind;
    std::vector<double> breakpoints;
    Evaluator value;
    Evaluator log_value;
    std::string description;
  };
  explicit Density(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

struct Knot {
  double theta;
  double value;
};

// Polynomial sum_k coeffs[k] * (theta - lo)^k on [lo, hi].
struct PolynomialPiece {
  double lo;
  double hi;
  std::vector<double> coeffs;
};

Density make_uniform(const Interval& iv);

// Linear interpolation between knots, rescaled to unit mass on iv. Knots
// must be sorted by strictly increasing theta, nonnegative, and span iv.
Density make_piecewise_linear(std::span<const Knot> knots, const Interval& iv);

// Contiguous polynomial pieces covering iv, rescaled to unit mass. Pieces
// must be nonnegative (checked on a dense grid per piece).
Density make_piecewise_polynomial(std::span<const PolynomialPiece> pieces, const Interval& iv);

// Normal(h, sigma^2) truncated to iv.
Density make_truncated_normal(double h, double sigma, const Interval& iv);

// Smooth density on [0, 1] converging almost uniformly to the step function
// 0 on [0, 1/4], 3 on [1/4, 1/2], 0 on [1/2, 3/4], 1 on [3/4, 1] as
// epsilon -> 0. Each jump at 1/4, 1/2, 3/4 is replaced on [b - eps, b + eps]
// by a quintic smoothstep (matched value, slope and curvature at the
// window edges), then the result is renormalized. Requires 0 < eps < 1/8.
Density make_counterexample(double epsilon);

// The step function the counterexample family converges to.
double counterexample_limit(double theta);

// Bayesian restriction g(theta) / mass(g, iv) on iv. Throws ZeroMassError
// when iv carries no mass under g.
Density restrict(const Density& g, const Interval& iv, const numerics::QuadratureSpec& quad = {});

double mean(const Density& f, const numerics::QuadratureSpec& quad = {});
double variance(const Density& f, const numerics::QuadratureSpec& quad = {});

// Relative entropy of f with respect to g on their common support, with the
// convention 0 log 0 = 0. Returns +inf when f > 0 at a quadrature node where
// g = 0. Throws InvalidArgument on mismatched supports.
double kl_divergence(const Density& f, const Density& g, const numerics::QuadratureSpec& quad = {});

// theta -> g(lo + hi - theta) on the same support.
Density mirror(const Density& g);

}  // namespace ambtalk
