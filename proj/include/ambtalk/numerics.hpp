#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ambtalk/interval.hpp"

namespace ambtalk::numerics {

using ScalarFn = std::function<double(double)>;

struct QuadratureSpec {
  int nodes_per_segment = 64;
  // Maximum bisection depth of any segment during adaptive refinement.
  int refinement_limit = 40;
  // Total number of subintervals across all segments.
  int max_subintervals = 2000;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;

  void validate() const;
};

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

// Splits iv at the given breakpoints. Breakpoints outside the open interval
// (iv.lo, iv.hi) are ignored; duplicates are merged.
std::vector<double> segment_edges(const Interval& iv, std::span<const double> breakpoints);

// Composite adaptive Gauss-Legendre quadrature of fn over iv, split at the
// breakpoints. The piece whose one-rule and two-rule estimates disagree most
// is bisected until the summed disagreement is within
// max(abs_tol, rel_tol * integral of |fn|). When the subinterval budget runs
// out, a result within sqrt(eps) * integral of |fn| is accepted (the
// integrand is then noise-limited). Throws NumericalError on a non-finite
// evaluation, past the refinement depth, or when the budget is exhausted
// short of that.
double integrate(const ScalarFn& fn, const Interval& iv, std::span<const double> breakpoints = {},
                 const QuadratureSpec& spec = {});

// log of the integral of exp(logfn) over iv. The integrand is shifted by the
// largest value of logfn seen on the initial nodes (and finite segment
// endpoints) before exponentiating, so logfn may take values far beyond the
// double exponent range. logfn may return -inf.
double log_integrate_exp(const ScalarFn& logfn, const Interval& iv,
                         std::span<const double> breakpoints = {}, const QuadratureSpec& spec = {});

struct MinimizeResult {
  double x;
  double value;
  int iterations;
};

// Brent's golden-section / parabolic minimizer on iv. fn is assumed unimodal;
// the returned x is within about tol + sqrt(eps) |x| of the minimizer
// (endpoints included).
MinimizeResult minimize_scalar(const ScalarFn& fn, const Interval& iv, double tol = 1e-10);

struct RootResult {
  double x;
  int iterations;
};

// Bracketed root of fn on [lo, hi]; requires fn(lo) * fn(hi) <= 0. Stops when
// |fn(x)| <= tol or the bracket is narrower than tol.
RootResult find_root_ex(const ScalarFn& fn, std::pair<double, double> bracket, double tol = 1e-12);

inline double find_root(const ScalarFn& fn, std::pair<double, double> bracket, double tol = 1e-12) {
  return find_root_ex(fn, bracket, tol).x;
}

}  // namespace ambtalk::numerics
