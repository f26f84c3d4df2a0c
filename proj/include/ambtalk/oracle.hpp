#pragma once

#include <span>
#include <vector>

#include "ambtalk/density.hpp"
#include "ambtalk/interval.hpp"

// Brute-force reference implementations. Nothing here calls the solver
// quadrature, minimizer or root finder: integrals use a composite Simpson
// rule and optimization is exhaustive enumeration.
namespace ambtalk::oracle {

struct GridSpec {
  int n_points = 100001;
  void validate() const;
};

// Simpson rule over [lo, hi] split at the density's breakpoints, with at
// least `panels_per_unit` panels per unit length.
double simpson(const std::function<double(double)>& fn, const Interval& iv, std::span<const double> breakpoints,
               int panels_per_unit = 512);

// Grid point of iv minimizing log J(a), J(a) = integral g_m exp((theta-a)^2/beta).
// Lowest index wins ties.
double grid_action(const Density& g_m, const Interval& iv, double beta, const GridSpec& grid = {});

struct DiscreteInnerMin {
  // Exhaustive minimizer over the simplex lattice with step 1/(n_points - 1).
  std::vector<double> f_grid;
  double value_grid;
  // Closed-form exponential tilt f_j proportional to g_j exp((theta_j - a)^2 / beta).
  std::vector<double> f_tilt;
  double value_tilt;
  // max_j |f_grid_j - f_tilt_j|
  double max_abs_diff;
  double resolution;
};

// Minimizes sum_j f_j * (-(a - theta_j)^2) + beta * sum_j f_j log(f_j / g_j)
// over the probability simplex on at most 4 support points.
DiscreteInnerMin discrete_inner_min(std::span<const double> g_weights, std::span<const double> support_points, double a,
                                    double beta, const GridSpec& grid = {41});

// Uniform-reference Bayesian partition thresholds, theta_i = i/N + 2 d i (i - N).
// Throws InvalidArgument unless 2 N (N - 1) d < 1.
std::vector<double> cs_uniform_thresholds(double d, int intervals);

// Payoff guaranteed by action a against every endpoint lottery on iv:
// -max((a - lo)^2, (hi - a)^2).
double endpoint_lottery_value(const Interval& iv, double a);

// Grid point of iv maximizing endpoint_lottery_value.
double grid_maximin_action(const Interval& iv, const GridSpec& grid = {});

}  // namespace ambtalk::oracle
