#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ambtalk/density.hpp"
#include "ambtalk/interval.hpp"
#include "ambtalk/numerics.hpp"

namespace ambtalk {

// Multiplier on the relative-entropy penalty. beta = 0 is full ambiguity
// (maxmin over all priors), beta = infinity is the Bayesian receiver.
class AmbiguityLevel {
 public:
  enum class Mode { full_ambiguity, finite, bayesian };

  static AmbiguityLevel full_ambiguity() { return AmbiguityLevel(Mode::full_ambiguity, 0.0); }
  static AmbiguityLevel bayesian();
  // Requires 0 < beta < infinity.
  static AmbiguityLevel finite(double beta);

  Mode mode() const { return mode_; }
  // 0 for full ambiguity, +inf for Bayesian.
  double beta() const { return beta_; }
  std::string to_string() const;

  friend bool operator==(const AmbiguityLevel&, const AmbiguityLevel&) = default;

 private:
  AmbiguityLevel(Mode mode, double beta) : mode_(mode), beta_(beta) {}
  Mode mode_;
  double beta_;
};

// Nature's worst case under full ambiguity: a fair coin over the endpoints.
struct EndpointLottery {
  double lo;
  double hi;
  double p_lo = 0.5;
  double p_hi = 0.5;
};

enum class SolveRegime {
  full_ambiguity,
  // A finite beta below the cutoff, solved on the exact full-ambiguity branch.
  small_beta_cutoff,
  tilted,
  bayesian,
};

std::string_view to_string(SolveRegime regime);

struct ReceiverOptions {
  numerics::QuadratureSpec quad{};
  // Tolerance on the argmin of the dual objective before the FOC polish.
  double bracket_tol = 1e-7;
  // Root tolerance of the first-order condition.
  double foc_tol = 1e-13;
  // Finite beta below this value switches to the full-ambiguity branch.
  double small_beta_cutoff = 1e-4;
};

struct ReceiverSolution {
  Interval interval;
  AmbiguityLevel level;
  double action;
  // C = -log J(a*); -inf under full ambiguity, 0 for the Bayesian receiver.
  double normalizer;
  // Worst-case expected payoff including the entropy penalty.
  double value;
  std::variant<Density, EndpointLottery> worst_case;
  // E_f[theta] - a at the returned action.
  double foc_residual;
  int iterations;
  SolveRegime regime;
};

struct TiltedDensity {
  Density density;
  double normalizer;
};

// f(theta) = exp(C + (theta - a)^2 / beta) g_m(theta), C = -log J(a).
TiltedDensity worst_case_density(const Density& g_m, double a, double beta, const numerics::QuadratureSpec& quad = {});

// log J(a), J(a) = integral of g_m(theta) exp((theta - a)^2 / beta).
double dual_objective(const Density& g_m, double a, double beta, const numerics::QuadratureSpec& quad = {});

// E_f[theta] - a under the tilted density at action a.
double foc_residual(const Density& g_m, double a, double beta, const numerics::QuadratureSpec& quad = {});

// a -> E_{f(.; a)}[theta]; its fixed point is the optimal action.
double fixed_point_map(const Density& g_m, double a, double beta, const numerics::QuadratureSpec& quad = {});

// Optimal robust action on iv. g_m must be the restriction of the reference
// density to iv.
ReceiverSolution solve_action(const Density& g_m, const Interval& iv, const AmbiguityLevel& level,
                              const ReceiverOptions& options = {});

struct SweepPoint {
  double beta;
  ReceiverSolution solution;
};

// solve_action for each finite beta; betas must be positive and ascending.
std::vector<SweepPoint> action_sweep(const Density& g_m, const Interval& iv, std::span<const double> betas,
                                     const ReceiverOptions& options = {});

}  // namespace ambtalk
