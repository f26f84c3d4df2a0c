#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ambtalk/density.hpp"
#include "ambtalk/receiver.hpp"

namespace ambtalk {

struct PartitionOptions {
  ReceiverOptions receiver{};
  // Width tolerance of the root finders over thresholds.
  double threshold_tol = 1e-12;
  // A required action within this distance of the feasible extreme is accepted.
  double boundary_tol = 1e-9;
  // Smallest admissible interval width; also the offset of the shooting
  // variable from the left end of the reference support.
  double min_step = 1e-9;
};

// Regularity the shooting method relies on, checked on the points it
// actually evaluated.
struct ShootingDiagnostics {
  // Induced action nondecreasing in the right threshold at every call.
  bool induced_action_monotone = true;
  // Miss function nondecreasing in the first threshold.
  bool miss_monotone = true;
  int receiver_solves = 0;
  std::vector<std::string> notes;
};

struct PartitionEquilibrium {
  // 0 = theta_0 < theta_1 < ... < theta_N = 1
  std::vector<double> thresholds;
  std::vector<double> actions;
  double bias;
  AmbiguityLevel level;
  std::vector<ReceiverSolution> per_interval;

  std::size_t size() const { return actions.size(); }
  Interval interval(std::size_t i) const { return Interval(thresholds[i], thresholds[i + 1]); }
  // a_i + a_{i+1} - 2 (theta_i + d) at each interior threshold.
  std::vector<double> indifference_residuals() const;
};

// Action induced on [lo, hi]; nullopt when the reference has no mass there
// (full ambiguity never needs the reference and always returns a value).
std::optional<double> induced_action(const Density& g, double lo, double hi, const AmbiguityLevel& level,
                                     const ReceiverOptions& options = {});

// Right end of the interval after [theta_prev, theta_cur] that makes type
// theta_cur indifferent between the two induced actions. nullopt when no
// endpoint <= 1 induces a large enough action.
std::optional<double> next_threshold(double theta_prev, double theta_cur, const Density& g, double d,
                                     const AmbiguityLevel& level, const PartitionOptions& options = {},
                                     ShootingDiagnostics* diagnostics = nullptr);

// N-interval equilibrium by forward shooting on theta_1, or nullopt when
// none exists. g must be supported on [0, 1].
std::optional<PartitionEquilibrium> solve_partition(const Density& g, double d, int intervals,
                                                    const AmbiguityLevel& level, const PartitionOptions& options = {},
                                                    ShootingDiagnostics* diagnostics = nullptr);

// Solves the receiver on each interval of a given threshold profile. The
// profile need not be an equilibrium.
PartitionEquilibrium partition_from_thresholds(const Density& g, std::span<const double> thresholds, double d,
                                               const AmbiguityLevel& level, const ReceiverOptions& options = {});

// Largest N with an equilibrium.
int max_intervals(const Density& g, double d, const AmbiguityLevel& level, const PartitionOptions& options = {});

// Largest bias admitting a two-interval equilibrium, by bisection on d.
double babbling_threshold(const Density& g, const AmbiguityLevel& level, double tol = 1e-6,
                          const PartitionOptions& options = {});

// Largest payoff gain any sender type on a uniform grid of `grid` points
// could obtain by switching to another equilibrium action.
double max_deviation_gain(const PartitionEquilibrium& eq, int grid = 2001);

}  // namespace ambtalk
