#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ambtalk/density.hpp"
#include "ambtalk/partition.hpp"
#include "ambtalk/receiver.hpp"

namespace ambtalk {

enum class Verdict { better, worse, equal };
std::string_view to_string(Verdict verdict);

// Sender welfare under a Bayesian receiver (u^B) versus an ambiguous one
// (u^A), each evaluated at its own equilibrium.
struct WelfareReport {
  Density sender_prior;
  double u_bayes;
  double u_amb;
  double d;
  AmbiguityLevel level;
  // a^A_i - a^B_i on the intervals of the ambiguous equilibrium, where a^B_i
  // is the Bayesian action on the same interval.
  std::vector<double> per_interval_action_shift;
  Verdict verdict;
  PartitionEquilibrium bayes_equilibrium;
  PartitionEquilibrium amb_equilibrium;
};

// Expected sender payoff -(a_i - theta - d)^2 under the sender's prior.
double sender_welfare(const PartitionEquilibrium& eq, const Density& sender_prior, double d,
                      const numerics::QuadratureSpec& quad = {});

// Compares regimes at the most informative equilibrium of each, or at a
// fixed number of intervals when `intervals` is given. Throws NumericalError
// if the fixed-N equilibrium does not exist in either regime.
WelfareReport compare_regimes(const Density& g, const Density& sender_prior, double d, const AmbiguityLevel& level,
                              std::optional<int> intervals = std::nullopt, const PartitionOptions& options = {});

struct MirrorPairing {
  bool holds;
  // Largest |shift(mirror g, mirrored interval) + shift(g, interval)|.
  double max_error;
  WelfareReport original;
  WelfareReport mirrored;
};

// Action shifts of g on each equilibrium interval, compared against the
// shifts of mirror(g) on the reflected intervals (both directions).
MirrorPairing mirror_pairing(const Density& g, const Density& sender_prior, double d, double beta,
                             double tol = 1e-6, const PartitionOptions& options = {});

inline bool mirror_pairing_check(const Density& g, const Density& sender_prior, double d, double beta,
                                 double tol = 1e-6, const PartitionOptions& options = {}) {
  return mirror_pairing(g, sender_prior, d, beta, tol, options).holds;
}

enum class Relation { below, above, at };

struct Example1Result {
  double action;
  double bayes_action;
  // sign(a - h): -1, 0 or +1 (0 when |a - h| <= 1e-12)
  int sign;
  // h relative to the interval midpoint m
  Relation location;
  // beta relative to 2 sigma^2
  Relation penalty;
  // sign the case table predicts: +1 if h < m, -1 if h > m, 0 at h = m
  int predicted_sign;
};

// Receiver action for a normal(h, sigma^2) reference truncated to iv,
// classified into the (h vs m) x (beta vs 2 sigma^2) case table.
Example1Result example1_signs(double h, double sigma, double beta, const Interval& iv,
                              const ReceiverOptions& options = {});

struct ExAnteSolution {
  PartitionEquilibrium partition;
  double beta;
  std::vector<double> c_star;
  std::size_t worst_interval;
  std::vector<double> p_hat;
  // beta * min_i C*_i
  double value;
  std::vector<double> conditional_actions;
  // Posterior solutions at beta on each interval of the partition.
  std::vector<ReceiverSolution> posterior;
  // Nature's worst-case mixture; p_hat is a vertex, so this is the worst
  // interval's tilted conditional.
  Density worst_case;
  // Another interval attains min C* within 1e-12.
  bool tie;
};

ExAnteSolution solve_ex_ante(const Density& g, const PartitionEquilibrium& eq, double beta,
                             const ReceiverOptions& options = {});

// beta * sum_i p_i C*_i for nature's interval weights p.
double ex_ante_objective(const ExAnteSolution& solution, std::span<const double> weights);

// KL between the two same-weight mixtures (lhs) and the weighted sum of
// per-part KL divergences (rhs), each computed independently. Parts must
// tile [0, 1] with disjoint supports.
std::pair<double, double> kl_decomposition_check(std::span<const double> weights, std::span<const Density> f_parts,
                                                 std::span<const Density> g_parts,
                                                 const numerics::QuadratureSpec& quad = {});

}  // namespace ambtalk
