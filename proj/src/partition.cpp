#include "ambtalk/partition.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "ambtalk/errors.hpp"

namespace ambtalk {

namespace {

// Sentinels for the root finders; every genuine residual lies in [-3, 1].
constexpr double kBelow = -4.0;
constexpr double kAbove = 4.0;
constexpr double kIndifferenceTol = 1e-6;

bool is_full_ambiguity(const AmbiguityLevel& level) {
  return level.mode() == AmbiguityLevel::Mode::full_ambiguity;
}

void check_reference(const Density& g) {
  if (g.support().lo() != 0.0 || g.support().hi() != 1.0) {
    throw InvalidArgument(fmt::format("partition: reference density must be supported on [0, 1], got {}",
                                      g.support().to_string()));
  }
}

void check_bias(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw InvalidArgument(fmt::format("bias d must be > 0, got {}", d));
}

ReceiverSolution solve_on(const Density& g, const Interval& iv, const AmbiguityLevel& level,
                          const ReceiverOptions& options) {
  // Full ambiguity ignores the reference, so null intervals are admissible.
  if (is_full_ambiguity(level)) return solve_action(make_uniform(iv), iv, level, options);
  return solve_action(restrict(g, iv, options.quad), iv, level, options);
}

struct Step {
  double threshold;
  double action;
};

std::optional<Step> next_step(double theta_cur, double a_cur, const Density& g, double d,
                              const AmbiguityLevel& level, const PartitionOptions& options,
                              ShootingDiagnostics* diag) {
  const double target = 2.0 * (theta_cur + d) - a_cur;

  if (is_full_ambiguity(level)) {
    // Midpoint actions: (theta_cur + x) / 2 = target.
    const double x = 2.0 * target - theta_cur;
    if (x > 1.0 + options.boundary_tol) return std::nullopt;
    const double clipped = std::min(x, 1.0);
    return Step{clipped, 0.5 * (theta_cur + clipped)};
  }

  std::vector<std::pair<double, double>> seen;
  auto action_to = [&](double x) -> std::optional<double> {
    if (diag) ++diag->receiver_solves;
    auto a = induced_action(g, theta_cur, x, level, options.receiver);
    if (a) seen.emplace_back(x, *a);
    return a;
  };

  const auto top = action_to(1.0);
  if (!top || *top < target - options.boundary_tol) return std::nullopt;
  if (*top <= target + options.boundary_tol) return Step{1.0, *top};

  const double lo = theta_cur + options.min_step;
  const double x = numerics::find_root(
      [&](double t) {
        const auto a = action_to(t);
        return a ? *a - target : kBelow;
      },
      {lo, 1.0}, options.threshold_tol);

  const auto a_next = action_to(x);
  if (!a_next) {
    throw NumericalError(fmt::format("next_threshold: root {:.17g} lands on a null interval", x));
  }

  if (diag) {
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i) {
      if (seen[i].second < seen[i - 1].second - 1e-10) {
        diag->induced_action_monotone = false;
        diag->notes.push_back(fmt::format("induced action on [{:.9g}, x] decreases between x = {:.9g} and {:.9g}",
                                          theta_cur, seen[i - 1].first, seen[i].first));
        break;
      }
    }
  }
  return Step{x, *a_next};
}

enum class ChainOutcome { ok, first_interval_empty, overshoot };

struct Chain {
  ChainOutcome outcome = ChainOutcome::ok;
  // theta_0 .. theta_{N-1}
  std::vector<double> thresholds;
  // A(theta_{N-1}, 1) - (2 (theta_{N-1} + d) - a_{N-1}); zero at an equilibrium.
  double residual = 0.0;

  double miss_value() const {
    switch (outcome) {
      case ChainOutcome::first_interval_empty: return kAbove;
      case ChainOutcome::overshoot: return kBelow;
      case ChainOutcome::ok: return residual;
    }
    return residual;
  }
};

// Continues a chain whose last interval induces a_cur until it has
// `intervals` intervals, then records the closing residual.
Chain extend(Chain chain, double a_cur, const Density& g, double d, int intervals, const AmbiguityLevel& level,
             const PartitionOptions& options, ShootingDiagnostics* diag) {
  while (static_cast<int>(chain.thresholds.size()) < intervals) {
    const auto step = next_step(chain.thresholds.back(), a_cur, g, d, level, options, diag);
    if (!step || step->threshold >= 1.0 - options.min_step) {
      chain.outcome = ChainOutcome::overshoot;
      return chain;
    }
    chain.thresholds.push_back(step->threshold);
    a_cur = step->action;
  }
  const double last = chain.thresholds.back();
  if (diag) ++diag->receiver_solves;
  const auto top = induced_action(g, last, 1.0, level, options.receiver);
  if (!top) {
    chain.outcome = ChainOutcome::overshoot;
    return chain;
  }
  chain.residual = *top - (2.0 * (last + d) - a_cur);
  return chain;
}

Chain shoot(const Density& g, double d, int intervals, const AmbiguityLevel& level, double theta1,
            const PartitionOptions& options, ShootingDiagnostics* diag) {
  Chain chain;
  chain.thresholds = {0.0, theta1};
  if (diag) ++diag->receiver_solves;
  const auto a1 = induced_action(g, 0.0, theta1, level, options.receiver);
  if (!a1) {
    chain.outcome = ChainOutcome::first_interval_empty;
    return chain;
  }
  return extend(std::move(chain), *a1, g, d, intervals, level, options, diag);
}

// The miss function jumps where a threshold sweeps across a region without
// reference mass: the action on the interval ending there is flat, so the
// threshold is not pinned down by the indifference before it. Next to such a
// jump in theta_1, that threshold is solved for directly so the chain closes.
std::optional<Chain> bridge_flat_threshold(const Density& g, double d, int intervals, const AmbiguityLevel& level,
                                           double theta1, double lo, double hi, const PartitionOptions& options,
                                           ShootingDiagnostics* diag) {
  const double offset = 4.0 * options.threshold_tol;
  const Chain left = shoot(g, d, intervals, level, std::max(lo, theta1 - offset), options, diag);
  const Chain right = shoot(g, d, intervals, level, std::min(hi, theta1 + offset), options, diag);
  const std::size_t common = std::min(left.thresholds.size(), right.thresholds.size());
  std::size_t k = 2;
  while (k < common && std::abs(left.thresholds[k] - right.thresholds[k]) <= 1e-6) ++k;
  if (k >= common) return std::nullopt;

  const std::vector<double> prefix(left.thresholds.begin(), left.thresholds.begin() + static_cast<long>(k));
  auto chain_through = [&](double t) {
    Chain chain;
    chain.thresholds = prefix;
    chain.thresholds.push_back(t);
    if (diag) ++diag->receiver_solves;
    const auto a = induced_action(g, prefix.back(), t, level, options.receiver);
    if (!a) {
      chain.outcome = ChainOutcome::first_interval_empty;
      return chain;
    }
    return extend(std::move(chain), *a, g, d, intervals, level, options, diag);
  };
  const double u = std::min(left.thresholds[k], right.thresholds[k]);
  const double v = std::max(left.thresholds[k], right.thresholds[k]);
  const double miss_u = chain_through(u).miss_value();
  const double miss_v = chain_through(v).miss_value();
  if (!(miss_u >= 0.0 && miss_v <= 0.0) && !(miss_u <= 0.0 && miss_v >= 0.0)) return std::nullopt;
  const double t = numerics::find_root([&](double x) { return chain_through(x).miss_value(); }, {u, v},
                                       options.threshold_tol);
  if (diag) {
    diag->notes.push_back(fmt::format("threshold {} solved across [{:.9g}, {:.9g}], where the induced action is flat",
                                      k, u, v));
  }
  return chain_through(t);
}

// Left end of the reference's support of positive mass.
double mass_onset(const Density& g, const AmbiguityLevel& level, const PartitionOptions& options) {
  if (is_full_ambiguity(level)) return 0.0;
  const auto& quad = options.receiver.quad;
  if (g.mass(Interval(0.0, options.min_step), quad) > 0.0) return 0.0;
  double lo = options.min_step;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g.mass(Interval(0.0, mid), quad) > 0.0) hi = mid; else lo = mid;
  }
  return hi;
}

double shooting_start(const Density& g, const AmbiguityLevel& level, const PartitionOptions& options) {
  return mass_onset(g, level, options) + options.min_step;
}

bool chain_admits(const Chain& chain, const PartitionOptions& options) {
  return chain.outcome == ChainOutcome::ok && chain.residual >= -options.boundary_tol;
}

}  // namespace

std::vector<double> PartitionEquilibrium::indifference_residuals() const {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < thresholds.size(); ++i) {
    out.push_back(actions[i - 1] + actions[i] - 2.0 * (thresholds[i] + bias));
  }
  return out;
}

std::optional<double> induced_action(const Density& g, double lo, double hi, const AmbiguityLevel& level,
                                     const ReceiverOptions& options) {
  const Interval iv(lo, hi);
  if (is_full_ambiguity(level)) return iv.midpoint();
  try {
    return solve_action(restrict(g, iv, options.quad), iv, level, options).action;
  } catch (const ZeroMassError&) {
    return std::nullopt;
  }
}

std::optional<double> next_threshold(double theta_prev, double theta_cur, const Density& g, double d,
                                     const AmbiguityLevel& level, const PartitionOptions& options,
                                     ShootingDiagnostics* diagnostics) {
  check_reference(g);
  check_bias(d);
  if (!(theta_prev >= 0.0 && theta_prev < theta_cur && theta_cur < 1.0)) {
    throw InvalidArgument(fmt::format("next_threshold requires 0 <= theta_prev < theta_cur < 1, got {} and {}",
                                      theta_prev, theta_cur));
  }
  const auto a_cur = induced_action(g, theta_prev, theta_cur, level, options.receiver);
  if (!a_cur) {
    throw ZeroMassError(fmt::format("next_threshold: [{}, {}] carries no reference mass", theta_prev, theta_cur));
  }
  const auto step = next_step(theta_cur, *a_cur, g, d, level, options, diagnostics);
  if (!step) return std::nullopt;
  return step->threshold;
}

PartitionEquilibrium partition_from_thresholds(const Density& g, std::span<const double> thresholds, double d,
                                               const AmbiguityLevel& level, const ReceiverOptions& options) {
  check_reference(g);
  if (thresholds.size() < 2 || thresholds.front() != 0.0 || thresholds.back() != 1.0) {
    throw InvalidArgument("thresholds must start at 0 and end at 1");
  }
  PartitionEquilibrium eq{{thresholds.begin(), thresholds.end()}, {}, d, level, {}};
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
    if (!(thresholds[i + 1] > thresholds[i])) throw InvalidArgument("thresholds must be strictly increasing");
  }
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
    eq.per_interval.push_back(solve_on(g, eq.interval(i), level, options));
    eq.actions.push_back(eq.per_interval.back().action);
  }
  return eq;
}

std::optional<PartitionEquilibrium> solve_partition(const Density& g, double d, int intervals,
                                                    const AmbiguityLevel& level, const PartitionOptions& options,
                                                    ShootingDiagnostics* diagnostics) {
  check_reference(g);
  check_bias(d);
  if (intervals < 1) throw InvalidArgument(fmt::format("number of intervals must be >= 1, got {}", intervals));
  if (intervals == 1) {
    const double ends[] = {0.0, 1.0};
    return partition_from_thresholds(g, ends, d, level, options.receiver);
  }

  const double lo = shooting_start(g, level, options);
  const double hi = 1.0 - options.min_step;
  if (!(lo < hi)) return std::nullopt;

  std::vector<std::pair<double, double>> samples;
  auto miss = [&](double theta1) {
    const Chain chain = shoot(g, d, intervals, level, theta1, options, diagnostics);
    samples.emplace_back(theta1, chain.miss_value());
    return chain.miss_value();
  };

  const Chain at_lo = shoot(g, d, intervals, level, lo, options, diagnostics);
  if (!chain_admits(at_lo, options)) {
    if (diagnostics) {
      diagnostics->notes.push_back(fmt::format("no equilibrium with {} intervals: miss at theta_1 = {:.3g} is {:.6g}",
                                               intervals, lo, -at_lo.miss_value()));
    }
    return std::nullopt;
  }

  double theta1 = lo;
  if (at_lo.residual > options.boundary_tol) {
    const double miss_hi = miss(hi);
    if (miss_hi > 0.0) {
      if (diagnostics) diagnostics->notes.push_back("miss function has no sign change on the shooting bracket");
      return std::nullopt;
    }
    samples.emplace_back(lo, at_lo.residual);
    theta1 = numerics::find_root(miss, {lo, hi}, options.threshold_tol);
  }

  if (diagnostics) {
    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (samples[i].second > samples[i - 1].second + 1e-10) {
        diagnostics->miss_monotone = false;
        diagnostics->notes.push_back(fmt::format("miss function decreases between theta_1 = {:.9g} and {:.9g}",
                                                 samples[i - 1].first, samples[i].first));
        break;
      }
    }
  }

  Chain final_chain = shoot(g, d, intervals, level, theta1, options, diagnostics);
  if (final_chain.outcome != ChainOutcome::ok || std::abs(final_chain.residual) > kIndifferenceTol) {
    if (auto bridged = bridge_flat_threshold(g, d, intervals, level, theta1, lo, hi, options, diagnostics)) {
      final_chain = std::move(*bridged);
    }
  }
  if (final_chain.outcome != ChainOutcome::ok) {
    throw NumericalError(fmt::format("shooting converged to theta_1 = {:.17g} but the chain does not close", theta1));
  }
  final_chain.thresholds.push_back(1.0);
  PartitionEquilibrium eq = partition_from_thresholds(g, final_chain.thresholds, d, level, options.receiver);

  for (double r : eq.indifference_residuals()) {
    if (std::abs(r) > kIndifferenceTol) {
      throw NumericalError(fmt::format("equilibrium indifference residual {:.3g} exceeds {:.0e}", r, kIndifferenceTol));
    }
  }
  for (std::size_t i = 1; i < eq.actions.size(); ++i) {
    if (!(eq.actions[i] > eq.actions[i - 1])) throw NumericalError("equilibrium actions are not increasing");
  }
  return eq;
}

int max_intervals(const Density& g, double d, const AmbiguityLevel& level, const PartitionOptions& options) {
  check_reference(g);
  check_bias(d);
  const double start = shooting_start(g, level, options);
  int best = 1;
  for (int n = 2; n < 100000; ++n) {
    if (!chain_admits(shoot(g, d, n, level, start, options, nullptr), options)) break;
    best = n;
  }
  return best;
}

double babbling_threshold(const Density& g, const AmbiguityLevel& level, double tol, const PartitionOptions& options) {
  check_reference(g);
  if (!(tol > 0.0)) throw InvalidArgument("babbling_threshold: tol must be positive");
  const double start = shooting_start(g, level, options);
  auto two_intervals = [&](double d) { return chain_admits(shoot(g, d, 2, level, start, options, nullptr), options); };

  // Induced actions lie in [0, 1], so no two-interval equilibrium survives d = 1.
  double lo = 0.0;
  double hi = 1.0;
  if (!two_intervals(tol)) return 0.0;
  lo = tol;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (two_intervals(mid)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double max_deviation_gain(const PartitionEquilibrium& eq, int grid) {
  if (grid < 2) throw InvalidArgument("max_deviation_gain: grid must have at least two points");
  double worst = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double theta = static_cast<double>(k) / (grid - 1);
    auto it = std::upper_bound(eq.thresholds.begin() + 1, eq.thresholds.end() - 1, theta);
    const std::size_t assigned = static_cast<std::size_t>(it - (eq.thresholds.begin() + 1));
    auto payoff = [&](double a) { return -(a - theta - eq.bias) * (a - theta - eq.bias); };
    const double own = payoff(eq.actions[assigned]);
    for (double a : eq.actions) worst = std::max(worst, payoff(a) - own);
  }
  return worst;
}

}  // namespace ambtalk
