#include "ambtalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "ambtalk/errors.hpp"

namespace ambtalk {

namespace {

constexpr double kVerdictTol = 1e-10;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

PartitionEquilibrium regime_equilibrium(const Density& g, double d, const AmbiguityLevel& level,
                                        std::optional<int> intervals, const PartitionOptions& options) {
  const int n = intervals ? *intervals : max_intervals(g, d, level, options);
  auto eq = solve_partition(g, d, n, level, options);
  if (!eq) {
    throw NumericalError(fmt::format("no {}-interval equilibrium at d = {} under beta = {}", n, d, level.to_string()));
  }
  return std::move(*eq);
}

// a^A - a^B on iv for the reference g.
double action_shift(const Density& g, const Interval& iv, const AmbiguityLevel& level, const ReceiverOptions& options) {
  const Density g_m = restrict(g, iv, options.quad);
  const double amb = solve_action(g_m, iv, level, options).action;
  return amb - mean(g_m, options.quad);
}

Interval reflect(const Interval& iv) { return Interval(1.0 - iv.hi(), 1.0 - iv.lo()); }

Relation compare(double x, double pivot, double tol) {
  if (std::abs(x - pivot) <= tol) return Relation::at;
  return x < pivot ? Relation::below : Relation::above;
}

}  // namespace

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::better: return "better";
    case Verdict::worse: return "worse";
    case Verdict::equal: return "equal";
  }
  return "?";
}

double sender_welfare(const PartitionEquilibrium& eq, const Density& sender_prior, double d,
                      const numerics::QuadratureSpec& quad) {
  if (sender_prior.support().lo() != 0.0 || sender_prior.support().hi() != 1.0) {
    throw InvalidArgument("sender prior must be supported on [0, 1]");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    const double a = eq.actions[i];
    total += numerics::integrate(
        [&](double t) { return -(a - t - d) * (a - t - d) * sender_prior(t); }, eq.interval(i),
        sender_prior.breakpoints(), quad);
  }
  return total;
}

WelfareReport compare_regimes(const Density& g, const Density& sender_prior, double d, const AmbiguityLevel& level,
                              std::optional<int> intervals, const PartitionOptions& options) {
  const AmbiguityLevel bayes = AmbiguityLevel::bayesian();
  PartitionEquilibrium bayes_eq = regime_equilibrium(g, d, bayes, intervals, options);
  PartitionEquilibrium amb_eq = regime_equilibrium(g, d, level, intervals, options);
  const auto& quad = options.receiver.quad;

  std::vector<double> shifts;
  for (std::size_t i = 0; i < amb_eq.size(); ++i) {
    shifts.push_back(amb_eq.actions[i] - mean(restrict(g, amb_eq.interval(i), quad), quad));
  }
  const double u_b = sender_welfare(bayes_eq, sender_prior, d, quad);
  const double u_a = sender_welfare(amb_eq, sender_prior, d, quad);
  Verdict verdict = Verdict::equal;
  if (u_a > u_b + kVerdictTol) verdict = Verdict::better;
  if (u_a < u_b - kVerdictTol) verdict = Verdict::worse;
  return WelfareReport{sender_prior, u_b, u_a, d, level, std::move(shifts), verdict, std::move(bayes_eq),
                       std::move(amb_eq)};
}

MirrorPairing mirror_pairing(const Density& g, const Density& sender_prior, double d, double beta, double tol,
                             const PartitionOptions& options) {
  const AmbiguityLevel level = AmbiguityLevel::finite(beta);
  const Density g_hat = mirror(g);
  WelfareReport original = compare_regimes(g, sender_prior, d, level, std::nullopt, options);
  WelfareReport mirrored = compare_regimes(g_hat, mirror(sender_prior), d, level, std::nullopt, options);

  double max_error = 0.0;
  auto pair_up = [&](const WelfareReport& report, const Density& other) {
    for (std::size_t i = 0; i < report.amb_equilibrium.size(); ++i) {
      const Interval reflected = reflect(report.amb_equilibrium.interval(i));
      const double paired = action_shift(other, reflected, level, options.receiver);
      max_error = std::max(max_error, std::abs(paired + report.per_interval_action_shift[i]));
    }
  };
  pair_up(original, g_hat);
  pair_up(mirrored, g);
  return MirrorPairing{max_error <= tol, max_error, std::move(original), std::move(mirrored)};
}

Example1Result example1_signs(double h, double sigma, double beta, const Interval& iv, const ReceiverOptions& options) {
  const Density g = make_truncated_normal(h, sigma, iv);
  const ReceiverSolution sol = solve_action(g, iv, AmbiguityLevel::finite(beta), options);
  const double diff = sol.action - h;
  const int sign = std::abs(diff) <= 1e-12 ? 0 : (diff > 0.0 ? 1 : -1);
  const Relation location = compare(h, iv.midpoint(), 1e-12);
  const Relation penalty = compare(beta, 2.0 * sigma * sigma, 1e-15);
  const int predicted = location == Relation::at ? 0 : (location == Relation::below ? 1 : -1);
  return Example1Result{sol.action, mean(g, options.quad), sign, location, penalty, predicted};
}

ExAnteSolution solve_ex_ante(const Density& g, const PartitionEquilibrium& eq, double beta,
                             const ReceiverOptions& options) {
  const AmbiguityLevel level = AmbiguityLevel::finite(beta);
  std::vector<ReceiverSolution> posterior;
  if (eq.level == level) {
    posterior = eq.per_interval;
  } else {
    for (std::size_t i = 0; i < eq.size(); ++i) {
      posterior.push_back(solve_action(restrict(g, eq.interval(i), options.quad), eq.interval(i), level, options));
    }
  }

  std::vector<double> c_star;
  std::vector<double> actions;
  for (const ReceiverSolution& s : posterior) {
    c_star.push_back(s.normalizer);
    actions.push_back(s.action);
  }
  std::size_t worst = 0;
  for (std::size_t i = 1; i < c_star.size(); ++i) {
    if (c_star[i] < c_star[worst]) worst = i;
  }
  bool tie = false;
  for (std::size_t i = 0; i < c_star.size(); ++i) {
    if (i != worst && std::abs(c_star[i] - c_star[worst]) <= 1e-12) tie = true;
  }
  std::vector<double> p_hat(c_star.size(), 0.0);
  p_hat[worst] = 1.0;

  const auto* worst_density = std::get_if<Density>(&posterior[worst].worst_case);
  if (!worst_density) {
    throw NumericalError("ex-ante solution needs a tilted worst case; beta is below the small-beta cutoff");
  }
  Density worst_case = *worst_density;
  const double value = c_star[worst] == kNegInf ? kNegInf : beta * c_star[worst];
  return ExAnteSolution{eq,     beta,    std::move(c_star), worst, std::move(p_hat), value, std::move(actions),
                        std::move(posterior), std::move(worst_case), tie};
}

double ex_ante_objective(const ExAnteSolution& solution, std::span<const double> weights) {
  if (weights.size() != solution.c_star.size()) {
    throw InvalidArgument("ex_ante_objective: one weight per interval required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) total += weights[i] * solution.c_star[i];
  }
  return solution.beta * total;
}

std::pair<double, double> kl_decomposition_check(std::span<const double> weights, std::span<const Density> f_parts,
                                                 std::span<const Density> g_parts,
                                                 const numerics::QuadratureSpec& quad) {
  const std::size_t n = weights.size();
  if (n == 0 || f_parts.size() != n || g_parts.size() != n) {
    throw InvalidArgument("kl_decomposition_check: weights and parts must have equal, nonzero length");
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("kl_decomposition_check: weights must be nonnegative");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) throw InvalidArgument("kl_decomposition_check: weights must sum to 1");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return f_parts[a].support().lo() < f_parts[b].support().lo(); });
  double edge = 0.0;
  for (std::size_t k : order) {
    const Interval& sf = f_parts[k].support();
    const Interval& sg = g_parts[k].support();
    if (std::abs(sf.lo() - sg.lo()) > 1e-12 || std::abs(sf.hi() - sg.hi()) > 1e-12) {
      throw InvalidArgument(fmt::format("part {}: f and g supports differ", k));
    }
    if (sf.lo() < edge - 1e-12) throw InvalidArgument(fmt::format("part {}: support overlap at {}", k, sf.lo()));
    if (sf.lo() > edge + 1e-12) throw InvalidArgument(fmt::format("part {}: gap before {}", k, sf.lo()));
    edge = sf.hi();
  }
  if (std::abs(edge - 1.0) > 1e-12) throw InvalidArgument("kl_decomposition_check: parts do not reach 1");

  double rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) rhs += weights[i] * kl_divergence(f_parts[i], g_parts[i], quad);
  }

  std::vector<double> breakpoints;
  for (std::size_t i = 0; i < n; ++i) {
    breakpoints.push_back(f_parts[i].support().lo());
    breakpoints.push_back(f_parts[i].support().hi());
    breakpoints.insert(breakpoints.end(), f_parts[i].breakpoints().begin(), f_parts[i].breakpoints().end());
    breakpoints.insert(breakpoints.end(), g_parts[i].breakpoints().begin(), g_parts[i].breakpoints().end());
  }
  bool singular = false;
  const double lhs = numerics::integrate(
      [&](double t) {
        double mix_f = 0.0;
        double mix_g = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          mix_f += weights[i] * f_parts[i](t);
          mix_g += weights[i] * g_parts[i](t);
        }
        if (mix_f == 0.0) return 0.0;
        if (mix_g == 0.0) {
          singular = true;
          return 0.0;
        }
        return mix_f * std::log(mix_f / mix_g);
      },
      Interval(0.0, 1.0), breakpoints, quad);
  return {singular ? std::numeric_limits<double>::infinity() : lhs, rhs};
}

}  // namespace ambtalk
