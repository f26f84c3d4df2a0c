#include "ambtalk/reproduce.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include <fmt/format.h>

#include "ambtalk/analysis.hpp"
#include "ambtalk/errors.hpp"
#include "ambtalk/fixture.hpp"

namespace ambtalk {

namespace {

constexpr std::array<std::string_view, 4> kScenarios = {"example1", "counterexample", "welfare-mirror", "exante"};

std::string relation_name(Relation r, std::string_view lhs, std::string_view rhs) {
  return fmt::format("{} {} {}", lhs, r == Relation::below ? "<" : (r == Relation::above ? ">" : "="), rhs);
}

ScenarioReport run_example1(const PartitionOptions& options) {
  const Interval iv(0.0, 1.0);
  struct Cell {
    Relation location;
    Relation penalty;
    bool pass = true;
    int points = 0;
    double min_gap = std::numeric_limits<double>::infinity();
  };
  std::array<Cell, 4> cells = {{{Relation::below, Relation::above},
                                {Relation::above, Relation::above},
                                {Relation::below, Relation::below},
                                {Relation::above, Relation::below}}};
  for (double h : {0.2, 0.35, 0.65, 0.8}) {
    for (double sigma : {0.15, 0.25}) {
      for (double beta : {sigma * sigma / 2.0, 8.0 * sigma * sigma}) {
        const Example1Result r = example1_signs(h, sigma, beta, iv, options.receiver);
        for (Cell& c : cells) {
          if (c.location != r.location || c.penalty != r.penalty) continue;
          ++c.points;
          const double gap = std::abs(r.action - h);
          c.min_gap = std::min(c.min_gap, gap);
          if (r.sign != r.predicted_sign || !(gap > 1e-6)) c.pass = false;
        }
      }
    }
  }
  ScenarioReport report{"example1", {}};
  for (const Cell& c : cells) {
    const std::string name = fmt::format("{}, {}: a {} h", relation_name(c.location, "h", "m"),
                                         relation_name(c.penalty, "beta", "2 sigma^2"),
                                         c.location == Relation::below ? ">" : "<");
    report.claims.push_back(
        {name, c.pass && c.points > 0, fmt::format("{} grid points, min |a - h| = {:.6g}", c.points, c.min_gap)});
  }
  return report;
}

ScenarioReport run_counterexample(const PartitionOptions& options) {
  const Density g = make_counterexample(0.01);
  const Interval iv(0.0, 1.0);
  const double h = mean(g, options.receiver.quad);
  const ReceiverSolution sol = solve_action(g, iv, AmbiguityLevel::finite(1.0), options.receiver);
  const double delta = builtin_fixture("counterexample/eps=0.01/beta=1/delta").value;
  const double mid = iv.midpoint();
  const double lo = std::min(mid, h) - delta;
  const double hi = std::max(mid, h) + delta;
  const bool outside = sol.action < lo || sol.action > hi;
  ScenarioReport report{"counterexample", {}};
  report.claims.push_back({"mean within 1e-3 of the midpoint", std::abs(h - mid) <= 1e-3,
                           fmt::format("h = {:.12g}, m = {:.12g}", h, mid)});
  report.claims.push_back({"a* outside [min(m, h) - delta, max(m, h) + delta] at beta = 1", outside,
                           fmt::format("a* = {:.12g}, delta = {:.6g}, band = [{:.12g}, {:.12g}]", sol.action, delta,
                                       lo, hi)});
  return report;
}

ScenarioReport run_welfare_mirror(const PartitionOptions& options) {
  const Density down = make_piecewise_linear(std::array<Knot, 2>{{{0.0, 2.0}, {1.0, 0.0}}}, Interval(0.0, 1.0));
  const double d = 0.1;
  const double beta = 1.0;
  const AmbiguityLevel level = AmbiguityLevel::finite(beta);
  const MirrorPairing pairing = mirror_pairing(down, down, d, beta, 1e-6, options);
  const WelfareReport& original = pairing.original;
  const WelfareReport& mirrored = pairing.mirrored;

  ScenarioReport report{"welfare-mirror", {}};
  const auto& shifts = original.per_interval_action_shift;
  const double min_shift = *std::min_element(shifts.begin(), shifts.end());
  report.claims.push_back({"g = 2(1 - theta): every action shift > 0", min_shift > 0.0,
                           fmt::format("N = {}, min shift = {:.6g}", shifts.size(), min_shift)});
  report.claims.push_back({"g = 2(1 - theta): u^A > u^B", original.u_amb > original.u_bayes,
                           fmt::format("u^A = {:.12g}, u^B = {:.12g}", original.u_amb, original.u_bayes)});
  const auto& mshifts = mirrored.per_interval_action_shift;
  const double max_mshift = *std::max_element(mshifts.begin(), mshifts.end());
  report.claims.push_back({"mirror g = 2 theta: every action shift < 0", max_mshift < 0.0,
                           fmt::format("N = {}, max shift = {:.6g}", mshifts.size(), max_mshift)});
  report.claims.push_back({"mirror shifts pair with original shifts", pairing.holds,
                           fmt::format("max pairing error = {:.3g}", pairing.max_error)});

  const double d_amb = babbling_threshold(down, level, 1e-6, options);
  const double d_bayes = babbling_threshold(down, AmbiguityLevel::bayesian(), 1e-6, options);
  report.claims.push_back({"g = 2(1 - theta): d_hat(beta = 1) > d_hat(bayesian)", d_amb > d_bayes + 1e-6,
                           fmt::format("d_hat(1) = {:.8g}, d_hat(bayes) = {:.8g}", d_amb, d_bayes)});
  return report;
}

// Compositions of `total` into `parts` nonnegative integers.
void for_each_composition(int total, std::size_t parts, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> counts(parts, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int remaining) {
    if (j + 1 == parts) {
      counts[j] = remaining;
      visit(counts);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[j] = c;
      rec(j + 1, remaining - c);
    }
  };
  rec(0, total);
}

ScenarioReport run_exante(const PartitionOptions& options) {
  struct Case {
    std::string name;
    Density g;
    double d;
    double beta;
  };
  const Interval unit(0.0, 1.0);
  const std::vector<Case> cases = {
      {"uniform", make_uniform(unit), 0.1, 1.0},
      {"2 theta", make_piecewise_linear(std::array<Knot, 2>{{{0.0, 0.0}, {1.0, 2.0}}}, unit), 0.05, 0.5},
      {"2(1 - theta)", make_piecewise_linear(std::array<Knot, 2>{{{0.0, 2.0}, {1.0, 0.0}}}, unit), 0.1, 1.0},
      {"normal(0.3, 0.2)", make_truncated_normal(0.3, 0.2, unit), 0.05, 2.0},
      {"counterexample(0.01)", make_counterexample(0.01), 0.1, 1.0},
  };
  ScenarioReport report{"exante", {}};
  for (const Case& c : cases) {
    const AmbiguityLevel level = AmbiguityLevel::finite(c.beta);
    const int n = max_intervals(c.g, c.d, level, options);
    const auto eq = solve_partition(c.g, c.d, n, level, options);
    if (!eq) {
      report.claims.push_back({c.name, false, fmt::format("no {}-interval equilibrium", n)});
      continue;
    }
    const ExAnteSolution ex = solve_ex_ante(c.g, *eq, c.beta, options.receiver);
    double action_gap = 0.0;
    for (std::size_t i = 0; i < eq->size(); ++i) {
      action_gap = std::max(action_gap, std::abs(ex.conditional_actions[i] - eq->actions[i]));
      const ReceiverSolution fresh =
          solve_action(restrict(c.g, eq->interval(i), options.receiver.quad), eq->interval(i), level, options.receiver);
      action_gap = std::max(action_gap, std::abs(fresh.action - ex.conditional_actions[i]));
    }
    const double min_c = *std::min_element(ex.c_star.begin(), ex.c_star.end());
    const double value_gap = std::abs(ex.value - c.beta * min_c);
    double worst_margin = std::numeric_limits<double>::infinity();
    std::vector<double> weights(ex.c_star.size());
    for_each_composition(20, ex.c_star.size(), [&](const std::vector<int>& counts) {
      for (std::size_t i = 0; i < counts.size(); ++i) weights[i] = counts[i] / 20.0;
      worst_margin = std::min(worst_margin, ex_ante_objective(ex, weights) - ex.value);
    });
    const bool pass = action_gap <= 1e-8 && value_gap <= 1e-12 && worst_margin >= -1e-12;
    report.claims.push_back(
        {fmt::format("{}, d = {}, beta = {}: ex-ante actions equal posterior actions", c.name, c.d, c.beta), pass,
         fmt::format("N = {}, max action gap = {:.3g}, value = {:.12g}, min grid margin = {:.3g}", n, action_gap,
                     ex.value, worst_margin)});
  }
  return report;
}

}  // namespace

bool ScenarioReport::pass() const {
  return !claims.empty() && std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.pass; });
}

std::span<const std::string_view> reproduce_scenarios() { return kScenarios; }

ScenarioReport reproduce(std::string_view which, const PartitionOptions& options) {
  if (which == "example1") return run_example1(options);
  if (which == "counterexample") return run_counterexample(options);
  if (which == "welfare-mirror") return run_welfare_mirror(options);
  if (which == "exante") return run_exante(options);
  throw InvalidArgument(fmt::format("unknown scenario '{}'", which));
}

}  // namespace ambtalk
