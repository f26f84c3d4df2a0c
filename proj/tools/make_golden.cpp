// Regenerates tests/fixtures/golden.txt from the brute-force oracles.
//
//   make_golden > tests/fixtures/golden.txt

#include <array>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ambtalk/density.hpp"
#include "ambtalk/fixture.hpp"
#include "ambtalk/oracle.hpp"

using namespace ambtalk;

namespace {

struct DiscreteCase {
  std::vector<double> g;
  std::vector<double> theta;
  double a;
  double beta;
};

void emit(const FixtureRecord& r) { std::cout << format_fixture_record(r) << '\n'; }

}  // namespace

int main() {
  const Interval unit(0.0, 1.0);
  const oracle::GridSpec fine{100001};
  const double step = 1.0 / (fine.n_points - 1);

  std::cout << "# Golden values from the brute-force oracles (Simpson integration, exhaustive grids).\n"
               "# Regenerate with tools/make_golden; do not edit by hand.\n"
               "# id | inputs | value | oracle | resolution\n";

  const Density rising = make_piecewise_linear(std::array<Knot, 2>{{{0.0, 0.0}, {1.0, 2.0}}}, unit);
  for (double beta : {0.1, 1.0, 10.0}) {
    const double a = oracle::grid_action(rising, unit, beta, fine);
    emit({fmt::format("grid_action/2theta/beta={}", beta), fmt::format("g=2theta iv=[0,1] beta={}", beta), a,
          "grid_action", step});
  }

  const Density bumps = make_counterexample(0.01);
  const double h = oracle::simpson([&](double t) { return t * bumps(t); }, unit, bumps.breakpoints(), 4096);
  emit({"counterexample/eps=0.01/mean", "eps=0.01", h, "simpson", 1.0 / 4096});
  const double a_grid = oracle::grid_action(bumps, unit, 1.0, fine);
  emit({"counterexample/eps=0.01/beta=1/a_grid", "eps=0.01 iv=[0,1] beta=1", a_grid, "grid_action", step});
  // Half the oracle's distance from the midpoint.
  emit({"counterexample/eps=0.01/beta=1/delta", "eps=0.01 iv=[0,1] beta=1", std::abs(a_grid - 0.5) / 2.0,
        "grid_action", step});

  const std::vector<DiscreteCase> cases = {
      {{0.5, 0.5}, {0.0, 1.0}, 0.5, 1.0},
      {{0.5, 0.5}, {0.0, 1.0}, 0.3, 0.5},
      {{0.3, 0.7}, {0.2, 0.9}, 0.6, 1.0},
      {{0.8, 0.2}, {0.0, 0.4}, 0.1, 0.2},
      {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.0, 0.5, 1.0}, 0.4, 1.0},
      {{0.2, 0.5, 0.3}, {0.0, 0.5, 1.0}, 0.4, 0.5},
      {{0.25, 0.25, 0.5}, {0.1, 0.3, 0.8}, 0.5, 1.0},
      {{0.6, 0.3, 0.1}, {0.0, 0.2, 1.0}, 0.25, 2.0},
      {{0.1, 0.8, 0.1}, {0.0, 0.5, 1.0}, 0.5, 0.3},
  };
  const oracle::GridSpec simplex{41};
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const DiscreteCase& c = cases[k];
    const auto r = oracle::discrete_inner_min(c.g, c.theta, c.a, c.beta, simplex);
    const std::string inputs = fmt::format("g={} theta={} a={} beta={}", fmt::join(c.g, ";"),
                                           fmt::join(c.theta, ";"), c.a, c.beta);
    emit({fmt::format("discrete/{}pt/case{}", c.g.size(), k + 1), inputs, r.value_grid, "discrete_inner_min",
          r.resolution});
  }
  return 0;
}
