#include "ambtalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <fmt/format.h>

#include "ambtalk/errors.hpp"

namespace ambtalk::oracle {

namespace {

struct WeightedNodes {
  std::vector<double> theta;
  std::vector<double> weight;
};

WeightedNodes simpson_nodes(const Interval& iv, std::span<const double> breakpoints, int panels_per_unit) {
  std::vector<double> edges{iv.lo()};
  std::vector<double> inner;
  for (double b : breakpoints) {
    if (b > iv.lo() && b < iv.hi()) inner.push_back(b);
  }
  std::sort(inner.begin(), inner.end());
  for (double b : inner) {
    if (b > edges.back()) edges.push_back(b);
  }
  edges.push_back(iv.hi());

  WeightedNodes out;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double a = edges[s];
    const double b = edges[s + 1];
    const int panels = std::max(4, static_cast<int>(std::ceil((b - a) * panels_per_unit)));
    const double h = (b - a) / (2.0 * panels);
    for (int k = 0; k <= 2 * panels; ++k) {
      const double w = (k == 0 || k == 2 * panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      out.theta.push_back(a + k * h);
      out.weight.push_back(w * h / 3.0);
    }
  }
  return out;
}

double entropy_term(double f, double g) { return f > 0.0 ? f * std::log(f / g) : 0.0; }

}  // namespace

void GridSpec::validate() const {
  if (n_points < 3) throw InvalidArgument(fmt::format("grid needs at least 3 points, got {}", n_points));
}

double simpson(const std::function<double(double)>& fn, const Interval& iv, std::span<const double> breakpoints,
               int panels_per_unit) {
  const WeightedNodes nodes = simpson_nodes(iv, breakpoints, panels_per_unit);
  double total = 0.0;
  for (std::size_t j = 0; j < nodes.theta.size(); ++j) total += nodes.weight[j] * fn(nodes.theta[j]);
  return total;
}

double grid_action(const Density& g_m, const Interval& iv, double beta, const GridSpec& grid) {
  grid.validate();
  if (!(beta > 0.0)) throw InvalidArgument("grid_action requires beta > 0");

  // Reference mass at each Simpson node, evaluated once.
  const WeightedNodes nodes = simpson_nodes(iv, g_m.breakpoints(), 512);
  std::vector<double> theta;
  std::vector<double> mass;
  for (std::size_t j = 0; j < nodes.theta.size(); ++j) {
    const double gv = g_m(nodes.theta[j]);
    if (gv > 0.0) {
      theta.push_back(nodes.theta[j]);
      mass.push_back(nodes.weight[j] * gv);
    }
  }
  if (theta.empty()) throw InvalidArgument("grid_action: reference has no mass on the interval");

  const double step = iv.width() / (grid.n_points - 1);
  double best_a = iv.lo();
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.n_points; ++k) {
    const double a = k + 1 == grid.n_points ? iv.hi() : iv.lo() + k * step;
    // exp((theta - a)^2 / beta) is largest at the endpoint farthest from a.
    const double far = std::max(a - iv.lo(), iv.hi() - a);
    const double shift = far * far / beta;
    double sum = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const double dx = theta[j] - a;
      sum += mass[j] * std::exp(dx * dx / beta - shift);
    }
    const double log_j = shift + std::log(sum);
    if (log_j < best) {
      best = log_j;
      best_a = a;
    }
  }
  return best_a;
}

DiscreteInnerMin discrete_inner_min(std::span<const double> g_weights, std::span<const double> support_points, double a,
                                    double beta, const GridSpec& grid) {
  grid.validate();
  const std::size_t k = g_weights.size();
  if (k < 1 || k > 4 || support_points.size() != k) {
    throw InvalidArgument("discrete_inner_min supports 1 to 4 points with matching weights");
  }
  double total = 0.0;
  for (double w : g_weights) {
    if (!(w > 0.0)) throw InvalidArgument("discrete_inner_min: reference weights must be strictly positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("discrete_inner_min: reference weights must sum to 1");
  if (!(beta > 0.0)) throw InvalidArgument("discrete_inner_min requires beta > 0");

  auto objective = [&](std::span<const double> f) {
    double v = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double loss = (a - support_points[j]) * (a - support_points[j]);
      v += -f[j] * loss + beta * entropy_term(f[j], g_weights[j]);
    }
    return v;
  };

  const int divisions = grid.n_points - 1;
  std::vector<int> counts(k, 0);
  std::vector<double> f(k, 0.0);
  DiscreteInnerMin out;
  out.value_grid = std::numeric_limits<double>::infinity();
  out.resolution = 1.0 / divisions;

  // Enumerate compositions of `divisions` into k nonnegative parts.
  std::function<void(std::size_t, int)> enumerate = [&](std::size_t j, int remaining) {
    if (j + 1 == k) {
      counts[j] = remaining;
      for (std::size_t i = 0; i < k; ++i) f[i] = static_cast<double>(counts[i]) / divisions;
      const double v = objective(f);
      if (v < out.value_grid) {
        out.value_grid = v;
        out.f_grid = f;
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[j] = c;
      enumerate(j + 1, remaining - c);
    }
  };
  enumerate(0, divisions);

  double max_exponent = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    max_exponent = std::max(max_exponent, (support_points[j] - a) * (support_points[j] - a) / beta);
  }
  double z = 0.0;
  out.f_tilt.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double e = (support_points[j] - a) * (support_points[j] - a) / beta;
    out.f_tilt[j] = g_weights[j] * std::exp(e - max_exponent);
    z += out.f_tilt[j];
  }
  for (double& v : out.f_tilt) v /= z;
  out.value_tilt = -beta * (max_exponent + std::log(z));

  out.max_abs_diff = 0.0;
  for (std::size_t j = 0; j < k; ++j) out.max_abs_diff = std::max(out.max_abs_diff, std::abs(out.f_grid[j] - out.f_tilt[j]));
  return out;
}

std::vector<double> cs_uniform_thresholds(double d, int intervals) {
  if (!(d > 0.0)) throw InvalidArgument("cs_uniform_thresholds requires d > 0");
  if (intervals < 1) throw InvalidArgument("cs_uniform_thresholds requires N >= 1");
  const double n = intervals;
  if (!(2.0 * n * (n - 1.0) * d < 1.0)) {
    throw InvalidArgument(fmt::format("no {}-interval uniform partition at d = {}: 2N(N-1)d = {} >= 1", intervals, d,
                                      2.0 * n * (n - 1.0) * d));
  }
  std::vector<double> out;
  for (int i = 0; i <= intervals; ++i) out.push_back(i / n + 2.0 * d * i * (i - n));
  out.front() = 0.0;
  out.back() = 1.0;
  return out;
}

double endpoint_lottery_value(const Interval& iv, double a) {
  if (!iv.contains(a)) throw InvalidArgument(fmt::format("action {} outside {}", a, iv.to_string()));
  const double left = a - iv.lo();
  const double right = iv.hi() - a;
  return -std::max(left * left, right * right);
}

double grid_maximin_action(const Interval& iv, const GridSpec& grid) {
  grid.validate();
  const double step = iv.width() / (grid.n_points - 1);
  double best_a = iv.lo();
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.n_points; ++k) {
    const double a = k + 1 == grid.n_points ? iv.hi() : iv.lo() + k * step;
    const double v = endpoint_lottery_value(iv, a);
    if (v > best) {
      best = v;
      best_a = a;
    }
  }
  return best_a;
}

}  // namespace ambtalk::oracle
