#include "ambtalk/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "ambtalk/errors.hpp"

namespace ambtalk::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P_{n-1}(x).
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 0 ? 1.0 : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

struct RuleEstimate {
  double value;
  double abs_value;
};

double checked_eval(const ScalarFn& fn, double x) {
  const double y = fn(x);
  if (!std::isfinite(y)) {
    throw NumericalError(fmt::format("integrand is not finite at x = {:.17g} (value {})", x, y));
  }
  return y;
}

RuleEstimate apply_rule(const ScalarFn& fn, const GaussLegendreRule& rule, double a, double b) {
  const double half = 0.5 * (b - a);
  const double center = 0.5 * (a + b);
  double sum = 0.0;
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = checked_eval(fn, center + half * rule.nodes[i]);
    sum += rule.weights[i] * y;
    abs_sum += rule.weights[i] * std::abs(y);
  }
  return {half * sum, half * abs_sum};
}

struct Piece {
  double a;
  double b;
  int depth;
  RuleEstimate coarse;
  RuleEstimate left;
  RuleEstimate right;

  double fine() const { return left.value + right.value; }
  double error() const { return std::abs(fine() - coarse.value); }
  bool operator<(const Piece& other) const { return error() < other.error(); }
};

Piece make_piece(const ScalarFn& fn, const GaussLegendreRule& rule, double a, double b, int depth,
                 RuleEstimate coarse) {
  const double mid = 0.5 * (a + b);
  return Piece{a, b, depth, coarse, apply_rule(fn, rule, a, mid), apply_rule(fn, rule, mid, b)};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (nodes_per_segment < 2) {
    throw InvalidArgument(fmt::format("nodes_per_segment must be >= 2, got {}", nodes_per_segment));
  }
  if (refinement_limit < 1) {
    throw InvalidArgument(fmt::format("refinement_limit must be >= 1, got {}", refinement_limit));
  }
  if (max_subintervals < 1) {
    throw InvalidArgument(fmt::format("max_subintervals must be >= 1, got {}", max_subintervals));
  }
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw InvalidArgument("quadrature tolerances must be positive");
  }
}

const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<const GaussLegendreRule>(compute_rule(n));
  return *slot;
}

std::vector<double> segment_edges(const Interval& iv, std::span<const double> breakpoints) {
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
  return edges;
}

double integrate(const ScalarFn& fn, const Interval& iv, std::span<const double> breakpoints,
                 const QuadratureSpec& spec) {
  spec.validate();
  const GaussLegendreRule& rule = gauss_legendre(spec.nodes_per_segment);
  const std::vector<double> edges = segment_edges(iv, breakpoints);

  // Global adaptive bisection: always split the piece with the largest error.
  std::priority_queue<Piece> heap;
  double total = 0.0;
  double error = 0.0;
  double scale = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    Piece p = make_piece(fn, rule, edges[s], edges[s + 1], 0, apply_rule(fn, rule, edges[s], edges[s + 1]));
    total += p.fine();
    error += p.error();
    scale += p.left.abs_value + p.right.abs_value;
    heap.push(p);
  }

  auto converged = [&] {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * scale);
    return error <= std::max(tol, 100.0 * kEps * scale);
  };
  while (!converged()) {
    if (static_cast<int>(heap.size()) >= spec.max_subintervals) {
      // Integrand noise (cancellation inside fn) caps the attainable accuracy.
      if (error <= std::sqrt(kEps) * scale) break;
      throw NumericalError(fmt::format("quadrature did not converge within {} subintervals on {} (error {:.3g})",
                                       spec.max_subintervals, iv.to_string(), error));
    }
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= spec.refinement_limit || !(mid > worst.a && mid < worst.b)) {
      throw NumericalError(fmt::format("quadrature refinement limit ({}) exceeded on [{:.17g}, {:.17g}]",
                                       spec.refinement_limit, worst.a, worst.b));
    }
    Piece left = make_piece(fn, rule, worst.a, mid, worst.depth + 1, worst.left);
    Piece right = make_piece(fn, rule, mid, worst.b, worst.depth + 1, worst.right);
    total += left.fine() + right.fine() - worst.fine();
    error += left.error() + right.error() - worst.error();
    scale += left.left.abs_value + left.right.abs_value + right.left.abs_value + right.right.abs_value -
             worst.left.abs_value - worst.right.abs_value;
    heap.push(left);
    heap.push(right);
  }
  return total;
}

double log_integrate_exp(const ScalarFn& logfn, const Interval& iv, std::span<const double> breakpoints,
                         const QuadratureSpec& spec) {
  spec.validate();
  const GaussLegendreRule& rule = gauss_legendre(spec.nodes_per_segment);
  const std::vector<double> edges = segment_edges(iv, breakpoints);

  double shift = -std::numeric_limits<double>::infinity();
  auto observe = [&](double x) {
    const double y = logfn(x);
    if (std::isnan(y)) {
      throw NumericalError(fmt::format("log-integrand is NaN at x = {:.17g}", x));
    }
    if (std::isfinite(y)) shift = std::max(shift, y);
  };
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double half = 0.5 * (edges[s + 1] - edges[s]);
    const double center = 0.5 * (edges[s + 1] + edges[s]);
    for (double node : rule.nodes) observe(center + half * node);
  }
  for (double e : edges) observe(e);
  if (!std::isfinite(shift)) {
    throw NumericalError("log-integrand is -inf at every quadrature node");
  }

  const double scaled = integrate([&](double x) { return std::exp(logfn(x) - shift); }, iv, breakpoints, spec);
  if (!(scaled > 0.0)) {
    throw NumericalError("log_integrate_exp: integral of exp(logfn) is not positive");
  }
  return shift + std::log(scaled);
}

MinimizeResult minimize_scalar(const ScalarFn& fn, const Interval& iv, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("minimize_scalar: tol must be positive");
  auto eval = [&](double x) {
    const double y = fn(x);
    if (!std::isfinite(y)) {
      throw NumericalError(fmt::format("minimize_scalar: objective not finite at x = {:.17g}", x));
    }
    return y;
  };

  // Brent (1973), localmin.
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const double rel = std::sqrt(kEps);
  double a = iv.lo();
  double b = iv.hi();
  double x = a + golden * (b - a);
  double w = x;
  double v = x;
  double fx = eval(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;
  int iter = 0;
  for (; iter < 500; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = rel * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = eval(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }

  // Brent never evaluates the endpoints; honor boundary minima explicitly.
  const double flo = eval(iv.lo());
  const double fhi = eval(iv.hi());
  if (flo < fx) { x = iv.lo(); fx = flo; }
  if (fhi < fx) { x = iv.hi(); fx = fhi; }
  return {x, fx, iter};
}

RootResult find_root_ex(const ScalarFn& fn, std::pair<double, double> bracket, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("find_root: tol must be positive");
  auto eval = [&](double x) {
    const double y = fn(x);
    if (std::isnan(y)) throw NumericalError(fmt::format("find_root: NaN at x = {:.17g}", x));
    return y;
  };
  auto [lo, hi] = bracket;
  if (lo > hi) std::swap(lo, hi);
  const double flo = eval(lo);
  const double fhi = eval(hi);
  if (flo == 0.0) return {lo, 0};
  if (fhi == 0.0) return {hi, 0};
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw NumericalError(fmt::format("find_root: no sign change on [{:.17g}, {:.17g}] (f = {:.6g}, {:.6g})",
                                     lo, hi, flo, fhi));
  }

  std::uintmax_t max_iter = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  double last_x = lo;
  double last_f = flo;
  auto tracked = [&](double x) {
    const double y = eval(x);
    last_x = x;
    last_f = y;
    // Short-circuit the solver once the residual is small enough.
    return std::abs(y) <= tol ? 0.0 : y;
  };
  const auto [a, b] = boost::math::tools::toms748_solve(tracked, lo, hi, flo, fhi, stop, max_iter);
  int iterations = static_cast<int>(max_iter);
  if (a == b) return {a, iterations};
  if (std::abs(last_f) <= tol && last_x >= a && last_x <= b) return {last_x, iterations};
  return {0.5 * (a + b), iterations};
}

}  // namespace ambtalk::numerics
