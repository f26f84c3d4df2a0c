#include "ambtalk/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ambtalk/errors.hpp"

namespace ambtalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidArgument(fmt::format("beta must be finite and > 0, got {}", beta));
  }
}

numerics::ScalarFn tilted_log_integrand(const Density& g_m, double a, double beta) {
  return [&g_m, a, beta](double t) { return g_m.log_value(t) + (t - a) * (t - a) / beta; };
}

ReceiverSolution full_ambiguity_solution(const Interval& iv, const AmbiguityLevel& level, SolveRegime regime) {
  const double half = 0.5 * iv.width();
  return ReceiverSolution{iv,
                          level,
                          iv.midpoint(),
                          -kInf,
                          -half * half,
                          EndpointLottery{iv.lo(), iv.hi()},
                          0.0,
                          0,
                          regime};
}

}  // namespace

AmbiguityLevel AmbiguityLevel::bayesian() { return AmbiguityLevel(Mode::bayesian, kInf); }

AmbiguityLevel AmbiguityLevel::finite(double beta) {
  check_beta(beta);
  return AmbiguityLevel(Mode::finite, beta);
}

std::string AmbiguityLevel::to_string() const {
  switch (mode_) {
    case Mode::full_ambiguity: return "zero";
    case Mode::bayesian: return "infinity";
    case Mode::finite: return fmt::format("{:.12g}", beta_);
  }
  return "?";
}

std::string_view to_string(SolveRegime regime) {
  switch (regime) {
    case SolveRegime::full_ambiguity: return "full-ambiguity";
    case SolveRegime::small_beta_cutoff: return "small-beta-cutoff";
    case SolveRegime::tilted: return "tilted";
    case SolveRegime::bayesian: return "bayesian";
  }
  return "?";
}

double dual_objective(const Density& g_m, double a, double beta, const numerics::QuadratureSpec& quad) {
  check_beta(beta);
  if (!std::isfinite(a)) throw InvalidArgument("action must be finite");
  return numerics::log_integrate_exp(tilted_log_integrand(g_m, a, beta), g_m.support(), g_m.breakpoints(), quad);
}

TiltedDensity worst_case_density(const Density& g_m, double a, double beta, const numerics::QuadratureSpec& quad) {
  const double log_j = dual_objective(g_m, a, beta, quad);
  if (!std::isfinite(log_j)) {
    throw NumericalError(fmt::format("worst-case density is not normalizable (log J = {})", log_j));
  }
  const double normalizer = -log_j;
  auto log_f = [g_m, a, beta, normalizer](double t) {
    return normalizer + (t - a) * (t - a) / beta + g_m.log_value(t);
  };
  Density f = Density::from_normalized_log(
      DensityKind::tilted, g_m.support(), std::vector<double>(g_m.breakpoints().begin(), g_m.breakpoints().end()),
      log_f, fmt::format("tilt(a={:.12g}, beta={:.6g}; {})", a, beta, g_m.description()));
  return {std::move(f), normalizer};
}

double foc_residual(const Density& g_m, double a, double beta, const numerics::QuadratureSpec& quad) {
  const double log_j = dual_objective(g_m, a, beta, quad);
  const auto log_integrand = tilted_log_integrand(g_m, a, beta);
  return numerics::integrate([&](double t) { return (t - a) * std::exp(log_integrand(t) - log_j); }, g_m.support(),
                             g_m.breakpoints(), quad);
}

double fixed_point_map(const Density& g_m, double a, double beta, const numerics::QuadratureSpec& quad) {
  return a + foc_residual(g_m, a, beta, quad);
}

ReceiverSolution solve_action(const Density& g_m, const Interval& iv, const AmbiguityLevel& level,
                              const ReceiverOptions& options) {
  if (std::abs(g_m.support().lo() - iv.lo()) > 1e-12 || std::abs(g_m.support().hi() - iv.hi()) > 1e-12) {
    throw InvalidArgument(fmt::format("solve_action: density support {} does not match interval {}",
                                      g_m.support().to_string(), iv.to_string()));
  }

  switch (level.mode()) {
    case AmbiguityLevel::Mode::full_ambiguity:
      return full_ambiguity_solution(iv, level, SolveRegime::full_ambiguity);

    case AmbiguityLevel::Mode::bayesian: {
      const double action = mean(g_m, options.quad);
      const double var = g_m.expectation([action](double t) { return (t - action) * (t - action); }, options.quad);
      const double residual = g_m.expectation([action](double t) { return t - action; }, options.quad);
      return ReceiverSolution{iv, level, action, 0.0, -var, g_m, residual, 0, SolveRegime::bayesian};
    }

    case AmbiguityLevel::Mode::finite:
      break;
  }

  const double beta = level.beta();
  if (beta < options.small_beta_cutoff) {
    return full_ambiguity_solution(iv, level, SolveRegime::small_beta_cutoff);
  }

  // log J is convex in a, so its minimizer is the unique root of the
  // first-order condition. Locate it with Brent, then polish on the FOC.
  const auto coarse = numerics::minimize_scalar(
      [&](double a) { return dual_objective(g_m, a, beta, options.quad); }, iv, options.bracket_tol);
  const auto residual = [&](double a) { return foc_residual(g_m, a, beta, options.quad); };

  const double pad = 10.0 * options.bracket_tol + 1e-9;
  double lo = std::max(iv.lo(), coarse.x - pad);
  double hi = std::min(iv.hi(), coarse.x + pad);
  double r_lo = residual(lo);
  double r_hi = residual(hi);
  int evaluations = 2;
  if (r_lo < 0.0 || r_hi > 0.0) {
    lo = iv.lo();
    hi = iv.hi();
    r_lo = residual(lo);
    r_hi = residual(hi);
    evaluations += 2;
  }
  double action = 0.0;
  if (r_lo <= 0.0) {
    action = lo;
  } else if (r_hi >= 0.0) {
    action = hi;
  } else {
    const auto root = numerics::find_root_ex(residual, {lo, hi}, options.foc_tol);
    action = root.x;
    evaluations += root.iterations;
  }

  TiltedDensity tilt = worst_case_density(g_m, action, beta, options.quad);
  const double final_residual = residual(action);
  return ReceiverSolution{iv,
                          level,
                          action,
                          tilt.normalizer,
                          beta * tilt.normalizer,
                          std::move(tilt.density),
                          final_residual,
                          coarse.iterations + evaluations,
                          SolveRegime::tilted};
}

std::vector<SweepPoint> action_sweep(const Density& g_m, const Interval& iv, std::span<const double> betas,
                                     const ReceiverOptions& options) {
  for (std::size_t i = 0; i < betas.size(); ++i) {
    check_beta(betas[i]);
    if (i > 0 && !(betas[i] > betas[i - 1])) throw InvalidArgument("action_sweep: betas must be ascending");
  }
  std::vector<SweepPoint> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    out.push_back({beta, solve_action(g_m, iv, AmbiguityLevel::finite(beta), options)});
  }
  return out;
}

}  // namespace ambtalk
