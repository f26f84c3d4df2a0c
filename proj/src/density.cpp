#include "ambtalk/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "ambtalk/errors.hpp"

namespace ambtalk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSupportSlack = 1e-12;

std::vector<double> clip_breakpoints(std::span<const double> raw, const Interval& iv) {
  std::vector<double> out;
  for (double b : raw) {
    if (iv.contains(b)) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// P(a < Z < b) for a standard normal, accurate in both tails.
double normal_mass(double a, double b) {
  if (a > 0.0) return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
  return normal_cdf(b) - normal_cdf(a);
}

double smootherstep(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }

constexpr std::array<double, 3> kJumps{0.25, 0.5, 0.75};
constexpr std::array<double, 4> kPlateaus{0.0, 3.0, 0.0, 1.0};

}  // namespace

std::string_view to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::uniform: return "uniform";
    case DensityKind::piecewise_linear: return "piecewise-linear";
    case DensityKind::piecewise_polynomial: return "piecewise-polynomial";
    case DensityKind::truncated_normal: return "truncated-normal";
    case DensityKind::counterexample: return "counterexample";
    case DensityKind::tilted: return "tilted";
  }
  return "unknown";
}

Density Density::from_unnormalized(DensityKind kind, Interval support, std::vector<double> breakpoints,
                                   Evaluator unnormalized, std::string description,
                                   const numerics::QuadratureSpec& quad) {
  breakpoints = clip_breakpoints(breakpoints, support);
  const double total = numerics::integrate(unnormalized, support, breakpoints, quad);
  if (!(total > 0.0)) {
    throw ZeroMassError(fmt::format("density '{}' has no mass on {}", description, support.to_string()));
  }
  const double log_total = std::log(total);
  auto value = [raw = unnormalized, total](double t) { return raw(t) / total; };
  auto log_value = [raw = std::move(unnormalized), log_total](double t) { return safe_log(raw(t)) - log_total; };
  return Density(std::make_shared<const Impl>(Impl{support, kind, std::move(breakpoints), std::move(value),
                                                   std::move(log_value), std::move(description)}));
}

Density Density::from_normalized_log(DensityKind kind, Interval support, std::vector<double> breakpoints,
                                     Evaluator log_density, std::string description) {
  breakpoints = clip_breakpoints(breakpoints, support);
  auto value = [log_density](double t) { return std::exp(log_density(t)); };
  return Density(std::make_shared<const Impl>(Impl{support, kind, std::move(breakpoints), std::move(value),
                                                   std::move(log_density), std::move(description)}));
}

double Density::operator()(double theta) const {
  if (!impl_->support.contains(theta)) return 0.0;
  return impl_->value(theta);
}

double Density::log_value(double theta) const {
  if (!impl_->support.contains(theta)) return kNegInf;
  return impl_->log_value(theta);
}

double Density::expectation(const numerics::ScalarFn& fn, const numerics::QuadratureSpec& quad) const {
  return numerics::integrate([&](double t) { return fn(t) * impl_->value(t); }, impl_->support,
                             impl_->breakpoints, quad);
}

double Density::mass(const Interval& iv, const numerics::QuadratureSpec& quad) const {
  const double lo = std::max(iv.lo(), support().lo());
  const double hi = std::min(iv.hi(), support().hi());
  if (!(lo < hi)) return 0.0;
  return numerics::integrate(impl_->value, Interval(lo, hi), impl_->breakpoints, quad);
}

Density make_uniform(const Interval& iv) {
  const double log_height = -std::log(iv.width());
  return Density::from_normalized_log(DensityKind::uniform, iv, {}, [log_height](double) { return log_height; },
                                      fmt::format("uniform{}", iv.to_string()));
}

Density make_piecewise_linear(std::span<const Knot> knots, const Interval& iv) {
  if (knots.size() < 2) throw InvalidArgument("piecewise-linear density needs at least two knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].theta) || !std::isfinite(knots[i].value)) {
      throw InvalidArgument("piecewise-linear knots must be finite");
    }
    if (knots[i].value < 0.0) {
      throw InvalidArgument(fmt::format("negative knot value {} at theta = {}", knots[i].value, knots[i].theta));
    }
    if (i > 0 && !(knots[i].theta > knots[i - 1].theta)) {
      throw InvalidArgument("knot abscissae must be strictly increasing");
    }
  }
  if (knots.front().theta > iv.lo() + kSupportSlack || knots.back().theta < iv.hi() - kSupportSlack) {
    throw InvalidArgument(fmt::format("knots [{}, {}] do not cover the support {}", knots.front().theta,
                                      knots.back().theta, iv.to_string()));
  }

  std::vector<Knot> table(knots.begin(), knots.end());
  auto interp = [table](double t) {
    auto it = std::upper_bound(table.begin(), table.end(), t, [](double x, const Knot& k) { return x < k.theta; });
    if (it == table.begin()) return table.front().value;
    if (it == table.end()) return table.back().value;
    const Knot& right = *it;
    const Knot& left = *(it - 1);
    const double w = (t - left.theta) / (right.theta - left.theta);
    return left.value + w * (right.value - left.value);
  };

  std::vector<double> breakpoints;
  for (const Knot& k : knots) breakpoints.push_back(k.theta);
  std::string description = "piecewise-linear(";
  for (std::size_t i = 0; i < knots.size(); ++i) {
    description += fmt::format("{}{:.6g}:{:.6g}", i ? " " : "", knots[i].theta, knots[i].value);
  }
  description += ")" + iv.to_string();
  try {
    return Density::from_unnormalized(DensityKind::piecewise_linear, iv, std::move(breakpoints), interp,
                                      std::move(description));
  } catch (const ZeroMassError&) {
    throw InvalidArgument("piecewise-linear density has zero total mass");
  }
}

Density make_piecewise_polynomial(std::span<const PolynomialPiece> pieces, const Interval& iv) {
  if (pieces.empty()) throw InvalidArgument("piecewise-polynomial density needs at least one piece");
  std::vector<PolynomialPiece> table(pieces.begin(), pieces.end());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!(table[i].lo < table[i].hi) || table[i].coeffs.empty()) {
      throw InvalidArgument(fmt::format("polynomial piece {} is malformed", i));
    }
    if (i > 0 && std::abs(table[i].lo - table[i - 1].hi) > kSupportSlack) {
      throw InvalidArgument("polynomial pieces must be contiguous");
    }
  }
  if (table.front().lo > iv.lo() + kSupportSlack || table.back().hi < iv.hi() - kSupportSlack) {
    throw InvalidArgument("polynomial pieces do not cover the support");
  }

  auto horner = [](const PolynomialPiece& p, double t) {
    const double x = t - p.lo;
    double acc = 0.0;
    for (auto c = p.coeffs.rbegin(); c != p.coeffs.rend(); ++c) acc = acc * x + *c;
    return acc;
  };
  for (const PolynomialPiece& p : table) {
    constexpr int kSamples = 256;
    for (int k = 0; k <= kSamples; ++k) {
      const double t = p.lo + (p.hi - p.lo) * k / kSamples;
      if (horner(p, t) < -1e-14) {
        throw InvalidArgument(fmt::format("polynomial piece on [{}, {}] is negative at {}", p.lo, p.hi, t));
      }
    }
  }

  auto eval = [table, horner](double t) {
    auto it = std::upper_bound(table.begin(), table.end(), t,
                               [](double x, const PolynomialPiece& p) { return x < p.hi; });
    if (it == table.end()) it = table.end() - 1;
    return std::max(0.0, horner(*it, t));
  };
  std::vector<double> breakpoints;
  for (const PolynomialPiece& p : table) breakpoints.push_back(p.lo);
  breakpoints.push_back(table.back().hi);
  try {
    return Density::from_unnormalized(DensityKind::piecewise_polynomial, iv, std::move(breakpoints), eval,
                                      fmt::format("piecewise-polynomial({} pieces){}", table.size(), iv.to_string()));
  } catch (const ZeroMassError&) {
    throw InvalidArgument("piecewise-polynomial density has zero total mass");
  }
}

Density make_truncated_normal(double h, double sigma, const Interval& iv) {
  if (!std::isfinite(h)) throw InvalidArgument("truncated normal location must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument(fmt::format("truncated normal requires sigma > 0, got {}", sigma));
  }
  const double z_lo = (iv.lo() - h) / sigma;
  const double z_hi = (iv.hi() - h) / sigma;
  const double mass = normal_mass(z_lo, z_hi);
  if (!(mass > 0.0)) {
    throw InvalidArgument(fmt::format("normal({}, {}) has no representable mass on {}", h, sigma, iv.to_string()));
  }
  const double log_norm = std::log(sigma) + 0.5 * std::log(2.0 * std::numbers::pi) + std::log(mass);
  auto log_density = [h, sigma, log_norm](double t) {
    const double z = (t - h) / sigma;
    return -0.5 * z * z - log_norm;
  };
  return Density::from_normalized_log(DensityKind::truncated_normal, iv, {}, log_density,
                                      fmt::format("truncated-normal(h={:.6g}, sigma={:.6g}){}", h, sigma,
                                                  iv.to_string()));
}

double counterexample_limit(double theta) {
  if (theta < 0.0 || theta > 1.0) return 0.0;
  std::size_t plateau = 0;
  while (plateau < kJumps.size() && theta > kJumps[plateau]) ++plateau;
  return kPlateaus[plateau];
}

Density make_counterexample(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.125)) {
    throw InvalidArgument(fmt::format("counterexample requires 0 < epsilon < 1/8, got {}", epsilon));
  }
  auto raw = [epsilon](double t) {
    for (std::size_t k = 0; k < kJumps.size(); ++k) {
      if (std::abs(t - kJumps[k]) < epsilon) {
        const double s = smootherstep((t - (kJumps[k] - epsilon)) / (2.0 * epsilon));
        return kPlateaus[k] + (kPlateaus[k + 1] - kPlateaus[k]) * s;
      }
    }
    return counterexample_limit(t);
  };
  std::vector<double> breakpoints;
  for (double b : kJumps) {
    breakpoints.push_back(b - epsilon);
    breakpoints.push_back(b + epsilon);
  }
  return Density::from_unnormalized(DensityKind::counterexample, Interval(0.0, 1.0), std::move(breakpoints), raw,
                                    fmt::format("counterexample(eps={:.6g})", epsilon));
}

Density restrict(const Density& g, const Interval& iv, const numerics::QuadratureSpec& quad) {
  if (!g.support().contains(iv, kSupportSlack)) {
    throw InvalidArgument(fmt::format("cannot restrict density on {} to {}", g.support().to_string(), iv.to_string()));
  }
  const Interval clipped(std::max(iv.lo(), g.support().lo()), std::min(iv.hi(), g.support().hi()));
  const double mass = g.mass(clipped, quad);
  if (!(mass > 0.0)) {
    throw ZeroMassError(fmt::format("reference density has zero mass on {}", clipped.to_string()));
  }
  const double log_mass = std::log(mass);
  std::vector<double> breakpoints(g.breakpoints().begin(), g.breakpoints().end());
  return Density::from_normalized_log(g.kind(), clipped, std::move(breakpoints),
                                      [g, log_mass](double t) { return g.log_value(t) - log_mass; },
                                      fmt::format("{}|{}", g.description(), clipped.to_string()));
}

double mean(const Density& f, const numerics::QuadratureSpec& quad) {
  return f.expectation([](double t) { return t; }, quad);
}

double variance(const Density& f, const numerics::QuadratureSpec& quad) {
  const double mu = mean(f, quad);
  return f.expectation([mu](double t) { return (t - mu) * (t - mu); }, quad);
}

double kl_divergence(const Density& f, const Density& g, const numerics::QuadratureSpec& quad) {
  if (std::abs(f.support().lo() - g.support().lo()) > kSupportSlack ||
      std::abs(f.support().hi() - g.support().hi()) > kSupportSlack) {
    throw InvalidArgument(fmt::format("kl_divergence: mismatched supports {} and {}", f.support().to_string(),
                                      g.support().to_string()));
  }
  std::vector<double> breakpoints(f.breakpoints().begin(), f.breakpoints().end());
  breakpoints.insert(breakpoints.end(), g.breakpoints().begin(), g.breakpoints().end());

  bool singular = false;
  double kl = 0.0;
  try {
    kl = numerics::integrate(
        [&](double t) {
          const double log_f = f.log_value(t);
          if (log_f == kNegInf) return 0.0;
          const double log_g = g.log_value(t);
          if (log_g == kNegInf) {
            singular = true;
            return 0.0;
          }
          return std::exp(log_f) * (log_f - log_g);
        },
        f.support(), breakpoints, quad);
  } catch (const NumericalError&) {
    // log(f/g) is unbounded next to the zero set of g.
    if (!singular) throw;
  }
  if (singular) return std::numeric_limits<double>::infinity();
  return std::max(0.0, kl);
}

Density mirror(const Density& g) {
  const Interval iv = g.support();
  std::vector<double> breakpoints;
  for (double b : g.breakpoints()) breakpoints.push_back(iv.reflect(b));
  return Density::from_normalized_log(g.kind(), iv, std::move(breakpoints),
                                      [g, iv](double t) {
                                        if (!iv.contains(t)) return kNegInf;
                                        // lo + hi - t can round just outside the support.
                                        return g.log_value(std::clamp(iv.reflect(t), iv.lo(), iv.hi()));
                                      },
                                      fmt::format("mirror({})", g.description()));
}

}  // namespace ambtalk
