#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ambtalk/density.hpp"
#include "ambtalk/errors.hpp"
#include "ambtalk/numerics.hpp"
#include "ambtalk/receiver.hpp"

namespace ambtalk {

// Malformed or out-of-range configuration. The message starts with the
// origin of the offending entry, e.g. "run.cfg:4: beta: ..." or
// "--set d: ...".
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Flat key = value configuration.
//
//   # comment
//   density         = uniform | piecewise-linear | truncated-normal | counterexample
//   density.lo      = 0            (support; default [0, 1])
//   density.hi      = 1
//   density.knots   = 0:0 1:2      (piecewise-linear: theta:value pairs)
//   density.h       = 0.5          (truncated-normal location)
//   density.sigma   = 0.2
//   density.epsilon = 0.01         (counterexample smoothing half-width)
//   prior, prior.*                 sender prior, same grammar; defaults to density
//   beta            = zero | infinity | <number > 0>
//   d               = <number > 0>
//   N               = <integer >= 1> | max
//   lo, hi          = action interval (defaults to the density support)
//   betas           = 1e-3, 1e-2, 1   or   logspace(1e-3, 1e4, 8)
//   thresholds      = 0, 0.3, 1    (exante: fixed partition instead of solving)
//   which           = example1 | counterexample | welfare-mirror | exante | all
//   samples         = 512          (worst-case CSV resolution)
//   quad.nodes, quad.refine, quad.max_subintervals, quad.abs_tol, quad.rel_tol
struct RunConfig {
  std::optional<Density> density;
  std::optional<Density> prior;
  std::optional<AmbiguityLevel> beta;
  std::optional<double> d;
  std::optional<int> intervals;
  bool intervals_max = false;
  std::optional<double> lo;
  std::optional<double> hi;
  std::vector<double> betas;
  std::vector<double> thresholds;
  std::optional<std::string> which;
  int samples = 512;
  numerics::QuadratureSpec quad{};

  // Every resolved entry with its origin, in key order.
  struct Entry {
    std::string value;
    std::string origin;
  };
  std::map<std::string, Entry> entries;

  // Origin of a key for error messages ("<default>" when absent).
  std::string origin_of(std::string_view key) const;
};

// Parses config text (may be empty) and then applies `key=value` overrides in
// order. `source` names the text in error messages.
RunConfig parse_config(std::string_view text, std::string_view source,
                       const std::vector<std::string>& overrides = {});

}  // namespace ambtalk
