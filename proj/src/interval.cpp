#include "ambtalk/interval.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ambtalk/errors.hpp"

namespace ambtalk {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument(fmt::format("interval endpoints must be finite, got [{}, {}]", lo, hi));
  }
  if (lo < 0.0 || hi > 1.0) {
    throw InvalidArgument(fmt::format("interval [{}, {}] is not contained in [0, 1]", lo, hi));
  }
  if (!(lo < hi)) {
    throw InvalidArgument(fmt::format("degenerate interval [{}, {}]: lo must be < hi", lo, hi));
  }
}

std::string Interval::to_string() const { return fmt::format("[{:.12g}, {:.12g}]", lo_, hi_); }

}  // namespace ambtalk
