#pragma once

#include <string>

namespace ambtalk {

// Closed sub-interval [lo, hi] of the state space [0, 1], lo < hi.
class Interval {
 public:
  Interval(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  double midpoint() const { return 0.5 * (lo_ + hi_); }

  bool contains(double x) const { return x >= lo_ && x <= hi_; }
  // Containment with a small absolute slack for quadrature-level roundoff.
  bool contains(const Interval& other, double slack = 0.0) const {
    return other.lo_ >= lo_ - slack && other.hi_ <= hi_ + slack;
  }

  // lo + hi - x
  double reflect(double x) const { return lo_ + hi_ - x; }

  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

}  // namespace ambtalk
