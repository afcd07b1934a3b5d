#pragma once

#include <cmath>
#include <limits>

#include "umean/errors.hpp"

namespace umean {

/// A real interval with possibly infinite, possibly open endpoints.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  bool hi_open = true;

  static Interval closed(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval open(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval left_closed(double lo, double hi) { return {lo, hi, false, true}; }
  static Interval right_closed(double lo, double hi) { return {lo, hi, true, false}; }
  static Interval real_line() { return Interval{}; }

  void validate() const {
    if (!(lo < hi)) throw ValidationError("Interval: lo must be < hi");
    if (std::isinf(lo) && !lo_open) throw ValidationError("Interval: -inf endpoint must be open");
    if (std::isinf(hi) && !hi_open) throw ValidationError("Interval: +inf endpoint must be open");
  }

  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && lo_open) return false;
    if (x == hi && hi_open) return false;
    return true;
  }

  /// Membership in the closure [lo, hi].
  bool contains_closure(double x) const { return x >= lo && x <= hi; }

  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

}  // namespace umean
