#ifndef REPMIX_INTERVALS_HPP
#define REPMIX_INTERVALS_HPP

#include <limits>
#include <vector>

namespace repmix {

struct Interval {
  double lo;
  double hi;

  bool empty() const { return !(lo < hi); }
};

/// Union of disjoint, sorted open intervals on the line; the complement of an
/// excluded region within a support interval.
struct AllowedSet {
  std::vector<Interval> intervals;
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();

  static AllowedSet whole(double lo = -std::numeric_limits<double>::infinity(),
                          double hi = std::numeric_limits<double>::infinity()) {
    AllowedSet a;
    a.support_lo = lo;
    a.support_hi = hi;
    a.intervals.push_back({lo, hi});
    return a;
  }

  /// Complement of the union of `excluded` inside (support_lo, support_hi).
  static AllowedSet complement_of(std::vector<Interval> excluded, double support_lo,
                                  double support_hi);

  bool covers_support() const {
    return intervals.size() == 1 && intervals.front().lo == support_lo &&
           intervals.front().hi == support_hi;
  }

  bool contains(double x) const {
    for (const Interval& iv : intervals)
      if (x > iv.lo && x < iv.hi) return true;
    return false;
  }
};

}  // namespace repmix

#endif
