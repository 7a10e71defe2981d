#include "repmix/intervals.hpp"

#include <algorithm>

namespace repmix {

AllowedSet AllowedSet::complement_of(std::vector<Interval> excluded, double support_lo,
                                     double support_hi) {
  AllowedSet out;
  out.support_lo = support_lo;
  out.support_hi = support_hi;

  // clip to support, drop empties, sort, merge overlaps
  std::vector<Interval> ex;
  ex.reserve(excluded.size());
  for (Interval iv : excluded) {
    iv.lo = std::max(iv.lo, support_lo);
    iv.hi = std::min(iv.hi, support_hi);
    if (!iv.empty()) ex.push_back(iv);
  }
  std::sort(ex.begin(), ex.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const Interval& iv : ex) {
    if (!merged.empty() && iv.lo <= merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    else
      merged.push_back(iv);
  }

  double cursor = support_lo;
  for (const Interval& iv : merged) {
    if (cursor < iv.lo) out.intervals.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < support_hi) out.intervals.push_back({cursor, support_hi});
  return out;
}

}  // namespace repmix
