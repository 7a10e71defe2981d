#include "repmix/truncated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "repmix/common.hpp"
#include "repmix/special.hpp"

namespace repmix {

NormalLaw::NormalLaw(double mean, double var) : mean_(mean), sd_(std::sqrt(var)) {
  if (!(var > 0.0) || !std::isfinite(mean)) throw NumericalError("bad normal law parameters");
}

double NormalLaw::cdf(double x) const { return normal_cdf(x, mean_, sd_); }

double NormalLaw::log_pdf(double x) const { return log_normal_pdf(x, mean_, sd_ * sd_); }

double NormalLaw::support_lo() const { return -std::numeric_limits<double>::infinity(); }
double NormalLaw::support_hi() const { return std::numeric_limits<double>::infinity(); }

InvGammaLaw::InvGammaLaw(double shape, double scale) : shape_(shape), scale_(scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) throw NumericalError("bad inverse-gamma law parameters");
}

double InvGammaLaw::cdf(double x) const { return inv_gamma_cdf(x, shape_, scale_); }

double InvGammaLaw::log_pdf(double x) const {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return log_inv_gamma_pdf(x, shape_, scale_);
}

double InvGammaLaw::bracket_lo() const {
  // Q(a, t) underflows for t beyond ~745 + a log t; x = b/t
  return scale_ / (760.0 + 8.0 * shape_);
}

double InvGammaLaw::bracket_hi() const {
  // P(a, t) ~ t^a / Gamma(a+1) near 0; pick t so the upper tail mass is < 1e-18
  const double t = std::exp((std::lgamma(shape_ + 1.0) + std::log(1e-18)) / shape_);
  return scale_ / t;
}

double InvGammaLaw::support_hi() const { return std::numeric_limits<double>::infinity(); }

namespace {

// The allowed boundary point of highest base density, nudged inside its
// interval; the exact draw from a degenerate slice region sits there.
double pin_to_best_boundary(const UnivariateLaw& base, const AllowedSet& allowed) {
  double best_x = std::numeric_limits<double>::quiet_NaN();
  double best_lp = -std::numeric_limits<double>::infinity();
  for (const Interval& iv : allowed.intervals) {
    if (iv.empty()) continue;
    const double width = iv.hi - iv.lo;
    const double nudge = std::isfinite(width) ? 1e-9 * width : 1e-9 * (1.0 + std::fabs(iv.lo));
    for (double cand : {iv.lo + nudge, iv.hi - nudge}) {
      if (!std::isfinite(cand)) continue;
      if (!(cand > allowed.support_lo && cand < allowed.support_hi)) continue;
      const double lp = base.log_pdf(cand);
      if (lp > best_lp) {
        best_lp = lp;
        best_x = cand;
      }
    }
  }
  if (!std::isfinite(best_x))
    throw SamplerError("slice region has no usable boundary point");
  return best_x;
}

double sample_truncated_impl(const UnivariateLaw& base, const AllowedSet& allowed, Rng& rng,
                             bool pin_on_underflow) {
  const double blo = base.bracket_lo();
  const double bhi = base.bracket_hi();

  // per-interval mass under the base law, endpoints clipped to the brackets
  std::vector<double> mass(allowed.intervals.size());
  std::vector<Interval> clipped(allowed.intervals.size());
  double total = 0.0;
  for (std::size_t i = 0; i < allowed.intervals.size(); ++i) {
    double lo = std::max(allowed.intervals[i].lo, blo);
    double hi = std::min(allowed.intervals[i].hi, bhi);
    if (!(lo < hi)) {
      clipped[i] = {lo, lo};
      mass[i] = 0.0;
      continue;
    }
    clipped[i] = {lo, hi};
    mass[i] = std::max(0.0, base.cdf(hi) - base.cdf(lo));
    total += mass[i];
  }
  if (total < 1e-300) {
    if (pin_on_underflow) return pin_to_best_boundary(base, allowed);
    std::ostringstream msg;
    msg << "slice region numerically empty: total allowed mass " << total << " over "
        << allowed.intervals.size() << " interval(s):";
    for (const Interval& iv : allowed.intervals) msg << " (" << iv.lo << ", " << iv.hi << ")";
    throw SamplerError(msg.str());
  }

  // pick an interval proportional to mass
  const double pick = rng.uniform() * total;
  std::size_t idx = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    acc += mass[i];
    idx = i;
    if (pick < acc) break;
  }
  while (mass[idx] <= 0.0 && idx > 0) --idx;

  double lo = clipped[idx].lo;
  double hi = clipped[idx].hi;
  const double f_lo = base.cdf(lo);
  const double target = f_lo + rng.uniform() * mass[idx];

  // bisection on the CDF; monotone, so the bracket always contains the target
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = base.cdf(mid);
    if (std::fabs(f - target) <= 1e-12) break;
    if (f < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= std::fabs(mid) * 4e-16 + 5e-324) break;
  }
  return mid;
}

}  // namespace

double sample_truncated(const UnivariateLaw& base, const AllowedSet& allowed, Rng& rng) {
  return sample_truncated_impl(base, allowed, rng, false);
}

double sample_truncated_or_pin(const UnivariateLaw& base, const AllowedSet& allowed, Rng& rng) {
  return sample_truncated_impl(base, allowed, rng, true);
}

}  // namespace repmix
