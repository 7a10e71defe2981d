#include "repmix/repulsion.hpp"

#include <cmath>
#include <limits>

namespace repmix {

double distance(const RepulsionSpec& spec, const Component& c1, const Component& c2) {
  const std::size_t m = c1.dim();
  if (c2.dim() != m) throw InputError("components differ in dimension");
  if (spec.rcase == RepulsionCase::LocationOnly) {
    double ss = 0.0;
    for (std::size_t d = 0; d < m; ++d) {
      const double z = c1.mean[d] - c2.mean[d];
      ss += z * z;
    }
    return std::sqrt(ss);
  }
  double s = -2.0 * static_cast<double>(m);
  for (std::size_t d = 0; d < m; ++d) {
    s += c1.var[d] / c2.var[d] + c2.var[d] / c1.var[d];
    const double z = c1.mean[d] - c2.mean[d];
    s += z * z * (1.0 / c1.var[d] + 1.0 / c2.var[d]);
  }
  return s < 0.0 ? 0.0 : s;
}

double g_repulsion(const RepulsionSpec& spec, double d) {
  if (d <= 0.0) return 0.0;
  return std::exp(-spec.tau * std::pow(d, -static_cast<double>(spec.nu)));
}

double g_inverse(const RepulsionSpec& spec, double u) {
  if (!(u > 0.0 && u < 1.0)) throw InputError("g_inverse requires u in (0, 1)");
  return std::pow(spec.tau / -std::log(u), 1.0 / static_cast<double>(spec.nu));
}

double log_g_repulsion(const RepulsionSpec& spec, double d) {
  if (d <= 0.0) return -std::numeric_limits<double>::infinity();
  return -spec.tau * std::pow(d, -static_cast<double>(spec.nu));
}

double g_inverse_log(const RepulsionSpec& spec, double log_u) {
  if (!(log_u < 0.0)) throw InputError("g_inverse_log requires log u < 0");
  return std::pow(spec.tau / -log_u, 1.0 / static_cast<double>(spec.nu));
}

double log_h_combine(const RepulsionSpec& spec, const std::vector<Component>& components) {
  const std::size_t k = components.size();
  if (k <= 1) return 0.0;
  double acc = spec.combiner == Combiner::Product ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t s = 1; s < k; ++s) {
    for (std::size_t j = 0; j < s; ++j) {
      const double d = distance(spec, components[s], components[j]);
      if (d <= 0.0) return -std::numeric_limits<double>::infinity();
      const double lg = -spec.tau * std::pow(d, -static_cast<double>(spec.nu));
      if (spec.combiner == Combiner::Product)
        acc += lg;
      else
        acc = std::min(acc, lg);
    }
  }
  return acc;
}

double h_combine(const RepulsionSpec& spec, const std::vector<Component>& components) {
  return std::exp(log_h_combine(spec, components));
}

double log_prior_unnormalized(const RepulsionSpec& spec, const BasePrior& prior,
                              const std::vector<Component>& components) {
  double lp = log_h_combine(spec, components);
  if (lp == -std::numeric_limits<double>::infinity()) return lp;
  for (const Component& c : components) lp += prior.log_g0(c);
  return lp;
}

}  // namespace repmix
