#ifndef REPMIX_MODEL_HPP
#define REPMIX_MODEL_HPP

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "repmix/common.hpp"
#include "repmix/rng.hpp"

namespace repmix {

/// One mixture kernel: location vector and the diagonal of its covariance,
/// both of length m. Covariances are diagonal everywhere in this library.
struct Component {
  std::vector<double> mean;
  std::vector<double> var;

  std::size_t dim() const { return mean.size(); }
};

struct MixtureConfig {
  std::size_t k = 1;  // upper bound on the number of components
  std::size_t m = 1;  // observation dimension
  std::vector<double> alpha;  // Dirichlet concentration, length k

  // default concentration alpha_h = c/k with c = 1
  static MixtureConfig overfitted(std::size_t k, std::size_t m);
};

/// Independent base prior g0 on one component: per-dimension normal for the
/// location and inverse-gamma for the variance.
struct BasePrior {
  std::vector<double> m0;  // location prior mean
  std::vector<double> v0;  // location prior variance
  double a0 = 2.0;         // variance prior shape
  std::vector<double> b0;  // variance prior scale

  std::size_t dim() const { return m0.size(); }

  // m0 = sample mean, v0 = 3 * sample variance, a0 = 2, b0 = 0.05 * range^2;
  // the range-squared scale keeps narrow well-populated components viable
  static BasePrior empirical(const struct Dataset& data);
  static BasePrior standard(std::size_t m);

  double log_g0(const Component& c) const;
  Component draw(Rng& rng) const;
  std::vector<double> draw_location(Rng& rng) const;
};

/// Latent slice levels, kept as log u. The conceptual level u = exp(log_u)
/// lies in [0, 1]; -inf encodes u = 0, which constrains nothing. Log scale
/// keeps levels usable at repulsion strengths where h underflows linearly.
/// The min combiner carries one level; the product combiner one per pair
/// (s, j), j < s, indexed by pair_index.
struct SliceVars {
  double log_u_min = -std::numeric_limits<double>::infinity();
  std::vector<double> log_u_pairs;
};

struct MixtureState {
  std::vector<double> weights;        // length k, sums to one
  std::vector<Component> components;  // length k
  std::vector<int> allocations;       // length n, entries in [0, k)
  SliceVars slice;

  std::size_t k() const { return weights.size(); }
  std::size_t dim() const { return components.empty() ? 0 : components.front().dim(); }
};

struct Dataset {
  std::vector<double> values;  // row-major n x m
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<int> labels;  // empty when no truth labels

  double at(std::size_t i, std::size_t d) const { return values[i * m + d]; }
  bool has_labels() const { return !labels.empty(); }

  static Dataset from_csv(const std::string& path);
  void to_csv(const std::string& path) const;
};

/// Mixture density sum_h p_h prod_d N(y_d; mu_hd, var_hd) at a point y.
double eval_mixture_density(const MixtureState& state, const std::vector<double>& y);

struct Violation {
  enum class Level { Error, Warning };
  Level level;
  std::string message;
};

/// Reports every violated invariant of the configuration and prior. The
/// max(alpha) < m/2 condition is reported as a warning; fits proceed flagged.
std::vector<Violation> validate_config(const MixtureConfig& cfg, const BasePrior& prior);

}  // namespace repmix

#endif
