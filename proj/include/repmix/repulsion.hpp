#ifndef REPMIX_REPULSION_HPP
#define REPMIX_REPULSION_HPP

#include <vector>

#include "repmix/model.hpp"

namespace repmix {

/// What the pairwise distance is measured on: the full kernel (symmetric
/// Kullback-Leibler between Gaussians) or the location vectors (Euclidean).
enum class RepulsionCase { FullKernel, LocationOnly };

/// How pairwise repulsion terms aggregate across the pair set.
enum class Combiner { Product, Min };

struct RepulsionSpec {
  RepulsionCase rcase = RepulsionCase::LocationOnly;
  Combiner combiner = Combiner::Min;
  double tau = 1.0;
  int nu = 1;
};

/// Pairwise distance between two components under the chosen case.
///
/// FullKernel, specialised to diagonal covariances:
///   sum_d (v1d/v2d + v2d/v1d) - 2m + sum_d (mu1d - mu2d)^2 (1/v1d + 1/v2d)
/// LocationOnly: Euclidean norm of the mean difference.
double distance(const RepulsionSpec& spec, const Component& c1, const Component& c2);

/// g(d) = exp(-tau d^-nu), extended continuously with g(0) = 0.
double g_repulsion(const RepulsionSpec& spec, double d);

/// Inverse of g on (0, 1): d = (tau / -ln u)^(1/nu).
double g_inverse(const RepulsionSpec& spec, double u);

/// log g(d) = -tau d^-nu, exact at any repulsion strength.
double log_g_repulsion(const RepulsionSpec& spec, double d);

/// g_inverse taking log u; defined for any log_u < 0, including magnitudes
/// whose linear u would underflow.
double g_inverse_log(const RepulsionSpec& spec, double log_u);

/// Repulsion factor h over all pairs: product or minimum of g(d_sj).
/// An empty pair set (k = 1) gives 1; any coincident pair gives 0.
double h_combine(const RepulsionSpec& spec, const std::vector<Component>& components);

/// log h, with -inf when h = 0. Products over many pairs underflow in linear
/// space, so prior evaluation goes through this.
double log_h_combine(const RepulsionSpec& spec, const std::vector<Component>& components);

/// log of the unnormalized repulsive prior: sum_j log g0(gamma_j) + log h(gamma).
/// The normalizing constant is never computed; all consumers are ratio-based.
double log_prior_unnormalized(const RepulsionSpec& spec, const BasePrior& prior,
                              const std::vector<Component>& components);

}  // namespace repmix

#endif
