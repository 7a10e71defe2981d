#ifndef REPMIX_SAMPLER_HPP
#define REPMIX_SAMPLER_HPP

#include <cstdint>
#include <vector>

#include "repmix/intervals.hpp"
#include "repmix/model.hpp"
#include "repmix/repulsion.hpp"
#include "repmix/rng.hpp"

namespace repmix {

struct McmcConfig {
  int iterations = 10000;
  int burn_in = 5000;
  int thin = 10;
  std::uint64_t seed = 0;
  bool repulsive = true;  // false runs the plain conjugate Gibbs comparator
  bool check_invariants = false;  // verify slice validity after every sweep
};

struct Draw {
  int iter = 0;  // 1-based iteration the draw was retained at
  std::vector<double> weights;
  std::vector<Component> components;
  std::vector<int> allocations;
};

/// Post-burn-in, thinned states of one chain (or several concatenated).
struct PosteriorDraws {
  std::size_t k = 0;
  std::size_t m = 0;
  std::vector<Draw> draws;
};

/// Draw the slice level(s) given the current components: one level for the
/// min combiner, one per pair for the product combiner.
SliceVars update_slice(const MixtureState& state, const RepulsionSpec& spec, Rng& rng);

/// Exact allocation probabilities P(z_i = h) for observation i.
std::vector<double> allocation_probabilities(const MixtureState& state, const Dataset& data,
                                             std::size_t i);

std::vector<int> update_allocations(const MixtureState& state, const Dataset& data, Rng& rng);

std::vector<double> update_weights(const MixtureState& state, const MixtureConfig& cfg, Rng& rng);

/// Region where coordinate `dim` of component j's location keeps every
/// pairwise repulsion above its slice level, all other coordinates fixed.
AllowedSet allowed_set_location(const MixtureState& state, const RepulsionSpec& spec,
                                std::size_t j, std::size_t dim);

/// Same for coordinate `dim` of component j's variance; FullKernel case only.
AllowedSet allowed_set_scale(const MixtureState& state, const RepulsionSpec& spec, std::size_t j,
                             std::size_t dim);

/// Untruncated conjugate conditional for a location coordinate: (mean, variance).
/// Empty components fall back to the prior (m0_d, v0_d).
std::pair<double, double> conditional_base_location(const MixtureState& state, const Dataset& data,
                                                    const BasePrior& prior, std::size_t j,
                                                    std::size_t dim);

/// Untruncated conjugate conditional for a variance coordinate: inverse-gamma
/// (shape, scale). Empty components fall back to the prior (a0, b0_d).
std::pair<double, double> conditional_base_scale(const MixtureState& state, const Dataset& data,
                                                 const BasePrior& prior, std::size_t j,
                                                 std::size_t dim);

/// Initial state: farthest-point allocations, cluster moments, jittered means.
/// Retries the jitter until h > 0 under the repulsive prior.
MixtureState initialize_state(const Dataset& data, const MixtureConfig& cfg,
                              const BasePrior& prior, const RepulsionSpec& spec, bool repulsive,
                              Rng& rng);

/// Full slice-sampling chain; sweep order is u, z, p, then per component and
/// per dimension the location and (FullKernel) variance coordinates.
PosteriorDraws run_chain(const Dataset& data, const McmcConfig& mcmc, const MixtureConfig& cfg,
                         const BasePrior& prior, const RepulsionSpec& spec, Rng& rng);

}  // namespace repmix

#endif
