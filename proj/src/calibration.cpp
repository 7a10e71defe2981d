#include "repmix/calibration.hpp"

#include <cmath>
#include <sstream>

#include "repmix/sampler.hpp"
#include "repmix/truncated.hpp"

namespace repmix {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) {
    const double z = x - mu;
    ss += z * z;
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

namespace {

// Calibration variance coordinates: irrelevant for location-only repulsion,
// pinned at the psi prior mode for the full-kernel case. Scales drawn from
// psi give dbar a tail so heavy that no tau reaches c-separation, so the
// elicitation compares the location-driven distance laws at a representative
// scale, the psi scale parameter b0 itself.
std::vector<double> calibration_variances(const BasePrior& prior, const RepulsionSpec& spec) {
  if (spec.rcase == RepulsionCase::LocationOnly) return std::vector<double>(prior.dim(), 1.0);
  return prior.b0;
}

// One configuration with locations from xi and calibration variances.
void propose_configuration(const BasePrior& prior, const RepulsionSpec& spec, std::size_t k,
                           const std::vector<double>& variances, Rng& rng,
                           std::vector<Component>& out) {
  out.resize(k);
  for (std::size_t h = 0; h < k; ++h) {
    out[h].mean = prior.draw_location(rng);
    out[h].var = variances;
  }
}

double mean_pairwise_distance(const RepulsionSpec& spec, const std::vector<Component>& comps) {
  const std::size_t k = comps.size();
  double sum = 0.0;
  for (std::size_t s = 1; s < k; ++s)
    for (std::size_t j = 0; j < s; ++j) sum += distance(spec, comps[s], comps[j]);
  return sum / static_cast<double>(pair_count(k));
}

}  // namespace

std::vector<double> sample_dbar_nonrepulsive(const BasePrior& prior, const RepulsionSpec& spec,
                                             std::size_t k, std::size_t n_mc, Rng& rng) {
  if (k < 2) throw InputError("dbar needs at least two components");
  const std::vector<double> variances = calibration_variances(prior, spec);
  std::vector<double> out;
  out.reserve(n_mc);
  std::vector<Component> comps;
  for (std::size_t it = 0; it < n_mc; ++it) {
    propose_configuration(prior, spec, k, variances, rng, comps);
    out.push_back(mean_pairwise_distance(spec, comps));
  }
  return out;
}

std::vector<double> sample_dbar_repulsive(const BasePrior& prior, const RepulsionSpec& spec,
                                          std::size_t k, std::size_t n_mc, Rng& rng) {
  if (k < 2) throw InputError("dbar needs at least two components");
  const std::vector<double> variances = calibration_variances(prior, spec);
  std::vector<double> out;
  out.reserve(n_mc);
  std::vector<Component> comps;
  std::size_t proposals = 0;
  while (out.size() < n_mc) {
    propose_configuration(prior, spec, k, variances, rng, comps);
    ++proposals;
    const double log_h = log_h_combine(spec, comps);
    const double u = rng.uniform();
    if (u > 0.0 && std::log(u) < log_h) out.push_back(mean_pairwise_distance(spec, comps));
    if (proposals >= 1000000 &&
        static_cast<double>(out.size()) < 1e-4 * static_cast<double>(proposals)) {
      std::ostringstream msg;
      msg << "tau too large for rejection: " << out.size() << " accepted in " << proposals
          << " proposals (tau=" << spec.tau << ", nu=" << spec.nu << ")";
      throw CalibrationError(msg.str());
    }
  }
  return out;
}

std::vector<double> sample_dbar_prior_chain(const BasePrior& prior, const RepulsionSpec& spec,
                                            std::size_t k, std::size_t n_mc, Rng& rng) {
  if (k < 2) throw InputError("dbar needs at least two components");
  const std::size_t m = prior.dim();
  const std::vector<double> variances = calibration_variances(prior, spec);

  // slice Gibbs over the location coordinates only; its stationary law is
  // xi^k(mu) h(gamma) with the calibration variances held fixed
  MixtureState state;
  state.weights.assign(k, 1.0 / static_cast<double>(k));
  if (spec.combiner == Combiner::Product)
    state.slice.log_u_pairs.assign(pair_count(k), -std::numeric_limits<double>::infinity());
  for (int attempt = 0;; ++attempt) {
    propose_configuration(prior, spec, k, variances, rng, state.components);
    if (log_h_combine(spec, state.components) > -std::numeric_limits<double>::infinity()) break;
    if (attempt >= 100) throw CalibrationError("could not start the prior chain");
  }

  const int burn_in = 2000;
  const int thin = 5;
  const int iterations = burn_in + thin * static_cast<int>(n_mc);
  std::vector<double> out;
  out.reserve(n_mc);
  for (int iter = 1; iter <= iterations; ++iter) {
    state.slice = update_slice(state, spec, rng);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t d = 0; d < m; ++d) {
        const AllowedSet allowed = allowed_set_location(state, spec, j, d);
        state.components[j].mean[d] =
            allowed.covers_support()
                ? rng.normal(prior.m0[d], std::sqrt(prior.v0[d]))
                : sample_truncated_or_pin(NormalLaw(prior.m0[d], prior.v0[d]), allowed, rng);
      }
    }
    if (iter > burn_in && (iter - burn_in) % thin == 0)
      out.push_back(mean_pairwise_distance(spec, state.components));
  }
  return out;
}

namespace {

// Fraction of g0^k proposals a rejection sampler would accept at this tau.
double rejection_pilot_rate(const BasePrior& prior, const RepulsionSpec& spec, std::size_t k,
                            const std::vector<double>& variances, std::size_t n_proposals,
                            Rng& rng) {
  std::vector<Component> comps;
  std::size_t accepted = 0;
  for (std::size_t it = 0; it < n_proposals; ++it) {
    propose_configuration(prior, spec, k, variances, rng, comps);
    const double log_h = log_h_combine(spec, comps);
    const double u = rng.uniform();
    if (u > 0.0 && std::log(u) < log_h) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(n_proposals);
}

}  // namespace

CalibrationResult calibrate_tau(const BasePrior& prior, RepulsionCase rcase, std::size_t k,
                                double c, int nu, Combiner combiner, std::uint64_t seed,
                                std::size_t n_mc) {
  if (k < 2) throw InputError("calibration needs at least two components");
  if (!(c >= 0.0)) throw InputError("separation constant c must be nonnegative");

  RepulsionSpec spec;
  spec.rcase = rcase;
  spec.combiner = combiner;
  spec.nu = nu;

  // rho2/sigma2 do not depend on tau; estimate them once
  Rng rng0(derive_seed(seed, 0));
  spec.tau = 1.0;
  const std::vector<double> dbar0 = sample_dbar_nonrepulsive(prior, spec, k, n_mc, rng0);
  const double rho2 = mean_of(dbar0);
  const double sigma2 = sd_of(dbar0);

  bool use_chain = false;
  double tau = 0.01;
  for (int step = 1; tau <= 1e6; ++step, tau *= 1.5) {
    spec.tau = tau;
    if (!use_chain) {
      // rejection stays worthwhile while n_mc accepts fit in ~1e6 proposals
      Rng probe(derive_seed(seed, 0xF17 + static_cast<std::uint64_t>(step)));
      const double rate =
          rejection_pilot_rate(prior, spec, k, calibration_variances(prior, spec), 20000, probe);
      if (rate * 1e6 < static_cast<double>(n_mc)) use_chain = true;
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(step)));
    const std::vector<double> dbar1 = use_chain
                                          ? sample_dbar_prior_chain(prior, spec, k, n_mc, rng)
                                          : sample_dbar_repulsive(prior, spec, k, n_mc, rng);
    CalibrationResult res;
    res.tau_star = tau;
    res.nu = nu;
    res.c = c;
    res.rho1 = mean_of(dbar1);
    res.rho2 = rho2;
    res.sigma1 = sd_of(dbar1);
    res.sigma2 = sigma2;
    res.mc_samples = n_mc;
    res.seed = seed;
    res.steps = step;
    res.method = use_chain ? "prior-chain" : "rejection";
    if (res.separated()) return res;
  }
  throw CalibrationError("tau search exceeded 1e6 without reaching c-separation");
}

}  // namespace repmix
