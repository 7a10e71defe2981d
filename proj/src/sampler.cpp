#include "repmix/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "repmix/special.hpp"
#include "repmix/truncated.hpp"

namespace repmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log slice level for the pair (s, j); -inf means unconstrained.
double pair_level(const SliceVars& slice, const RepulsionSpec& spec, std::size_t s,
                  std::size_t j) {
  if (spec.combiner == Combiner::Min) return slice.log_u_min;
  const std::size_t hi = std::max(s, j);
  const std::size_t lo = std::min(s, j);
  return slice.log_u_pairs[pair_index(hi, lo)];
}

double threshold_radius(const SliceVars& slice, const RepulsionSpec& spec, std::size_t s,
                        std::size_t j) {
  const double log_u = pair_level(slice, spec, s, j);
  if (log_u == kNegInf) return 0.0;
  return g_inverse_log(spec, log_u);
}

}  // namespace

SliceVars update_slice(const MixtureState& state, const RepulsionSpec& spec, Rng& rng) {
  const std::size_t k = state.k();
  SliceVars slice;
  if (spec.combiner == Combiner::Min) {
    const double log_h = log_h_combine(spec, state.components);
    if (log_h == kNegInf) throw SamplerError("repulsion factor is zero; state corrupted");
    slice.log_u_min = std::log(rng.uniform()) + log_h;
    return slice;
  }
  slice.log_u_pairs.resize(pair_count(k));
  for (std::size_t s = 1; s < k; ++s) {
    for (std::size_t j = 0; j < s; ++j) {
      const double log_g =
          log_g_repulsion(spec, distance(spec, state.components[s], state.components[j]));
      if (log_g == kNegInf) throw SamplerError("pairwise repulsion is zero; state corrupted");
      slice.log_u_pairs[pair_index(s, j)] = std::log(rng.uniform()) + log_g;
    }
  }
  return slice;
}

std::vector<double> allocation_probabilities(const MixtureState& state, const Dataset& data,
                                             std::size_t i) {
  const std::size_t k = state.k();
  const std::size_t m = data.m;
  std::vector<double> lp(k);
  double lp_max = kNegInf;
  for (std::size_t h = 0; h < k; ++h) {
    double v = state.weights[h] > 0.0 ? std::log(state.weights[h]) : kNegInf;
    for (std::size_t d = 0; d < m; ++d)
      v += log_normal_pdf(data.at(i, d), state.components[h].mean[d], state.components[h].var[d]);
    lp[h] = v;
    lp_max = std::max(lp_max, v);
  }
  double sum = 0.0;
  for (std::size_t h = 0; h < k; ++h) {
    lp[h] = std::exp(lp[h] - lp_max);
    sum += lp[h];
  }
  for (double& p : lp) p /= sum;
  return lp;
}

std::vector<int> update_allocations(const MixtureState& state, const Dataset& data, Rng& rng) {
  const std::size_t k = state.k();
  const std::size_t m = data.m;
  std::vector<int> z(data.n);

  // per-component constants of the log kernel
  std::vector<double> logw(k), lognorm(k), invvar(k * m);
  for (std::size_t h = 0; h < k; ++h) {
    logw[h] = state.weights[h] > 0.0 ? std::log(state.weights[h]) : kNegInf;
    double c = 0.0;
    for (std::size_t d = 0; d < m; ++d) {
      c += -0.5 * (kLog2Pi + std::log(state.components[h].var[d]));
      invvar[h * m + d] = 1.0 / state.components[h].var[d];
    }
    lognorm[h] = c;
  }

  std::vector<double> lp(k);
  for (std::size_t i = 0; i < data.n; ++i) {
    double lp_max = kNegInf;
    for (std::size_t h = 0; h < k; ++h) {
      double q = 0.0;
      for (std::size_t d = 0; d < m; ++d) {
        const double z0 = data.at(i, d) - state.components[h].mean[d];
        q += z0 * z0 * invvar[h * m + d];
      }
      lp[h] = logw[h] + lognorm[h] - 0.5 * q;
      lp_max = std::max(lp_max, lp[h]);
    }
    double sum = 0.0;
    for (std::size_t h = 0; h < k; ++h) {
      lp[h] = std::exp(lp[h] - lp_max);
      sum += lp[h];
    }
    const double pick = rng.uniform() * sum;
    double acc = 0.0;
    std::size_t h = k - 1;
    for (std::size_t c = 0; c < k; ++c) {
      acc += lp[c];
      if (pick < acc) {
        h = c;
        break;
      }
    }
    z[i] = static_cast<int>(h);
  }
  return z;
}

std::vector<double> update_weights(const MixtureState& state, const MixtureConfig& cfg, Rng& rng) {
  std::vector<double> conc = cfg.alpha;
  for (int zi : state.allocations) conc[static_cast<std::size_t>(zi)] += 1.0;
  return rng.dirichlet(conc);
}

AllowedSet allowed_set_location(const MixtureState& state, const RepulsionSpec& spec,
                                std::size_t j, std::size_t dim) {
  const std::size_t k = state.k();
  const std::size_t m = state.dim();
  const Component& cj = state.components[j];
  std::vector<Interval> excluded;

  for (std::size_t s = 0; s < k; ++s) {
    if (s == j) continue;
    const double r = threshold_radius(state.slice, spec, s, j);
    if (r <= 0.0) continue;
    const Component& cs = state.components[s];

    double w2;
    if (spec.rcase == RepulsionCase::LocationOnly) {
      // (mu_jd - mu_sd)^2 > r^2 - sum_{d' != dim} (mu_jd' - mu_sd')^2
      double rest = 0.0;
      for (std::size_t d = 0; d < m; ++d) {
        if (d == dim) continue;
        const double z = cj.mean[d] - cs.mean[d];
        rest += z * z;
      }
      w2 = r * r - rest;
    } else {
      // s_js(x) = K + A (x - mu_sd)^2 with A = 1/v_jd + 1/v_sd
      double K = -2.0 * static_cast<double>(m);
      for (std::size_t d = 0; d < m; ++d) {
        K += cj.var[d] / cs.var[d] + cs.var[d] / cj.var[d];
        if (d == dim) continue;
        const double z = cj.mean[d] - cs.mean[d];
        K += z * z * (1.0 / cj.var[d] + 1.0 / cs.var[d]);
      }
      const double A = 1.0 / cj.var[dim] + 1.0 / cs.var[dim];
      w2 = (r - K) / A;
    }
    if (w2 <= 0.0) continue;
    const double w = std::sqrt(w2);
    excluded.push_back({cs.mean[dim] - w, cs.mean[dim] + w});
  }
  if (excluded.empty()) return AllowedSet::whole();
  return AllowedSet::complement_of(std::move(excluded),
                                   -std::numeric_limits<double>::infinity(),
                                   std::numeric_limits<double>::infinity());
}

AllowedSet allowed_set_scale(const MixtureState& state, const RepulsionSpec& spec, std::size_t j,
                             std::size_t dim) {
  if (spec.rcase != RepulsionCase::FullKernel)
    throw InputError("scale truncation applies to the full-kernel case only");
  const std::size_t k = state.k();
  const std::size_t m = state.dim();
  const Component& cj = state.components[j];
  std::vector<Interval> excluded;

  for (std::size_t s = 0; s < k; ++s) {
    if (s == j) continue;
    const double r = threshold_radius(state.slice, spec, s, j);
    if (r <= 0.0) continue;
    const Component& cs = state.components[s];

    // s_js as a function of x = var_jd is a x + b/x + c
    const double mdiff = cj.mean[dim] - cs.mean[dim];
    const double a = 1.0 / cs.var[dim];
    const double b = cs.var[dim] + mdiff * mdiff;
    double c = -2.0 * static_cast<double>(m) + mdiff * mdiff / cs.var[dim];
    for (std::size_t d = 0; d < m; ++d) {
      if (d == dim) continue;
      c += cj.var[d] / cs.var[d] + cs.var[d] / cj.var[d];
      const double z = cj.mean[d] - cs.mean[d];
      c += z * z * (1.0 / cj.var[d] + 1.0 / cs.var[d]);
    }

    // a x^2 + (c - r) x + b <= 0 between the positive roots, if any
    if (r <= c) continue;
    const double disc = (c - r) * (c - r) - 4.0 * a * b;
    if (disc <= 0.0) continue;
    const double x_hi = ((r - c) + std::sqrt(disc)) / (2.0 * a);
    const double x_lo = b / (a * x_hi);
    excluded.push_back({x_lo, x_hi});
  }
  if (excluded.empty()) return AllowedSet::whole(0.0, std::numeric_limits<double>::infinity());
  return AllowedSet::complement_of(std::move(excluded), 0.0,
                                   std::numeric_limits<double>::infinity());
}

std::pair<double, double> conditional_base_location(const MixtureState& state, const Dataset& data,
                                                    const BasePrior& prior, std::size_t j,
                                                    std::size_t dim) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < data.n; ++i) {
    if (state.allocations[i] == static_cast<int>(j)) {
      sum += data.at(i, dim);
      ++count;
    }
  }
  if (count == 0) return {prior.m0[dim], prior.v0[dim]};
  const double prec = 1.0 / prior.v0[dim] + static_cast<double>(count) / state.components[j].var[dim];
  const double v = 1.0 / prec;
  const double mean = v * (prior.m0[dim] / prior.v0[dim] + sum / state.components[j].var[dim]);
  return {mean, v};
}

std::pair<double, double> conditional_base_scale(const MixtureState& state, const Dataset& data,
                                                 const BasePrior& prior, std::size_t j,
                                                 std::size_t dim) {
  double ss = 0.0;
  std::size_t count = 0;
  const double mu = state.components[j].mean[dim];
  for (std::size_t i = 0; i < data.n; ++i) {
    if (state.allocations[i] == static_cast<int>(j)) {
      const double z = data.at(i, dim) - mu;
      ss += z * z;
      ++count;
    }
  }
  if (count == 0) return {prior.a0, prior.b0[dim]};
  return {prior.a0 + 0.5 * static_cast<double>(count), prior.b0[dim] + 0.5 * ss};
}

namespace {

double sq_dist(const Dataset& data, std::size_t i, const std::vector<double>& center) {
  double ss = 0.0;
  for (std::size_t d = 0; d < data.m; ++d) {
    const double z = data.at(i, d) - center[d];
    ss += z * z;
  }
  return ss;
}

}  // namespace

MixtureState initialize_state(const Dataset& data, const MixtureConfig& cfg,
                              const BasePrior& prior, const RepulsionSpec& spec, bool repulsive,
                              Rng& rng) {
  const std::size_t k = cfg.k;
  const std::size_t m = cfg.m;
  MixtureState state;
  state.weights.assign(k, 1.0 / static_cast<double>(k));
  state.components.resize(k);
  if (spec.combiner == Combiner::Product)
    state.slice.log_u_pairs.assign(pair_count(k), -std::numeric_limits<double>::infinity());

  if (data.n == 0) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (std::size_t h = 0; h < k; ++h) state.components[h] = prior.draw(rng);
      if (!repulsive || log_h_combine(spec, state.components) > -std::numeric_limits<double>::infinity()) return state;
    }
    throw SamplerError("could not initialize inside the prior support");
  }

  // farthest-point centers on the data
  std::vector<std::vector<double>> centers;
  std::vector<double> nearest(data.n, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rng.uniform() * static_cast<double>(data.n));
  if (first >= data.n) first = data.n - 1;
  for (std::size_t c = 0; c < std::min(k, data.n); ++c) {
    std::size_t pick = first;
    if (c > 0) {
      double best = -1.0;
      for (std::size_t i = 0; i < data.n; ++i) {
        if (nearest[i] > best) {
          best = nearest[i];
          pick = i;
        }
      }
    }
    std::vector<double> center(m);
    for (std::size_t d = 0; d < m; ++d) center[d] = data.at(pick, d);
    for (std::size_t i = 0; i < data.n; ++i)
      nearest[i] = std::min(nearest[i], sq_dist(data, i, center));
    centers.push_back(std::move(center));
  }

  state.allocations.resize(data.n);
  for (std::size_t i = 0; i < data.n; ++i) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d2 = sq_dist(data, i, centers[c]);
      if (d2 < bd) {
        bd = d2;
        best = c;
      }
    }
    state.allocations[i] = static_cast<int>(best);
  }

  // cluster moments and per-dimension data spread for the jitter scale
  std::vector<double> data_sd(m, 0.0);
  for (std::size_t d = 0; d < m; ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) mean += data.at(i, d);
    mean /= static_cast<double>(data.n);
    double ss = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
      const double z = data.at(i, d) - mean;
      ss += z * z;
    }
    data_sd[d] = data.n > 1 ? std::sqrt(ss / static_cast<double>(data.n - 1)) : 1.0;
    if (data_sd[d] <= 0.0) data_sd[d] = 1.0;
  }

  std::vector<std::vector<double>> cl_mean(centers.size(), std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> cl_var(centers.size(), std::vector<double>(m, 0.0));
  std::vector<std::size_t> cl_n(centers.size(), 0);
  for (std::size_t i = 0; i < data.n; ++i) {
    const auto c = static_cast<std::size_t>(state.allocations[i]);
    ++cl_n[c];
    for (std::size_t d = 0; d < m; ++d) cl_mean[c][d] += data.at(i, d);
  }
  for (std::size_t c = 0; c < centers.size(); ++c)
    if (cl_n[c] > 0)
      for (std::size_t d = 0; d < m; ++d) cl_mean[c][d] /= static_cast<double>(cl_n[c]);
  for (std::size_t i = 0; i < data.n; ++i) {
    const auto c = static_cast<std::size_t>(state.allocations[i]);
    for (std::size_t d = 0; d < m; ++d) {
      const double z = data.at(i, d) - cl_mean[c][d];
      cl_var[c][d] += z * z;
    }
  }

  std::vector<Component> base(k);
  for (std::size_t h = 0; h < k; ++h) {
    if (h < centers.size() && cl_n[h] > 0) {
      base[h].mean = cl_mean[h];
      base[h].var.resize(m);
      for (std::size_t d = 0; d < m; ++d)
        base[h].var[d] = std::max(cl_var[h][d] / static_cast<double>(cl_n[h]), 1e-6);
    } else {
      base[h] = prior.draw(rng);
    }
  }

  std::vector<double> weights(k, 0.0);
  for (std::size_t h = 0; h < k && h < centers.size(); ++h)
    weights[h] = static_cast<double>(cl_n[h]) / static_cast<double>(data.n);
  state.weights = weights;

  for (int attempt = 0; attempt < 100; ++attempt) {
    for (std::size_t h = 0; h < k; ++h) {
      state.components[h] = base[h];
      for (std::size_t d = 0; d < m; ++d)
        state.components[h].mean[d] += 1e-3 * data_sd[d] * rng.normal();
    }
    if (!repulsive ||
        log_h_combine(spec, state.components) > -std::numeric_limits<double>::infinity())
      return state;
  }
  throw SamplerError("initialization could not reach h > 0 after 100 jitters");
}

namespace {

void check_slice_validity(const MixtureState& state, const RepulsionSpec& spec) {
  const std::size_t k = state.k();
  for (std::size_t s = 1; s < k; ++s) {
    for (std::size_t j = 0; j < s; ++j) {
      const double log_g =
          log_g_repulsion(spec, distance(spec, state.components[s], state.components[j]));
      const double log_u = spec.combiner == Combiner::Min
                               ? state.slice.log_u_min
                               : state.slice.log_u_pairs[pair_index(s, j)];
      if (log_g < log_u - 1e-9 * std::fabs(log_u))
        throw SamplerError("slice validity violated after sweep");
    }
  }
  double wsum = 0.0;
  for (double w : state.weights) wsum += w;
  if (std::fabs(wsum - 1.0) > 1e-12) throw SamplerError("weights left the simplex");
  for (const Component& c : state.components)
    for (double v : c.var)
      if (!(v > 0.0)) throw SamplerError("nonpositive variance in state");
}

}  // namespace

PosteriorDraws run_chain(const Dataset& data, const McmcConfig& mcmc, const MixtureConfig& cfg,
                         const BasePrior& prior, const RepulsionSpec& spec, Rng& rng) {
  if (mcmc.burn_in >= mcmc.iterations) throw InputError("burn_in must be below iterations");
  if (mcmc.thin < 1) throw InputError("thin must be at least 1");
  if (data.n > 0 && data.m != cfg.m) throw InputError("data dimension does not match config");
  if (prior.dim() != cfg.m) throw InputError("prior dimension does not match config");

  MixtureState state = initialize_state(data, cfg, prior, spec, mcmc.repulsive, rng);

  PosteriorDraws out;
  out.k = cfg.k;
  out.m = cfg.m;
  out.draws.reserve(static_cast<std::size_t>((mcmc.iterations - mcmc.burn_in) / mcmc.thin + 1));

  const bool truncate_scales = mcmc.repulsive && spec.rcase == RepulsionCase::FullKernel;

  for (int iter = 1; iter <= mcmc.iterations; ++iter) {
    if (mcmc.repulsive) state.slice = update_slice(state, spec, rng);
    if (data.n > 0) {
      state.allocations = update_allocations(state, data, rng);
    }
    state.weights = update_weights(state, cfg, rng);

    for (std::size_t j = 0; j < cfg.k; ++j) {
      for (std::size_t d = 0; d < cfg.m; ++d) {
        const auto [mu0, v0] = conditional_base_location(state, data, prior, j, d);
        double x;
        if (mcmc.repulsive) {
          const AllowedSet allowed = allowed_set_location(state, spec, j, d);
          x = allowed.covers_support() ? rng.normal(mu0, std::sqrt(v0))
                                       : sample_truncated_or_pin(NormalLaw(mu0, v0), allowed, rng);
        } else {
          x = rng.normal(mu0, std::sqrt(v0));
        }
        state.components[j].mean[d] = x;

        const auto [shape, scale] = conditional_base_scale(state, data, prior, j, d);
        double v;
        if (truncate_scales) {
          const AllowedSet allowed = allowed_set_scale(state, spec, j, d);
          v = allowed.covers_support() ? rng.inv_gamma(shape, scale)
                                       : sample_truncated_or_pin(InvGammaLaw(shape, scale), allowed, rng);
        } else {
          v = rng.inv_gamma(shape, scale);
        }
        state.components[j].var[d] = v;
      }
    }

    if (mcmc.check_invariants && mcmc.repulsive) check_slice_validity(state, spec);

    if (iter > mcmc.burn_in && (iter - mcmc.burn_in) % mcmc.thin == 0) {
      Draw draw;
      draw.iter = iter;
      draw.weights = state.weights;
      draw.components = state.components;
      draw.allocations = state.allocations;
      out.draws.push_back(std::move(draw));
    }
  }
  return out;
}

}  // namespace repmix
