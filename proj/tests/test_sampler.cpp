#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "repmix/sampler.hpp"
#include "repmix/special.hpp"
#include "support/testutil.hpp"

using namespace repmix;

namespace {

RepulsionSpec spec_of(RepulsionCase c, Combiner comb, double tau, int nu) {
  RepulsionSpec s;
  s.rcase = c;
  s.combiner = comb;
  s.tau = tau;
  s.nu = nu;
  return s;
}

MixtureState state_of(std::vector<double> w, std::vector<std::vector<double>> means,
                      std::vector<std::vector<double>> vars, std::vector<int> z = {}) {
  MixtureState s;
  s.weights = std::move(w);
  for (std::size_t h = 0; h < means.size(); ++h) s.components.push_back({means[h], vars[h]});
  s.allocations = std::move(z);
  return s;
}

Dataset data_of(std::vector<double> values, std::size_t m = 1) {
  Dataset d;
  d.m = m;
  d.n = values.size() / m;
  d.values = std::move(values);
  return d;
}

}  // namespace

TEST_CASE("slice draw is uniform below h") {
  // k = 1: empty pair set, h = 1, u ~ U(0, 1)
  auto s1 = state_of({1.0}, {{0.0}}, {{1.0}});
  const auto spec = spec_of(RepulsionCase::LocationOnly, Combiner::Min, 1.0, 1);
  Rng rng(3);
  std::vector<double> us(20000);
  for (auto& u : us) u = std::exp(update_slice(s1, spec, rng).log_u_min);
  CHECK(testutil::ks_one_sample_p(us, [](double x) {
          return std::clamp(x, 0.0, 1.0);
        }) > 0.001);

  // k = 2: single pair; min and product schemes draw below the same bound
  auto s2 = state_of({0.5, 0.5}, {{0.0}, {2.0}}, {{1.0}, {1.0}});
  const double log_bound = log_g_repulsion(spec, 2.0);
  Rng rng2(4);
  for (int i = 0; i < 2000; ++i) {
    const double log_umin = update_slice(s2, spec, rng2).log_u_min;
    CHECK(log_umin < log_bound);
  }
  const auto spec_prod = spec_of(RepulsionCase::LocationOnly, Combiner::Product, 1.0, 1);
  Rng rng3(5);
  for (int i = 0; i < 2000; ++i) {
    const SliceVars v = update_slice(s2, spec_prod, rng3);
    REQUIRE(v.log_u_pairs.size() == 1);
    CHECK(v.log_u_pairs[0] < log_bound);
  }
}

TEST_CASE("marginalizing the latent level recovers h") {
  const auto spec = spec_of(RepulsionCase::LocationOnly, Combiner::Min, 1.0, 1);
  const auto s = state_of({0.5, 0.5}, {{0.0}, {1.3}}, {{1.0}, {1.0}});
  const double h = h_combine(spec, s.components);
  Rng rng(6);
  const std::size_t N = 100000;
  std::size_t below = 0;
  for (std::size_t i = 0; i < N; ++i)
    if (rng.uniform() < h) ++below;
  const double se = std::sqrt(h * (1.0 - h) / static_cast<double>(N));
  CHECK(std::fabs(static_cast<double>(below) / N - h) < 3.0 * se);
}

TEST_CASE("slice update requires h > 0") {
  auto s = state_of({0.5, 0.5}, {{1.0}, {1.0}}, {{1.0}, {1.0}});
  const auto spec = spec_of(RepulsionCase::LocationOnly, Combiner::Min, 1.0, 1);
  Rng rng(7);
  CHECK_THROWS_AS((void)update_slice(s, spec, rng), SamplerError);
}

TEST_CASE("allocation probabilities match direct enumeration") {
  const auto s = state_of({0.5, 0.2, 0.3}, {{0.0}, {1.0}, {-0.5}}, {{1.0}, {0.25}, {4.0}});
  const Dataset d = data_of({0.4});
  const auto probs = allocation_probabilities(s, d, 0);
  // independent normalization of w_h phi(y; mu_h, var_h)
  const double q0 = 0.5 * normal_pdf(0.4, 0.0, 1.0);
  const double q1 = 0.2 * normal_pdf(0.4, 1.0, 0.25);
  const double q2 = 0.3 * normal_pdf(0.4, -0.5, 4.0);
  const double Z = q0 + q1 + q2;
  CHECK(std::fabs(probs[0] - q0 / Z) < 1e-12);
  CHECK(std::fabs(probs[1] - q1 / Z) < 1e-12);
  CHECK(std::fabs(probs[2] - q2 / Z) < 1e-12);
  double sum = 0.0;
  for (double p : probs) sum += p;
  CHECK(std::fabs(sum - 1.0) < 1e-12);
}

TEST_CASE("dominant likelihood takes essentially all mass") {
  const auto s = state_of({0.5, 0.5}, {{0.0}, {100.0}}, {{1.0}, {1.0}});
  const Dataset d = data_of({0.0});
  const auto probs = allocation_probabilities(s, d, 0);
  CHECK(probs[0] > 1.0 - 1e-12);
}

TEST_CASE("identical components split allocations evenly") {
  const auto s = state_of({0.5, 0.5}, {{0.0}, {0.0}}, {{1.0}, {1.0}});
  const Dataset d = data_of({0.7});
  const auto probs = allocation_probabilities(s, d, 0);
  CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-12));

  Rng rng(8);
  auto st = s;
  const std::size_t N = 40000;
  Dataset many = data_of(std::vector<double>(N, 0.7));
  st.allocations.assign(N, 0);
  const auto z = update_allocations(st, many, rng);
  std::size_t ones = 0;
  for (int zi : z) ones += static_cast<std::size_t>(zi);
  const double freq = static_cast<double>(ones) / static_cast<double>(N);
  CHECK(std::fabs(freq - 0.5) < 3.0 * 0.5 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("weight update matches Dirichlet moments") {
  MixtureConfig cfg = MixtureConfig::overfitted(3, 1);
  cfg.alpha = {0.5, 1.0, 1.5};
  auto s = state_of({0.3, 0.3, 0.4}, {{0.0}, {1.0}, {2.0}}, {{1.0}, {1.0}, {1.0}});
  s.allocations = {0, 0, 0, 1, 2, 2};  // counts 3, 1, 2
  Rng rng(9);
  const std::size_t N = 100000;
  std::vector<double> w0(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto w = update_weights(s, cfg, rng);
    double sum = 0.0;
    for (double x : w) sum += x;
    REQUIRE(std::fabs(sum - 1.0) <= 1e-12);
    w0[i] = w[0];
  }
  const double atot = 0.5 + 1.0 + 1.5 + 6.0;
  const double m = 3.5 / atot;
  const double var = m * (1.0 - m) / (atot + 1.0);
  CHECK(std::fabs(testutil::mean(w0) - m) < 3.0 * std::sqrt(var / static_cast<double>(N)));
}

TEST_CASE("weight update with no data reduces to the prior") {
  MixtureConfig cfg = MixtureConfig::overfitted(4, 1);
  auto s = state_of({0.25, 0.25, 0.25, 0.25}, {{0.0}, {1.0}, {2.0}, {3.0}},
                    {{1.0}, {1.0}, {1.0}, {1.0}});
  Rng rng(10);
  const std::size_t N = 50000;
  std::vector<double> w0(N);
  for (std::size_t i = 0; i < N; ++i) w0[i] = update_weights(s, cfg, rng)[0];
  const double m = 0.25;
  const double atot = 1.0;
  const double var = m * (1.0 - m) / (atot + 1.0);
  CHECK(std::fabs(testutil::mean(w0) - m) < 3.0 * std::sqrt(var / static_cast<double>(N)));
}

TEST_CASE("location allowed set: zero level leaves the whole line") {
  auto s = state_of({0.5, 0.5}, {{0.0}, {1.0}}, {{1.0}, {1.0}});
  s.slice.log_u_min = -std::numeric_limits<double>::infinity();
  const auto spec = spec_of(RepulsionCase::LocationOnly, Combiner::Min, 1.0, 1);
  const AllowedSet a = allowed_set_location(s, spec, 0, 0);
  CHECK(a.covers_support());
}

TEST_CASE("location allowed set: unit radius excludes a unit ball") {
  const auto spec = spec_of(RepulsionCase::LocationOnly, Combiner::Min, 1.0, 1);
  auto s = state_of({0.5, 0.5}, {{3.0}, {0.0}}, {{1.0}, {1.0}});
  s.slice.log_u_min = log_g_repulsion(spec, 1.0);  // threshold radius 1
  const AllowedSet a = allowed_set_location(s, spec, 0, 0);
  REQUIRE(a.intervals.size() == 2);
  CHECK(a.intervals[0].hi == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(a.intervals[1].lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.contains(3.0));  // current location stays allowed
}

TEST_CASE("location allowed set: cross-dimension reduction in two dimensions") {
  const auto spec = spec_of(RepulsionCase::LocationOnly, Combiner::Min, 1.0, 1);
  auto s = state_of({0.5, 0.5}, {{5.0, 0.6}, {0.0, 0.0}}, {{1.0, 1.0}, {1.0, 1.0}});
  s.slice.log_u_min = log_g_repulsion(spec, 1.0);  // radius 1, other-dim gap 0.6
  const AllowedSet a = allowed_set_location(s, spec, 0, 0);
  const double w = std::sqrt(1.0 - 0.36);
  REQUIRE(a.intervals.size() == 2);
  CHECK(a.intervals[0].hi == doctest::Approx(-w).epsilon(1e-12));
  CHECK(a.intervals[1].lo == doctest::Approx(w).epsilon(1e-12));

  // other-dimension gap beyond the radius leaves the line whole
  s.components[0].mean[1] = 2.0;
  CHECK(allowed_set_location(s, spec, 0, 0).covers_support());
}

TEST_CASE("full-kernel location exclusion matches an independent quadratic solver") {
  const auto spec = spec_of(RepulsionCase::FullKernel, Combiner::Min, 1.0, 2);
  auto s = state_of({0.5, 0.5}, {{0.3}, {-0.8}}, {{0.7}, {1.9}});
  const double r = 3.0;
  s.slice.log_u_min = log_g_repulsion(spec, r);

  // s_js(x) = vr + (x - mu_s)^2 A with vr the variance-ratio part
  const double vj = 0.7, vs = 1.9, mus = -0.8;
  const double vr = vj / vs + vs / vj - 2.0;
  const double A = 1.0 / vj + 1.0 / vs;
  // quadratic A x^2 - 2 A mus x + (A mus^2 + vr - r) = 0 via the oracle
  double r1, r2;
  REQUIRE(testutil::quadratic_roots(A, -2.0 * A * mus, A * mus * mus + vr - r, r1, r2));
  const AllowedSet a = allowed_set_location(s, spec, 0, 0);
  REQUIRE(a.intervals.size() == 2);
  CHECK(a.intervals[0].hi == doctest::Approx(r1).epsilon(1e-10));
  CHECK(a.intervals[1].lo == doctest::Approx(r2).epsilon(1e-10));
}

TEST_CASE("scale allowed set: inactive constraint keeps the positive axis") {
  const auto spec = spec_of(RepulsionCase::FullKernel, Combiner::Min, 1.0, 2);
  auto s = state_of({0.5, 0.5}, {{0.0}, {8.0}}, {{1.0}, {1.0}});
  s.slice.log_u_min = log_g_repulsion(spec, 0.5);
  // means far apart: the mean term alone keeps s_js above the threshold
  const AllowedSet a = allowed_set_scale(s, spec, 0, 0);
  CHECK(a.covers_support());
  CHECK(a.support_lo == 0.0);
}

TEST_CASE("scale exclusion endpoints match an independent bisection") {
  const auto spec = spec_of(RepulsionCase::FullKernel, Combiner::Min, 1.0, 2);
  auto s = state_of({0.5, 0.5}, {{0.4}, {0.1}}, {{1.3}, {0.9}});
  const double r = 6.0;
  s.slice.log_u_min = log_g_repulsion(spec, r);

  const double mdiff = 0.4 - 0.1;
  const double vs = 0.9;
  const double a_c = 1.0 / vs;
  const double b_c = vs + mdiff * mdiff;
  const double c_c = mdiff * mdiff / vs - 2.0;
  auto f = [&](double x) { return a_c * x + b_c / x + c_c - r; };
  const double xstar = std::sqrt(b_c / a_c);
  REQUIRE(f(xstar) < 0.0);  // constraint active at the minimum
  const double lo = testutil::bisect(f, 1e-12, xstar, 1e-12);
  const double hi = testutil::bisect(f, xstar, 1e6, 1e-10);

  const AllowedSet a = allowed_set_scale(s, spec, 0, 0);
  REQUIRE(a.intervals.size() == 2);
  CHECK(a.intervals[0].hi == doctest::Approx(lo).epsilon(1e-9));
  CHECK(a.intervals[1].lo == doctest::Approx(hi).epsilon(1e-9));
  // the extremes of the positive axis always stay allowed
  CHECK(a.contains(1e-9));
  CHECK(a.contains(1e9));
}

TEST_CASE("conjugate location conditional") {
  BasePrior prior = BasePrior::standard(1);
  auto s = state_of({1.0}, {{0.0}}, {{1.0}});

  // empty component falls back to the prior
  s.allocations = {};
  const Dataset empty = data_of({});
  const auto [m_empty, v_empty] = conditional_base_location(s, empty, prior, 0, 0);
  CHECK(m_empty == prior.m0[0]);
  CHECK(v_empty == prior.v0[0]);

  // one observation with unit prior and unit kernel variance: equal-precision average
  const Dataset one = data_of({2.0});
  s.allocations = {0};
  const auto [m1, v1] = conditional_base_location(s, one, prior, 0, 0);
  CHECK(m1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v1 == doctest::Approx(0.5).epsilon(1e-14));

  // flat prior limit: conditional mean approaches the allocated sample mean
  BasePrior flat = prior;
  flat.v0 = {1e12};
  const Dataset three = data_of({1.0, 2.0, 6.0});
  s.allocations = {0, 0, 0};
  const auto [m2, v2] = conditional_base_location(s, three, flat, 0, 0);
  CHECK(m2 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(v2 == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("conjugate scale conditional") {
  BasePrior prior = BasePrior::standard(1);
  auto s = state_of({1.0}, {{0.0}}, {{1.0}});

  s.allocations = {};
  const Dataset empty = data_of({});
  const auto [a_empty, b_empty] = conditional_base_scale(s, empty, prior, 0, 0);
  CHECK(a_empty == prior.a0);
  CHECK(b_empty == prior.b0[0]);

  // two residuals +-1 about the component mean
  const Dataset two = data_of({1.0, -1.0});
  s.allocations = {0, 0};
  const auto [a2, b2] = conditional_base_scale(s, two, prior, 0, 0);
  CHECK(a2 == doctest::Approx(prior.a0 + 1.0).epsilon(1e-14));
  CHECK(b2 == doctest::Approx(prior.b0[0] + 1.0).epsilon(1e-14));

  // large allocated samples: posterior mean of the variance approaches the
  // residual mean square
  const std::size_t N = 20000;
  Rng rng(77);
  std::vector<double> ys(N);
  for (auto& y : ys) y = rng.normal(0.0, 2.0);
  const Dataset big = data_of(std::move(ys));
  s.allocations.assign(N, 0);
  const auto [aN, bN] = conditional_base_scale(s, big, prior, 0, 0);
  double ss = 0.0;
  for (std::size_t i = 0; i < N; ++i) ss += big.at(i, 0) * big.at(i, 0);
  const double post_mean = bN / (aN - 1.0);
  CHECK(post_mean == doctest::Approx(ss / static_cast<double>(N)).epsilon(0.01));
}

TEST_CASE("run_chain is deterministic for a fixed seed") {
  Dataset data = data_of({-2.1, -1.9, -2.0, 2.0, 1.9, 2.1, 0.1, -0.1});
  const MixtureConfig cfg = MixtureConfig::overfitted(3, 1);
  const BasePrior prior = BasePrior::empirical(data);
  const auto spec = spec_of(RepulsionCase::LocationOnly, Combiner::Min, 1.0, 1);
  McmcConfig mcmc;
  mcmc.iterations = 300;
  mcmc.burn_in = 100;
  mcmc.thin = 2;
  mcmc.check_invariants = true;

  Rng r1(123), r2(123);
  const PosteriorDraws a = run_chain(data, mcmc, cfg, prior, spec, r1);
  const PosteriorDraws b = run_chain(data, mcmc, cfg, prior, spec, r2);
  REQUIRE(a.draws.size() == b.draws.size());
  REQUIRE(a.draws.size() == 100);
  for (std::size_t t = 0; t < a.draws.size(); ++t) {
    CHECK(a.draws[t].iter == b.draws[t].iter);
    for (std::size_t h = 0; h < cfg.k; ++h) {
      CHECK(a.draws[t].weights[h] == b.draws[t].weights[h]);
      CHECK(a.draws[t].components[h].mean[0] == b.draws[t].components[h].mean[0]);
      CHECK(a.draws[t].components[h].var[0] == b.draws[t].components[h].var[0]);
    }
    CHECK(a.draws[t].allocations == b.draws[t].allocations);
  }
}

TEST_CASE("retained draws keep the simplex and positive variances") {
  Dataset data = data_of({-3.0, -2.8, 0.0, 0.2, 3.1, 2.9, -3.1, 0.1});
  const MixtureConfig cfg = MixtureConfig::overfitted(4, 1);
  const BasePrior prior = BasePrior::empirical(data);
  for (auto comb : {Combiner::Min, Combiner::Product}) {
    for (auto rcase : {RepulsionCase::LocationOnly, RepulsionCase::FullKernel}) {
      const auto spec = spec_of(rcase, comb, 0.5, rcase == RepulsionCase::FullKernel ? 2 : 1);
      McmcConfig mcmc;
      mcmc.iterations = 400;
      mcmc.burn_in = 200;
      mcmc.thin = 2;
      mcmc.check_invariants = true;
      Rng rng(31);
      const PosteriorDraws out = run_chain(data, mcmc, cfg, prior, spec, rng);
      REQUIRE(out.draws.size() == 100);
      for (const Draw& d : out.draws) {
        double sum = 0.0;
        for (double w : d.weights) {
          CHECK(w >= 0.0);
          sum += w;
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-12);
        for (const Component& c : d.components)
          for (double v : c.var) CHECK(v > 0.0);
      }
    }
  }
}

TEST_CASE("two well-separated clusters are recovered") {
  Rng gen(2025);
  std::vector<double> values;
  for (int i = 0; i < 200; ++i) values.push_back(gen.normal(-10.0, 1.0));
  for (int i = 0; i < 200; ++i) values.push_back(gen.normal(10.0, 1.0));
  Dataset data = data_of(std::move(values));
  const MixtureConfig cfg = MixtureConfig::overfitted(2, 1);
  const BasePrior prior = BasePrior::empirical(data);
  const auto spec = spec_of(RepulsionCase::LocationOnly, Combiner::Min, 1.0, 1);
  McmcConfig mcmc;
  mcmc.iterations = 2000;
  mcmc.burn_in = 1000;
  mcmc.thin = 5;
  Rng rng(99);
  const PosteriorDraws out = run_chain(data, mcmc, cfg, prior, spec, rng);
  std::vector<double> lo, hi;
  for (const Draw& d : out.draws) {
    const double m0 = d.components[0].mean[0];
    const double m1 = d.components[1].mean[0];
    lo.push_back(std::min(m0, m1));
    hi.push_back(std::max(m0, m1));
  }
  CHECK(std::fabs(testutil::mean(lo) + 10.0) < 0.2);
  CHECK(std::fabs(testutil::mean(hi) - 10.0) < 0.2);
}
