#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "repmix/rng.hpp"
#include "repmix/special.hpp"
#include "repmix/truncated.hpp"
#include "support/testutil.hpp"

using namespace repmix;

TEST_CASE("interval complement construction") {
  const auto ninf = -std::numeric_limits<double>::infinity();
  const auto pinf = std::numeric_limits<double>::infinity();

  auto a = AllowedSet::complement_of({{-1.0, 1.0}}, ninf, pinf);
  REQUIRE(a.intervals.size() == 2);
  CHECK(a.intervals[0].lo == ninf);
  CHECK(a.intervals[0].hi == -1.0);
  CHECK(a.intervals[1].lo == 1.0);
  CHECK(a.intervals[1].hi == pinf);
  CHECK(a.contains(2.0));
  CHECK(!a.contains(0.0));
  CHECK(!a.covers_support());

  // overlapping exclusions merge
  auto b = AllowedSet::complement_of({{0.0, 2.0}, {1.0, 3.0}, {5.0, 6.0}}, ninf, pinf);
  REQUIRE(b.intervals.size() == 3);
  CHECK(b.intervals[1].lo == 3.0);
  CHECK(b.intervals[1].hi == 5.0);

  // empty exclusion leaves the support whole
  auto c = AllowedSet::complement_of({}, 0.0, pinf);
  CHECK(c.covers_support());

  // exclusions outside the support are clipped away
  auto d = AllowedSet::complement_of({{-5.0, -2.0}}, 0.0, pinf);
  CHECK(d.covers_support());
}

TEST_CASE("whole-line truncated normal matches direct draws") {
  Rng rng(101);
  const NormalLaw law(0.7, 2.25);
  const AllowedSet whole = AllowedSet::whole();
  const std::size_t N = 100000;
  std::vector<double> inv(N), direct(N);
  for (std::size_t i = 0; i < N; ++i) inv[i] = sample_truncated(law, whole, rng);
  Rng rng2(999);
  for (std::size_t i = 0; i < N; ++i) direct[i] = rng2.normal(0.7, 1.5);
  CHECK(testutil::ks_two_sample_p(inv, direct) > 0.001);
}

TEST_CASE("half-line truncation reproduces the half-normal mean") {
  Rng rng(7);
  const NormalLaw law(0.0, 1.0);
  const AllowedSet pos = AllowedSet::complement_of(
      {{-std::numeric_limits<double>::infinity(), 0.0}}, -std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity());
  const std::size_t N = 100000;
  std::vector<double> xs(N);
  for (std::size_t i = 0; i < N; ++i) {
    xs[i] = sample_truncated(law, pos, rng);
    REQUIRE(xs[i] > 0.0);
  }
  const double target = std::sqrt(2.0 / M_PI);
  CHECK(target == doctest::Approx(0.7978845608028654).epsilon(1e-12));
  const double se = std::sqrt((1.0 - target * target) / static_cast<double>(N));
  CHECK(std::fabs(testutil::mean(xs) - target) < 3.0 * se);

  // and the full distribution against a rejection oracle
  Rng rng3(55);
  std::vector<double> rej;
  rej.reserve(N);
  while (rej.size() < N) {
    const double z = rng3.normal();
    if (z > 0.0) rej.push_back(z);
  }
  CHECK(testutil::ks_two_sample_p(xs, rej) > 0.001);
}

TEST_CASE("sliver confinement") {
  Rng rng(13);
  const NormalLaw law(0.0, 1.0);
  const double a = 0.25, eps = 1e-6;
  AllowedSet sliver;
  sliver.intervals = {{a, a + eps}};
  for (int i = 0; i < 200; ++i) {
    const double x = sample_truncated(law, sliver, rng);
    CHECK(x >= a);
    CHECK(x <= a + eps);
  }
}

TEST_CASE("two-interval masses are respected") {
  Rng rng(29);
  const NormalLaw law(0.0, 1.0);
  AllowedSet two;
  two.intervals = {{-1.0, 0.0}, {1.0, 2.0}};
  const double m1 = normal_cdf(0.0, 0.0, 1.0) - normal_cdf(-1.0, 0.0, 1.0);
  const double m2 = normal_cdf(2.0, 0.0, 1.0) - normal_cdf(1.0, 0.0, 1.0);
  const double p_first = m1 / (m1 + m2);
  const std::size_t N = 50000;
  std::size_t in_first = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double x = sample_truncated(law, two, rng);
    REQUIRE(two.contains(x));
    if (x < 0.5) ++in_first;
  }
  const double freq = static_cast<double>(in_first) / static_cast<double>(N);
  const double se = std::sqrt(p_first * (1.0 - p_first) / static_cast<double>(N));
  CHECK(std::fabs(freq - p_first) < 3.5 * se);
}

TEST_CASE("whole-support truncated inverse gamma matches direct draws") {
  Rng rng(41);
  const InvGammaLaw law(3.0, 2.0);
  const AllowedSet whole = AllowedSet::whole(0.0, std::numeric_limits<double>::infinity());
  const std::size_t N = 60000;
  std::vector<double> inv(N), direct(N);
  for (std::size_t i = 0; i < N; ++i) inv[i] = sample_truncated(law, whole, rng);
  Rng rng2(42);
  for (std::size_t i = 0; i < N; ++i) direct[i] = rng2.inv_gamma(3.0, 2.0);
  CHECK(testutil::ks_two_sample_p(inv, direct) > 0.001);
}

TEST_CASE("truncated inverse gamma matches a rejection oracle") {
  Rng rng(43);
  const InvGammaLaw law(2.5, 1.5);
  // keep only the region above the untruncated median-ish point
  AllowedSet upper;
  upper.support_lo = 0.0;
  upper.intervals = {{0.9, std::numeric_limits<double>::infinity()}};
  const std::size_t N = 40000;
  std::vector<double> xs(N);
  for (std::size_t i = 0; i < N; ++i) {
    xs[i] = sample_truncated(law, upper, rng);
    REQUIRE(xs[i] >= 0.9);
  }
  Rng rng2(44);
  std::vector<double> rej;
  rej.reserve(N);
  while (rej.size() < N) {
    const double x = rng2.inv_gamma(2.5, 1.5);
    if (x > 0.9) rej.push_back(x);
  }
  CHECK(testutil::ks_two_sample_p(xs, rej) > 0.001);
}

TEST_CASE("numerically empty slice region raises") {
  Rng rng(5);
  const NormalLaw law(0.0, 1.0);
  AllowedSet far;
  far.intervals = {{60.0, 61.0}};
  CHECK_THROWS_AS((void)sample_truncated(law, far, rng), SamplerError);
}
