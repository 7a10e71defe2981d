#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "repmix/model.hpp"
#include "repmix/special.hpp"
#include "support/testutil.hpp"

using namespace repmix;

namespace {

MixtureState make_state(std::vector<double> w, std::vector<std::vector<double>> means,
                        std::vector<std::vector<double>> vars) {
  MixtureState s;
  s.weights = std::move(w);
  for (std::size_t h = 0; h < means.size(); ++h)
    s.components.push_back({means[h], vars[h]});
  return s;
}

}  // namespace

TEST_CASE("mixture density closed-form points") {
  // standard normal mode
  const auto s1 = make_state({1.0}, {{0.0}}, {{1.0}});
  CHECK(eval_mixture_density(s1, {0.0}) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));

  // convex combination of identical kernels
  const auto s2 = make_state({0.5, 0.5}, {{0.0}, {0.0}}, {{1.0}, {1.0}});
  CHECK(eval_mixture_density(s2, {0.0}) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));

  // scale mixture 0.7 N(0, 0.2^2) + 0.3 N(0, 2^2) at zero; direct evaluation
  // 0.7/(0.2 sqrt(2 pi)) + 0.3/(2 sqrt(2 pi))
  const auto s3 = make_state({0.7, 0.3}, {{0.0}, {0.0}}, {{0.04}, {4.0}});
  const double expect = 0.7 / (0.2 * std::sqrt(2.0 * M_PI)) + 0.3 / (2.0 * std::sqrt(2.0 * M_PI));
  CHECK(expect == doctest::Approx(1.4561393234652294).epsilon(1e-12));
  CHECK(eval_mixture_density(s3, {0.0}) == doctest::Approx(expect).epsilon(1e-12));

  CHECK_THROWS_AS((void)eval_mixture_density(s3, {0.0, 1.0}), InputError);
}

TEST_CASE("mixture density integrates to one") {
  const auto s = make_state({0.7, 0.3}, {{-1.0}, {2.5}}, {{0.5}, {3.0}});
  const double total = testutil::simpson(
      [&](double x) { return eval_mixture_density(s, {x}); }, -1.0 - 10.0 * std::sqrt(3.0),
      2.5 + 10.0 * std::sqrt(3.0), 8193);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

  const auto s2 = make_state({0.4, 0.6}, {{0.0, 1.0}, {3.0, -2.0}},
                             {{1.0, 2.0}, {0.5, 1.5}});
  const double total2 = testutil::simpson2d(
      [&](double x, double y) { return eval_mixture_density(s2, {x, y}); }, -15.0, 18.0, -17.0,
      16.0, 501);
  CHECK(total2 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("density invariant under simultaneous permutation") {
  const auto s = make_state({0.2, 0.5, 0.3}, {{0.0}, {1.0}, {-2.0}}, {{1.0}, {0.3}, {2.0}});
  const auto sp = make_state({0.3, 0.2, 0.5}, {{-2.0}, {0.0}, {1.0}}, {{2.0}, {1.0}, {0.3}});
  for (double x : {-3.0, -0.5, 0.0, 0.7, 2.2})
    CHECK(eval_mixture_density(s, {x}) == doctest::Approx(eval_mixture_density(sp, {x})).epsilon(1e-14));
}

TEST_CASE("density is continuous in parameters") {
  auto s = make_state({0.6, 0.4}, {{0.0}, {2.0}}, {{1.0}, {0.5}});
  const double f0 = eval_mixture_density(s, {0.3});
  const double eps = 1e-6;
  s.components[0].mean[0] += eps;
  const double f1 = eval_mixture_density(s, {0.3});
  // gradient wrt mu is w * phi * (y - mu) / var
  const double grad = 0.6 * normal_pdf(0.3, 0.0, 1.0) * 0.3;
  CHECK(f1 - f0 == doctest::Approx(eps * grad).epsilon(1e-4));
}

TEST_CASE("validate_config reports violations") {
  Dataset data;
  data.n = 4;
  data.m = 1;
  data.values = {0.0, 1.0, -1.0, 0.5};
  BasePrior prior = BasePrior::empirical(data);

  MixtureConfig ok = MixtureConfig::overfitted(6, 1);
  CHECK(validate_config(ok, prior).empty());

  MixtureConfig bad_alpha = ok;
  bad_alpha.alpha.assign(6, 0.6);
  const auto v1 = validate_config(bad_alpha, prior);
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].level == Violation::Level::Warning);
  CHECK(v1[0].message.find("alpha exceeds m/2") != std::string::npos);

  BasePrior bad_prior = prior;
  bad_prior.a0 = 0.5;
  const auto v2 = validate_config(ok, bad_prior);
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].level == Violation::Level::Error);
  CHECK(v2[0].message.find("variance prior shape") != std::string::npos);
}

TEST_CASE("empirical prior moments") {
  Dataset data;
  data.n = 5;
  data.m = 2;
  data.values = {1.0, 10.0, 2.0, 20.0, 3.0, 30.0, 4.0, 40.0, 5.0, 50.0};
  const BasePrior prior = BasePrior::empirical(data);
  CHECK(prior.m0[0] == doctest::Approx(3.0));
  CHECK(prior.m0[1] == doctest::Approx(30.0));
  CHECK(prior.b0[0] == doctest::Approx(0.8));   // 0.05 x range^2, range 4
  CHECK(prior.v0[0] == doctest::Approx(7.5));   // 3x sample variance
  CHECK(prior.b0[1] == doctest::Approx(80.0));  // range 40 in the second dimension
  CHECK(prior.a0 == doctest::Approx(2.0));
}

TEST_CASE("dataset csv round trip") {
  const std::string path = std::filesystem::temp_directory_path() / "repmix_test_data.csv";
  Dataset data;
  data.n = 3;
  data.m = 2;
  data.values = {1.5, -2.25, 0.0, 3.125, 1e-7, 42.0};
  data.labels = {1, 2, 1};
  data.to_csv(path);
  const Dataset back = Dataset::from_csv(path);
  REQUIRE(back.n == 3);
  REQUIRE(back.m == 2);
  REQUIRE(back.labels == data.labels);
  for (std::size_t i = 0; i < data.values.size(); ++i) CHECK(back.values[i] == data.values[i]);
  std::filesystem::remove(path);
}

TEST_CASE("dataset csv error paths") {
  CHECK_THROWS_AS((void)Dataset::from_csv("/nonexistent/file.csv"), InputError);

  const std::string path = std::filesystem::temp_directory_path() / "repmix_bad.csv";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("x1,x2\n1.0,2.0\n3.0\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS((void)Dataset::from_csv(path), InputError);
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("x1\n1.0\nnot_a_number\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS((void)Dataset::from_csv(path), InputError);
  std::filesystem::remove(path);
}

TEST_CASE("headerless csv loads without labels") {
  const std::string path = std::filesystem::temp_directory_path() / "repmix_plain.csv";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("1.0,2.0\n3.0,4.0\n", f);
    std::fclose(f);
  }
  const Dataset d = Dataset::from_csv(path);
  CHECK(d.n == 2);
  CHECK(d.m == 2);
  CHECK(!d.has_labels());
  std::filesystem::remove(path);
}
