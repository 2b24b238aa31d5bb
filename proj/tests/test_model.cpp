#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "catldp/model.hpp"
#include "catldp/rng.hpp"
#include "support/test_util.hpp"

using namespace catldp;

TEST_CASE("jump pmf moments against hand-computed values") {
  JumpPmf pmf{{0.5, 0.0, 0.5}};
  CHECK(pmf.max_jump() == 2);
  CHECK(pmf.mean() == doctest::Approx(1.0).epsilon(1e-15));
  // 0.5 + 0.5*e^2
  CHECK(mgf_gamma(pmf, 1.0) == doctest::Approx(4.194528049465325).epsilon(1e-15));
  CHECK(pmf.mgf(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pmf.mgf_prime(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // mgf'' at 0 is E r^2 = 2
  CHECK(pmf.mgf_second(0.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("mgf derivatives match finite differences") {
  CounterRng rng(11, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const JumpPmf pmf = testutil::random_jump_pmf(rng);
    const double y = 3.0 * (2.0 * rng.next_u01() - 1.0);
    const double h = 1e-6;
    const double d1 = (pmf.mgf(y + h) - pmf.mgf(y - h)) / (2.0 * h);
    const double d2 = (pmf.mgf_prime(y + h) - pmf.mgf_prime(y - h)) / (2.0 * h);
    CHECK(pmf.mgf_prime(y) == doctest::Approx(d1).epsilon(1e-6));
    CHECK(pmf.mgf_second(y) == doctest::Approx(d2).epsilon(1e-6));
  }
}

TEST_CASE("uniform kernel mass and normalization") {
  const auto k = CatastropheKernel::uniform();
  CHECK(q_mass(k, 1, 7) == doctest::Approx(1.0 / 7).epsilon(1e-15));
  CHECK(q_mass(k, 7, 7) == doctest::Approx(1.0 / 7).epsilon(1e-15));
  for (std::int64_t x : {1, 2, 13, 97}) {
    double sum = 0.0;
    for (std::int64_t d = 1; d <= x; ++d) sum += q_mass(k, d, x);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("tilted kernel mass at a=1, x=2 is {3/7, 4/7}") {
  const auto k = CatastropheKernel::tilted(1.0);
  CHECK(q_mass(k, 1, 2) == doctest::Approx(3.0 / 7).epsilon(1e-15));
  CHECK(q_mass(k, 2, 2) == doctest::Approx(4.0 / 7).epsilon(1e-15));
}

TEST_CASE("tilted kernel with zero tilt reduces to uniform") {
  const auto k = CatastropheKernel::tilted(0.0);
  for (std::int64_t d = 1; d <= 9; ++d)
    CHECK(q_mass(k, d, 9) == doctest::Approx(1.0 / 9).epsilon(1e-14));
}

TEST_CASE("q_mass rejects out-of-range sizes") {
  const auto k = CatastropheKernel::uniform();
  CHECK_THROWS_AS(q_mass(k, 0, 5), std::domain_error);
  CHECK_THROWS_AS(q_mass(k, 6, 5), std::domain_error);
  CHECK_THROWS_AS(q_mass(k, 1, 0), std::domain_error);
}

TEST_CASE("declared sandwich constant covers the tilted kernel empirically") {
  CounterRng rng(12, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const double a = -0.9 + 4.9 * rng.next_u01();
    const auto k = CatastropheKernel::tilted(a);
    double tightest = 1.0;
    for (std::int64_t x = 1; x <= 400; ++x) {
      for (std::int64_t d = 1; d <= x; ++d) {
        const double scaled = static_cast<double>(x) * q_mass(k, d, x);
        tightest = std::max({tightest, scaled, 1.0 / scaled});
      }
    }
    CAPTURE(a);
    CHECK(tightest <= k.delta_bound);
    // and the kernel passes its own validation
    CHECK(check_almost_uniform(
              [&k](std::int64_t d, std::int64_t x) { return q_mass(k, d, x); },
              k.delta_bound, 400)
              .pass);
  }
}

TEST_CASE("strongly negative tilt really needs a constant above 2.9") {
  // the regime where a naive bound breaks: mass at d=x shrinks to 1+a
  const auto k = CatastropheKernel::tilted(-0.9);
  double tightest = 1.0;
  for (std::int64_t x = 1; x <= 400; ++x)
    for (std::int64_t d = 1; d <= x; ++d) {
      const double scaled = static_cast<double>(x) * q_mass(k, d, x);
      tightest = std::max({tightest, scaled, 1.0 / scaled});
    }
  CHECK(tightest > 2.9);
  CHECK(tightest <= k.delta_bound);  // declared bound is 1/0.1 + 1 = 11
  CHECK(k.delta_bound == doctest::Approx(11.0).epsilon(1e-12));
}

TEST_CASE("kernel constructors reject bad parameters") {
  CHECK_THROWS_AS(CatastropheKernel::tilted(-1.0), std::domain_error);
  CHECK_THROWS_AS(CatastropheKernel::tilted(-1.5), std::domain_error);
  CHECK_THROWS_AS(CatastropheKernel::uniform(1.0), std::domain_error);
}

TEST_CASE("validate passes the default model") {
  ModelParams p;
  const auto report = validate(p);
  CAPTURE(report.summary());
  CHECK(report.pass());
  CHECK(report.first_failure() == nullptr);
}

TEST_CASE("validate names the violated positivity condition") {
  ModelParams p;
  p.mu_down = -1.0;
  const auto report = validate(p);
  CHECK_FALSE(report.pass());
  REQUIRE(report.first_failure() != nullptr);
  CHECK(report.first_failure()->condition == "rate_positivity");
  CHECK(report.summary().find("mu > 0") != std::string::npos);
}

TEST_CASE("validate flags a non-normalized pmf") {
  ModelParams p;
  p.jump_pmf.probs = {0.5, 0.4};
  const auto report = validate(p);
  CHECK_FALSE(report.pass());
  CHECK(report.summary().find("jump_pmf_normalization") != std::string::npos);
}

TEST_CASE("validate flags a pmf with no positive jump") {
  ModelParams p;
  p.jump_pmf.probs = {1.0};
  const auto report = validate(p);
  CHECK_FALSE(report.pass());
  CHECK(report.summary().find("positive_jump_mass") != std::string::npos);
}

TEST_CASE("a point-mass catastrophe kernel fails the sandwich as soon as x > delta") {
  const auto point_mass = [](std::int64_t d, std::int64_t) {
    return d == 1 ? 1.0 : 0.0;
  };
  const auto check = check_almost_uniform(point_mass, 3.0, 10);
  CHECK_FALSE(check.pass);
  CHECK_FALSE(check.witness.empty());
}

TEST_CASE("derived rate helpers") {
  ModelParams p;
  p.alpha = 2.0;
  p.lambda_up = 1.0;
  p.mu_down = 3.0;
  p.jump_pmf = JumpPmf{{0.0, 0.5, 0.5}};
  CHECK(p.growth_rate() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.catastrophe_rate() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(p.mean_slope() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(p.up_prob() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("random generated params always validate") {
  CounterRng rng(13, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const ModelParams p = testutil::random_params(rng);
    const auto report = validate(p, 128);
    CAPTURE(rep);
    CAPTURE(report.summary());
    CHECK(report.pass());
  }
}
