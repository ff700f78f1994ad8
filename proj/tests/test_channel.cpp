#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ecfb/channel.hpp"
#include "ecfb/errors.hpp"
#include "ecfb/numerics.hpp"
#include "oracles.hpp"

using namespace ecfb;

TEST_CASE("sinr_general") {
  CHECK(sinr_general(2.0, 0.0) == 2.0);
  CHECK(sinr_general(2.0, 14.0) == doctest::Approx(2.0 / 29.0).epsilon(1e-15));
  CHECK(sinr_general(1.0, 4.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(sinr_general(1.0, -0.1), DomainError);
  CHECK_THROWS_AS(sinr_general(0.0, 1.0), DomainError);
}

TEST_CASE("sinr_collision") {
  CHECK(sinr_collision(2.0, 1) == 2.0);
  CHECK(sinr_collision(2.0, 15) == doctest::Approx(0.06896551724137931).epsilon(1e-14));
  CHECK(sinr_collision(1.0, 5) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(sinr_collision(NetworkScenario{5, 1.0, 1000, 0.05}) == sinr_collision(1.0, 5));
  CHECK_THROWS_AS(sinr_collision(1.0, 0), DomainError);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> snr(0.01, 100.0);
  std::uniform_int_distribution<int> nodes(1, 500);
  for (int i = 0; i < 200; ++i) {
    const double rho = snr(rng);
    const int n = nodes(rng);
    CHECK(sinr_collision(rho, n) * (1.0 + rho * (n - 1)) == doctest::Approx(rho).epsilon(1e-15));
    CHECK(sinr_collision(rho, n + 1) < sinr_collision(rho, n));
  }
}

TEST_CASE("NetworkScenario validation names the field") {
  NetworkScenario s;
  s.n_nodes = 0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("n_nodes"), DomainError);
  s = {};
  s.snr = -1;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("snr"), DomainError);
  s = {};
  s.delay_exponent = 0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("delay_exponent"), DomainError);
  s = {};
  s.blocklength = 50;
  CHECK_NOTHROW(s.validate());
  CHECK(s.warnings().size() == 1);
  s.blocklength = 1000;
  CHECK(s.warnings().empty());
}

TEST_CASE("fb_rate examples") {
  CHECK(fb_rate(0.7, {1.3}, 500, 0.5) == doctest::Approx(std::log2(1.0 + 0.7 * 1.3)).epsilon(1e-15));
  CHECK(fb_rate(3.0, {0.0}, 1000, 0.01) == 0.0);
  // 1 - sqrt(0.75/1000) Q^{-1}(0.1) log2(e), evaluated in mpmath
  CHECK(fb_rate(1.0, {1.0}, 1000, 0.1) == doctest::Approx(0.94936611438801540).epsilon(1e-13));
  CHECK(fb_rate(1.0, {1.0}, 1000, 0.1) ==
        doctest::Approx(oracle::rate(1.0, 1.0, 1000, gaussian_q_inv(0.1))).epsilon(1e-13));

  CHECK_THROWS_AS(fb_rate(1.0, {1.0}, 1000, 0.0), DomainError);
  CHECK_THROWS_AS(fb_rate(1.0, {1.0}, 1000, 1.0), DomainError);
  CHECK_THROWS_AS(fb_rate(0.0, {1.0}, 1000, 0.1), DomainError);
  CHECK_THROWS_AS(fb_rate(1.0, {-1.0}, 1000, 0.1), DomainError);
}

TEST_CASE("fb_rate is not clamped for deep fades") {
  CHECK(fb_rate(0.2, {1e-4}, 1000, 1e-5) < 0.0);
}

TEST_CASE("fb_rate monotonicity properties") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double z = 1e-3 + 5.0 * unit(rng);
    const double eps = std::pow(10.0, -6.0 * unit(rng));
    const int T = 100 + static_cast<int>(4900 * unit(rng));
    const double s = 0.01 + 10.0 * unit(rng);
    CAPTURE(z);
    CAPTURE(eps);
    CAPTURE(T);
    CAPTURE(s);
    // increasing in SINR, by finite differences
    const double h = 1e-6 * s;
    CHECK(fb_rate(s + h, {z}, T, eps) > fb_rate(s, {z}, T, eps));
    // increasing in epsilon
    if (eps < 0.5) CHECK(fb_rate(s, {z}, T, eps * 1.5) > fb_rate(s, {z}, T, eps));
  }
}

TEST_CASE("fb_rate converges to the Shannon term as blocklength grows") {
  const double s = 0.8;
  const double z = 1.1;
  const double shannon = std::log2(1.0 + s * z);
  double previous_gap = INFINITY;
  for (int T : {1000, 10000, 100000, 1000000}) {
    const double gap = shannon - fb_rate(s, {z}, T, 0.01);
    CHECK(gap > 0.0);
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
  CHECK(previous_gap < 3e-3);
}
