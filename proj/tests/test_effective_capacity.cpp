#include <doctest.h>

#include <cmath>
#include <vector>

#include "ecfb/channel.hpp"
#include "ecfb/effective_capacity.hpp"
#include "ecfb/errors.hpp"
#include "oracles.hpp"

using namespace ecfb;

namespace {

double relative_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("EcMethod parsing") {
  CHECK(EcMethod::parse("direct") == EcMethod::direct());
  CHECK(EcMethod::parse("series:4") == EcMethod::series(4));
  CHECK(EcMethod::parse("series") == EcMethod::series(2));
  CHECK(EcMethod::parse("mc").kind == EcMethod::Kind::monte_carlo);
  CHECK(EcMethod::series(3).label() == "series:3");
  CHECK_THROWS_AS(EcMethod::parse("series:x"), DomainError);
  CHECK_THROWS_AS(EcMethod::parse("series:-1"), DomainError);
  CHECK_THROWS_AS(EcMethod::parse("simpson"), DomainError);
}

TEST_CASE("ec_direct boundary and domain") {
  const auto one = ec_direct(0.4, 0.02, 1.0, 800);
  CHECK(one.ec == 0.0);
  CHECK(one.inner_expectation == 1.0);
  CHECK(ec_series(0.4, 0.02, 1.0, 800, 3).ec == 0.0);
  CHECK_THROWS_AS(ec_direct(0.4, 0.02, 0.0, 800), DomainError);
  CHECK_THROWS_AS(ec_direct(0.4, 0.02, 1.5, 800), DomainError);
  CHECK_THROWS_AS(ec_direct(0.4, -0.02, 0.1, 800), DomainError);
  CHECK_THROWS_AS(ec_direct(0.0, 0.02, 0.1, 800), DomainError);
  CHECK_THROWS_AS(ec_series(0.4, 0.02, 0.1, 800, -1), DomainError);
}

TEST_CASE("ec_direct against the trapezoid oracle") {
  // Frozen from an mpmath evaluation of the defining integral.
  const auto e = ec_direct(2.0, 0.01, 0.02, 1000);
  CHECK(e.inner_expectation == doctest::Approx(0.067781587712876492).epsilon(1e-9));
  CHECK(e.ec == doctest::Approx(0.26914646885736495).epsilon(1e-9));
  CHECK(e.error_estimate < 1e-10);

  const double trapezoid = oracle::inner_expectation(2.0, 0.01, 0.02, 1000, gaussian_q_inv(0.02));
  CHECK(e.inner_expectation == doctest::Approx(trapezoid).epsilon(1e-7));

  const auto strict = ec_direct(0.2, 0.05, 0.05, 1000);
  CHECK(strict.inner_expectation == doctest::Approx(0.16055108733219925).epsilon(1e-9));
  CHECK(strict.ec == doctest::Approx(0.036582861718478559).epsilon(1e-9));
}

TEST_CASE("ec_direct small-theta limit approaches the mean rate") {
  // (1-eps) E[r] from mpmath quadrature
  const double mean_rate = 0.76430644922167115;
  const auto e = ec_direct(1.0, 1e-6, 0.05, 1000);
  CHECK(relative_gap(e.ec, mean_rate) < 1e-3);
  CHECK(e.ec == doctest::Approx(0.76412437386870676).epsilon(1e-8));
}

TEST_CASE("series terms") {
  const auto terms = series_terms(0.4, 0.01, 0.05, 1000, 3);
  CHECK(terms.d < 0.0);
  CHECK(terms.terms.size() == 4);
  CHECK(terms.j_value > 0.0);
  CHECK(terms.x_of_z(0.0) == 0.0);
  for (double z : {1e-6, 0.1, 1.0, 100.0, 1e6}) {
    CHECK(terms.x_of_z(z) >= 0.0);
    CHECK(terms.x_of_z(z) < 1.0);
  }
  // m = 0 term against the trapezoid oracle
  const double m0 = oracle::trapezoid_exp_weighted(
      [&](double z) { return std::pow(1.0 + 0.4 * z, terms.d); });
  CHECK(terms.terms[0] == doctest::Approx(m0).epsilon(1e-8));
}

TEST_CASE("ec_series at epsilon = 0.5 is independent of the order") {
  const double ec0 = ec_series(0.3, 0.02, 0.5, 1000, 0).ec;
  for (int m : {1, 2, 5}) CHECK(ec_series(0.3, 0.02, 0.5, 1000, m).ec == ec0);
}

TEST_CASE("series converges toward direct quadrature") {
  const double sinr = sinr_collision(2.0, 5);
  const auto opt = optimal_epsilon(sinr, 0.01, 1000);
  const double direct = opt.ec_max;
  double previous = INFINITY;
  for (int m : {0, 1, 2, 4, 8}) {
    const double gap = relative_gap(ec_series(sinr, 0.01, opt.epsilon_star, 1000, m).ec, direct);
    CAPTURE(m);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(relative_gap(ec_series(sinr, 0.01, opt.epsilon_star, 1000, 2).ec, direct) <= 5e-3);
  CHECK(previous < 1e-6);
}

TEST_CASE("optimal_epsilon: interior maximum") {
  const double sinr = sinr_collision(2.0, 5);
  const auto opt = optimal_epsilon(sinr, 0.01, 1000, EcMethod::series(2));
  CHECK_FALSE(opt.degenerate);
  CHECK(opt.epsilon_star > 0.01);
  CHECK(opt.epsilon_star < 0.5);
  CHECK(opt.ec_max >= ec_series(sinr, 0.01, opt.epsilon_star + 0.01, 1000, 2).ec);
  CHECK(opt.ec_max >= ec_series(sinr, 0.01, opt.epsilon_star - 0.01, 1000, 2).ec);
  CHECK_THROWS_AS(optimal_epsilon(sinr, 0.01, 1000, EcMethod::monte_carlo(1000, 1)), DomainError);
}

TEST_CASE("optimal_epsilon grows with node count") {
  double previous_eps = 0.0;
  double previous_ec = INFINITY;
  for (int n : {1, 5, 10}) {
    const auto opt = optimal_epsilon(sinr_collision(2.0, n), 0.01, 1000, EcMethod::series(2));
    CHECK(opt.epsilon_star > previous_eps);
    CHECK(opt.ec_max < previous_ec);
    previous_eps = opt.epsilon_star;
    previous_ec = opt.ec_max;
  }
}

TEST_CASE("optimal_epsilon agrees across methods") {
  const double sinr = sinr_collision(1.0, 5);
  const auto direct = optimal_epsilon(sinr, 0.05, 1000, EcMethod::direct());
  const auto series2 = optimal_epsilon(sinr, 0.05, 1000, EcMethod::series(2));
  const auto series4 = optimal_epsilon(sinr, 0.05, 1000, EcMethod::series(4));
  // Optima from an independent scipy bounded search: 0.024232 (direct),
  // 0.018152 (three terms), 0.023722 (five terms). The EC curve is flat at the
  // top, so the three-term truncation moves the argmax by about 0.006.
  CHECK(direct.epsilon_star == doctest::Approx(0.024232).epsilon(2e-3));
  CHECK(series2.epsilon_star == doctest::Approx(0.018152).epsilon(2e-3));
  CHECK(std::abs(direct.epsilon_star - series4.epsilon_star) <= 1e-3);
  CHECK(direct.ec_max == doctest::Approx(0.037568285307716).epsilon(1e-7));
}

TEST_CASE("EC is unimodal in epsilon") {
  for (double rho : {0.5, 2.0}) {
    for (int n : {1, 10}) {
      for (double theta : {0.001, 0.1}) {
        const double sinr = sinr_collision(rho, n);
        std::vector<double> curve;
        for (int i = 0; i < 50; ++i) {
          const double eps = 0.001 * std::pow(500.0, i / 49.0);
          curve.push_back(ec_direct(sinr, theta, eps, 1000).ec);
        }
        int direction_changes = 0;
        for (std::size_t i = 2; i < curve.size(); ++i) {
          const bool rising_before = curve[i - 1] > curve[i - 2];
          const bool rising_now = curve[i] > curve[i - 1];
          if (rising_before != rising_now) ++direction_changes;
        }
        CAPTURE(rho);
        CAPTURE(n);
        CAPTURE(theta);
        CHECK(direction_changes <= 1);
        CHECK(curve.back() <= *std::max_element(curve.begin(), curve.end()));
      }
    }
  }
}

TEST_CASE("EC decreases in theta and in node count") {
  double previous = INFINITY;
  for (double theta : {0.001, 0.003, 0.01, 0.03, 0.1, 0.3}) {
    const double ec = ec_direct(0.5, theta, 0.01, 1000).ec;
    CHECK(ec < previous);
    previous = ec;
  }
  previous = INFINITY;
  for (int n : {1, 2, 5, 10, 20}) {
    const double ec = optimal_epsilon(sinr_collision(1.0, n), 0.01, 1000).ec_max;
    CHECK(ec < previous);
    previous = ec;
  }
}

TEST_CASE("quadrature cross-check diagnostics") {
  // Lax regime: the fixed 80-node rule is close despite the sqrt(z) kink of
  // the dispersion term at z = 0.
  const double lax = ec_direct(1.0, 0.001, 0.01, 500).laguerre_discrepancy;
  CHECK(lax < 1e-4);
  // Strict regime: the boundary layer near z = 0 defeats the fixed rule.
  const double strict = ec_direct(2.0, 0.1, 0.01, 2000).laguerre_discrepancy;
  CHECK(strict > 10.0 * lax);
}

TEST_CASE("delay outage mapping") {
  CHECK(max_delay(1.0, 0.01, 1e-3) == doctest::Approx(690.7755279).epsilon(1e-9));
  CHECK(max_delay(1.0, 0.3, 1e-3) == doctest::Approx(23.02585093).epsilon(1e-9));
  CHECK(delay_outage(1.0, 0.01, 691.0) == doctest::Approx(1e-3).epsilon(1e-3));
  CHECK(delay_outage(0.7, 0.2, 0.0) == 1.0);
  CHECK(max_delay(2.0, 0.05, 1e-4) == doctest::Approx(max_delay(1.0, 0.05, 1e-4) / 2.0).epsilon(1e-15));
  for (double p : {1e-9, 1e-3, 0.2, 0.9}) {
    CHECK(delay_outage(0.37, 0.04, max_delay(0.37, 0.04, p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS_AS(max_delay(1.0, 0.01, 0.0), DomainError);
  CHECK_THROWS_AS(max_delay(1.0, 0.01, 1.0), DomainError);
  CHECK_THROWS_AS(max_delay(0.0, 0.01, 0.1), DomainError);
  CHECK_THROWS_AS(delay_outage(1.0, 0.0, 3.0), DomainError);
}
