#include <doctest.h>

#include <cmath>
#include <random>

#include "ecfb/compensation.hpp"
#include "ecfb/errors.hpp"

using namespace ecfb;

TEST_CASE("power_control_snr") {
  CHECK(power_control_snr(2.0, 1) == 2.0);
  CHECK(power_control_snr(1.0, 5) == 5.0);
  CHECK(power_control_snr(2.0, 15) == 58.0);
}

TEST_CASE("power control restores the collision-free SINR exactly") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> snr(0.05, 20.0);
  std::uniform_int_distribution<int> nodes(1, 200);
  for (int i = 0; i < 100; ++i) {
    const double rho = snr(rng);
    const int n = nodes(rng);
    const double sinr = sinr_with_interferers(power_control_snr(rho, n), rho, n);
    CHECK(sinr == doctest::Approx(rho).epsilon(1e-15));
  }
}

TEST_CASE("bystander_sinr") {
  CHECK(bystander_sinr(1.0, 5) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(bystander_sinr(2.0, 15) == doctest::Approx(2.0 / 85.0).epsilon(1e-15));
  CHECK(1.0 / (1.0 + power_control_snr(1.0, 5) + 1.0 * 3) == doctest::Approx(bystander_sinr(1.0, 5)).epsilon(1e-15));
  for (int n = 2; n < 30; ++n) CHECK(bystander_sinr(0.7, n) < sinr_collision(0.7, n));
  CHECK_THROWS_AS(bystander_sinr(1.0, 1), DomainError);
}

TEST_CASE("joint_operational_snr") {
  CHECK(joint_operational_snr(2.0, 15, 0.057) == doctest::Approx(8.08).epsilon(1e-3));
  CHECK(joint_operational_snr(1.0, 5, 0.2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(joint_operational_snr(1.0, 5, bystander_sinr(1.0, 5)) ==
        doctest::Approx(power_control_snr(1.0, 5)).epsilon(1e-14));
  CHECK_THROWS_AS(joint_operational_snr(1.0, 5, 0.1), DomainError);
  CHECK_THROWS_AS(joint_operational_snr(1.0, 5, 0.21), DomainError);
}

TEST_CASE("compensation loss") {
  // scipy oracle chain: bounded epsilon search over quad-based EC
  const double strict = compensation_loss(1.0, 5, 0.1, 1000);
  CHECK(strict == doctest::Approx(0.80291506).epsilon(1e-5));
  const double lax = compensation_loss(1.0, 5, 0.001, 1000);
  CHECK(lax == doctest::Approx(0.57719220).epsilon(1e-5));
  CHECK(lax < strict);
  CHECK(strict < 1.0);
  CHECK(compensation_loss(1.0, 1, 0.1, 1000) == 1.0);
}

TEST_CASE("power control plan reaches the single-node EC") {
  const CompensationModel model({5, 1.0, 1000, 0.05});
  const auto plan = model.power_control();
  CHECK(plan.strategy == Strategy::power_control);
  CHECK(plan.recovering_snr == 5.0);
  const double recovered_sinr = sinr_with_interferers(plan.recovering_snr, 1.0, 5);
  CHECK(model.ec_max(recovered_sinr, 0.05) == doctest::Approx(model.no_collision_optimum().ec_max).epsilon(1e-12));
  CHECK(plan.bystander_sinr <= model.colliding_sinr());
  CHECK(plan.loss_factor > 0.0);
  CHECK(plan.loss_factor <= 1.0);
}

TEST_CASE("graceful degradation worked example") {
  const auto result = graceful_theta(1.0, 5, 0.05, 1000);
  // scipy brentq over the same nested definition: 0.0233768, EC_max 0.0638185
  CHECK(result.theta_i == doctest::Approx(0.023376780).epsilon(1e-5));
  CHECK(result.ec_max == doctest::Approx(0.063818513).epsilon(1e-6));
  CHECK(result.theta_i < 0.05);

  const CompensationModel model({5, 1.0, 1000, 0.05});
  const double before = max_delay(model.collision_optimum().ec_max, 0.05, 1e-3);
  const double after = max_delay(result.ec_max, result.theta_i, 1e-3);
  CHECK(before == doctest::Approx(3600).epsilon(0.05));
  CHECK(after == doctest::Approx(4600).epsilon(0.05));

  const auto single = graceful_theta(1.0, 1, 0.05, 1000);
  CHECK(single.theta_i == 0.05);
}

TEST_CASE("graceful degradation reports infeasibility") {
  // A dense network at a lax delay exponent cannot recover above the floor.
  CHECK_THROWS_AS(graceful_theta(2.0, 60, 2e-5, 1000), InfeasibleError);
}

TEST_CASE("joint_theta2 endpoints and worked value") {
  const CompensationModel model({15, 2.0, 1000, 0.1});
  CHECK(model.joint_theta2(model.power_control_snr()) == 0.1);
  CHECK(model.joint_theta2(2.0) == doctest::Approx(model.graceful().new_theta).epsilon(1e-7));
  // scipy: 0.0553848 at rho_c_o = 8.08
  const double theta_2 = model.joint_theta2(8.08);
  CHECK(theta_2 == doctest::Approx(0.0553848).epsilon(1e-5));
  CHECK_THROWS_AS(model.joint_theta2(1.0), DomainError);
  CHECK_THROWS_AS(model.joint_theta2(100.0), DomainError);
}

TEST_CASE("joint endpoints reproduce the pure strategies") {
  const CompensationModel model({5, 1.0, 1000, 0.05});
  const JointPriorities priorities{1.0, 4.0};
  const auto at_power = model.operating_point(model.bystander_sinr(), priorities);
  CHECK(at_power.theta_2 == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(at_power.alpha == model.compensation_loss());

  const auto at_graceful = model.operating_point(model.colliding_sinr(), priorities);
  CHECK(at_graceful.alpha == 1.0);
  CHECK(std::abs(at_graceful.theta_2 - model.graceful().new_theta) <= 1e-8);
}

TEST_CASE("joint trade-off is monotone") {
  const CompensationModel model({5, 1.0, 1000, 0.1});
  const JointPriorities priorities{1.0, 1.0};
  const auto solution = model.optimize_joint(priorities, {12, 1});
  REQUIRE(solution.curve.size() == 12);
  for (std::size_t k = 1; k < solution.curve.size(); ++k) {
    CHECK(solution.curve[k].bystander_sinr > solution.curve[k - 1].bystander_sinr);
    CHECK(solution.curve[k].alpha >= solution.curve[k - 1].alpha);
    CHECK(solution.curve[k].theta_2 <= solution.curve[k - 1].theta_2);
  }
}

TEST_CASE("joint optimizer with a single priority goes to the matching endpoint") {
  const CompensationModel model({5, 1.0, 1000, 0.1});
  const auto only_alpha = model.optimize_joint({1.0, 0.0}, {16, 1});
  CHECK(only_alpha.plan.loss_factor == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(only_alpha.plan.bystander_sinr == doctest::Approx(model.colliding_sinr()).epsilon(1e-6));

  const auto only_theta = model.optimize_joint({0.0, 1.0}, {16, 1});
  CHECK(only_theta.plan.new_theta == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(only_theta.plan.bystander_sinr == doctest::Approx(model.bystander_sinr()).epsilon(1e-6));

  CHECK_THROWS_AS(model.optimize_joint({0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(CompensationModel({1, 1.0, 1000, 0.1}).optimize_joint({1.0, 1.0}), DomainError);
}

TEST_CASE("joint optimizer is independent of the worker count") {
  const CompensationModel model({5, 1.0, 700, 0.1});
  const auto serial = model.optimize_joint({1.0, 2.0}, {10, 1});
  const auto threaded = model.optimize_joint({1.0, 2.0}, {10, 4});
  CHECK(serial.plan.bystander_sinr == threaded.plan.bystander_sinr);
  CHECK(serial.plan.objective_value == threaded.plan.objective_value);
  for (std::size_t k = 0; k < serial.curve.size(); ++k) {
    CHECK(serial.curve[k].eta == threaded.curve[k].eta);
  }
}

TEST_CASE("SINR sensitivity") {
  const double strict = ec_sinr_sensitivity(0.2, 0.1, 0.05, 1000);
  const double moderate = ec_sinr_sensitivity(0.2, 0.01, 0.05, 1000);
  const double lax = ec_sinr_sensitivity(0.2, 0.001, 0.05, 1000);
  CHECK(moderate > 0.0);
  CHECK(strict > 0.0);
  CHECK(strict < lax);

  // Central differences: halving the step changes the estimate by O(h^2).
  const double h = 2e-3;
  const double coarse = ec_sinr_sensitivity(0.2, 0.01, 0.05, 1000, h);
  const double fine = ec_sinr_sensitivity(0.2, 0.01, 0.05, 1000, h / 2);
  const double finer = ec_sinr_sensitivity(0.2, 0.01, 0.05, 1000, h / 4);
  const double ratio = (coarse - fine) / (fine - finer);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));

  CHECK_THROWS_AS(ec_sinr_sensitivity(0.2, 0.01, 0.05, 1000, 0.5), DomainError);
}
