#include "ecfb/compensation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ecfb/errors.hpp"
#include "ecfb/parallel.hpp"

namespace ecfb {

namespace {

// Slack for interval checks whose endpoints are themselves rounded results.
constexpr double kEndpointSlack = 1e-9;

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::power_control:
      return "power_control";
    case Strategy::graceful_theta:
      return "graceful_theta";
    case Strategy::joint:
      return "joint";
  }
  return "unknown";
}

void JointPriorities::validate() const {
  if (!(eta_alpha >= 0.0) || !std::isfinite(eta_alpha)) {
    throw DomainError("priorities.eta_alpha: must be finite and >= 0");
  }
  if (!(eta_theta >= 0.0) || !std::isfinite(eta_theta)) {
    throw DomainError("priorities.eta_theta: must be finite and >= 0");
  }
  if (eta_alpha == 0.0 && eta_theta == 0.0) {
    throw DomainError("priorities: eta_alpha and eta_theta must not both be zero");
  }
}

double power_control_snr(double snr, int n_nodes) {
  if (!(snr > 0.0)) throw DomainError("power_control_snr: snr must be > 0");
  if (n_nodes < 1) throw DomainError("power_control_snr: n_nodes must be >= 1");
  return snr * (1.0 + snr * (n_nodes - 1));
}

double bystander_sinr(double snr, int n_nodes) {
  if (!(snr > 0.0)) throw DomainError("bystander_sinr: snr must be > 0");
  if (n_nodes < 2) throw DomainError("bystander_sinr: needs n_nodes >= 2 (no bystanders)");
  return snr / (1.0 + snr * (snr + 1.0) * (n_nodes - 1));
}

double joint_operational_snr(double snr, int n_nodes, double bystander_op_sinr) {
  const double lo = bystander_sinr(snr, n_nodes);
  const double hi = sinr_collision(snr, n_nodes);
  if (!(bystander_op_sinr >= lo * (1.0 - kEndpointSlack) &&
        bystander_op_sinr <= hi * (1.0 + kEndpointSlack))) {
    std::ostringstream msg;
    msg << "bystander_op_sinr: " << bystander_op_sinr << " outside [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
  return snr / bystander_op_sinr - 1.0 - snr * (n_nodes - 2);
}

CompensationModel::CompensationModel(const NetworkScenario& scenario)
    : scenario_(scenario), colliding_sinr_(sinr_collision(scenario)) {
  no_collision_ = optimal_epsilon(scenario_.snr, scenario_.delay_exponent, scenario_.blocklength);
  collision_ = scenario_.n_nodes == 1
                   ? no_collision_
                   : optimal_epsilon(colliding_sinr_, scenario_.delay_exponent,
                                     scenario_.blocklength);
}

void CompensationModel::require_collision(const char* what) const {
  if (scenario_.n_nodes < 2) {
    throw DomainError(std::string(what) + ": needs n_nodes >= 2 (no bystanders)");
  }
}

double CompensationModel::bystander_sinr() const {
  require_collision("bystander_sinr");
  return ecfb::bystander_sinr(scenario_.snr, scenario_.n_nodes);
}

double CompensationModel::power_control_snr() const {
  return ecfb::power_control_snr(scenario_.snr, scenario_.n_nodes);
}

double CompensationModel::ec_max(double sinr, double theta) const {
  return optimal_epsilon(sinr, theta, scenario_.blocklength).ec_max;
}

double CompensationModel::restoring_theta(double recovering_sinr) const {
  const double theta = scenario_.delay_exponent;
  const double target = no_collision_.ec_max;
  auto gap = [&](double t) { return ec_max(recovering_sinr, t) - target; };

  if (gap(theta) >= -kThetaRoot.abs_tol) return theta;
  if (!(theta > kThetaFloor) || gap(kThetaFloor) < 0.0) {
    std::ostringstream msg;
    msg << "no delay exponent in [" << kThetaFloor << ", " << theta
        << "] restores EC_max = " << target << " at SINR " << recovering_sinr;
    throw InfeasibleError(msg.str());
  }
  return find_root_monotone(gap, kThetaFloor, theta, kThetaRoot);
}

double CompensationModel::compensation_loss() const {
  if (scenario_.n_nodes == 1) return 1.0;
  return ec_max(bystander_sinr(), scenario_.delay_exponent) / collision_.ec_max;
}

CompensationPlan CompensationModel::power_control() const {
  CompensationPlan plan;
  plan.strategy = Strategy::power_control;
  plan.recovering_snr = power_control_snr();
  plan.bystander_sinr = scenario_.n_nodes == 1 ? colliding_sinr_ : bystander_sinr();
  plan.new_theta = scenario_.delay_exponent;
  plan.loss_factor = compensation_loss();
  plan.recovered_ec = no_collision_.ec_max;
  return plan;
}

CompensationPlan CompensationModel::graceful() const {
  CompensationPlan plan;
  plan.strategy = Strategy::graceful_theta;
  plan.recovering_snr = scenario_.snr;
  plan.bystander_sinr = colliding_sinr_;
  plan.new_theta = scenario_.n_nodes == 1 ? scenario_.delay_exponent
                                          : restoring_theta(colliding_sinr_);
  plan.loss_factor = 1.0;
  plan.recovered_ec = scenario_.n_nodes == 1 ? no_collision_.ec_max
                                             : ec_max(colliding_sinr_, plan.new_theta);
  return plan;
}

double CompensationModel::joint_theta2(double rho_c_o) const {
  const double lo = scenario_.snr;
  const double hi = power_control_snr();
  if (!(rho_c_o >= lo * (1.0 - kEndpointSlack) && rho_c_o <= hi * (1.0 + kEndpointSlack))) {
    std::ostringstream msg;
    msg << "rho_c_o: " << rho_c_o << " outside [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
  return restoring_theta(sinr_with_interferers(rho_c_o, scenario_.snr, scenario_.n_nodes));
}

double CompensationModel::joint_alpha(double bystander_op_sinr) const {
  require_collision("joint_alpha");
  joint_operational_snr(scenario_.snr, scenario_.n_nodes, bystander_op_sinr);
  return ec_max(bystander_op_sinr, scenario_.delay_exponent) / collision_.ec_max;
}

OperatingPoint CompensationModel::operating_point(double bystander_op_sinr,
                                                  const JointPriorities& priorities) const {
  require_collision("operating_point");
  OperatingPoint p;
  p.bystander_sinr = bystander_op_sinr;
  p.recovering_snr = joint_operational_snr(scenario_.snr, scenario_.n_nodes, bystander_op_sinr);
  p.alpha = joint_alpha(bystander_op_sinr);
  try {
    p.theta_2 = joint_theta2(std::clamp(p.recovering_snr, scenario_.snr, power_control_snr()));
    p.feasible = true;
    p.eta = priorities.eta_alpha * p.alpha + priorities.eta_theta * p.theta_2;
  } catch (const InfeasibleError&) {
    p.feasible = false;
    p.eta = -std::numeric_limits<double>::infinity();
  }
  return p;
}

JointSolution CompensationModel::optimize_joint(const JointPriorities& priorities,
                                                const JointOptions& options) const {
  require_collision("optimize_joint");
  priorities.validate();
  if (options.grid_points < 2) throw DomainError("grid_points: must be >= 2");

  const double lo = bystander_sinr();
  const double hi = colliding_sinr_;
  const auto n = static_cast<std::size_t>(options.grid_points);

  JointSolution out;
  out.curve.resize(n);
  parallel_for_ordered(n, options.jobs, [&](std::size_t k) {
    const double x = k == 0 ? lo : k + 1 == n ? hi : lo + (hi - lo) * k / (n - 1.0);
    out.curve[k] = operating_point(x, priorities);
  });

  std::size_t best = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (!out.curve[k].feasible) continue;
    if (best == n || out.curve[k].eta > out.curve[best].eta) best = k;
  }
  if (best == n) throw InfeasibleError("joint: no feasible operating point on [rho_s, rho_i]");

  OperatingPoint chosen = out.curve[best];
  const double a = out.curve[best == 0 ? 0 : best - 1].bystander_sinr;
  const double b = out.curve[std::min(best + 1, n - 1)].bystander_sinr;
  if (a < b) {
    auto negative_eta = [&](double x) {
      const auto p = operating_point(x, priorities);
      return p.feasible ? -p.eta : std::numeric_limits<double>::infinity();
    };
    const Tolerance refine{1e-7 * (hi - lo), 1e-9, 200};
    const auto minimum = minimize_scalar_convex(negative_eta, a, b, refine);
    if (-minimum.min > chosen.eta) chosen = operating_point(minimum.argmin, priorities);
  }

  CompensationPlan& plan = out.plan;
  plan.strategy = Strategy::joint;
  plan.recovering_snr = chosen.recovering_snr;
  plan.bystander_sinr = chosen.bystander_sinr;
  plan.new_theta = chosen.theta_2;
  plan.loss_factor = chosen.alpha;
  plan.objective_value = chosen.eta;
  plan.recovered_ec = no_collision_.ec_max;
  return out;
}

double compensation_loss(double snr, int n_nodes, double theta, int blocklength) {
  return CompensationModel({n_nodes, snr, blocklength, theta}).compensation_loss();
}

GracefulResult graceful_theta(double snr, int n_nodes, double theta, int blocklength) {
  const auto plan = CompensationModel({n_nodes, snr, blocklength, theta}).graceful();
  return {plan.new_theta, plan.recovered_ec};
}

double joint_theta2(double snr, int n_nodes, double theta, int blocklength, double rho_c_o) {
  return CompensationModel({n_nodes, snr, blocklength, theta}).joint_theta2(rho_c_o);
}

JointSolution joint_optimize(double snr, int n_nodes, double theta, int blocklength,
                             const JointPriorities& priorities, const JointOptions& options) {
  return CompensationModel({n_nodes, snr, blocklength, theta}).optimize_joint(priorities, options);
}

double ec_sinr_sensitivity(double sinr, double theta, double epsilon, int blocklength,
                           double step) {
  if (!(sinr > 0.0)) throw DomainError("ec_sinr_sensitivity: sinr must be > 0");
  if (step <= 0.0) step = 1e-4 * sinr;
  if (!(step < sinr)) throw DomainError("ec_sinr_sensitivity: step must be smaller than sinr");

  auto central = [&](double h) {
    return (ec_direct(sinr + h, theta, epsilon, blocklength).ec -
            ec_direct(sinr - h, theta, epsilon, blocklength).ec) /
           (2.0 * h);
  };
  const double coarse = central(step);
  const double fine = central(0.5 * step);
  if (!std::isfinite(coarse) || std::signbit(coarse) != std::signbit(fine)) {
    throw NumericError("ec_sinr_sensitivity: step too large to resolve the derivative", coarse,
                       std::abs(coarse - fine));
  }
  return coarse;
}

}  // namespace ecfb
