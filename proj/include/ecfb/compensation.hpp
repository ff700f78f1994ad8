#pragma once

#include <string>
#include <vector>

#include "ecfb/channel.hpp"
#include "ecfb/effective_capacity.hpp"

namespace ecfb {

enum class Strategy { power_control, graceful_theta, joint };

std::string to_string(Strategy s);

/// Weights of the joint objective eta = eta_alpha * alpha + eta_theta * theta_2.
struct JointPriorities {
  double eta_alpha = 1.0;
  double eta_theta = 1.0;

  void validate() const;
};

/// Resolved compensation for one recovering node.
struct CompensationPlan {
  Strategy strategy = Strategy::power_control;
  double recovering_snr = 0.0;   ///< SNR the recovering node transmits with
  double bystander_sinr = 0.0;   ///< SINR left to the other N-1 nodes
  double new_theta = 0.0;        ///< delay exponent of the recovering node
  double loss_factor = 1.0;      ///< bystander EC_max after / before
  double objective_value = 0.0;  ///< joint only
  double recovered_ec = 0.0;     ///< EC_max of the recovering node after compensation
};

/// One point of the joint model, parameterized by the bystander SINR.
struct OperatingPoint {
  double bystander_sinr = 0.0;
  double recovering_snr = 0.0;
  double alpha = 0.0;
  double theta_2 = 0.0;
  double eta = 0.0;
  bool feasible = false;
};

struct JointSolution {
  CompensationPlan plan;
  /// The coarse grid over [rho_s, rho_i], ordered by bystander SINR.
  std::vector<OperatingPoint> curve;
};

struct JointOptions {
  int grid_points = 64;
  unsigned jobs = 1;
};

/// Lower end of the delay-exponent search.
inline constexpr double kThetaFloor = 1e-5;
/// Tolerance of the delay-exponent root search (EC units and theta units).
inline constexpr Tolerance kThetaRoot{1e-9, 1e-9, 200};

/// Recovering-node SNR that restores the collision-free SINR.
double power_control_snr(double snr, int n_nodes);

/// SINR of the other nodes once one node transmits at power_control_snr.
double bystander_sinr(double snr, int n_nodes);

/// Recovering-node SNR for a chosen bystander operating SINR.
double joint_operational_snr(double snr, int n_nodes, double bystander_op_sinr);

/// Compensation solver for one scenario. The collision-free and colliding
/// EC maxima are computed once at construction; every EC below is the
/// direct-quadrature EC maximized over its own error probability.
class CompensationModel {
 public:
  explicit CompensationModel(const NetworkScenario& scenario);

  const NetworkScenario& scenario() const { return scenario_; }
  double colliding_sinr() const { return colliding_sinr_; }
  /// Requires n_nodes >= 2.
  double bystander_sinr() const;
  double power_control_snr() const;

  const OptimalEpsilon& no_collision_optimum() const { return no_collision_; }
  const OptimalEpsilon& collision_optimum() const { return collision_; }

  /// EC maximized over epsilon at the given SINR and delay exponent.
  double ec_max(double sinr, double theta) const;

  /// Smallest relaxation theta' <= theta at which a node with the given SINR
  /// regains the collision-free EC_max. Returns theta when no relaxation is
  /// needed; throws InfeasibleError if even kThetaFloor is not enough.
  double restoring_theta(double recovering_sinr) const;

  /// alpha_c: bystander EC_max under full power control over the colliding one.
  double compensation_loss() const;

  CompensationPlan power_control() const;
  CompensationPlan graceful() const;

  /// theta_2 for a recovering node transmitting at rho_c_o.
  double joint_theta2(double rho_c_o) const;
  /// alpha_{c_o} for a bystander operating SINR.
  double joint_alpha(double bystander_op_sinr) const;
  /// Full operating point; infeasible theta_2 yields feasible = false.
  OperatingPoint operating_point(double bystander_op_sinr, const JointPriorities& priorities) const;

  /// Maximizes eta over [rho_s, rho_i]: coarse grid, then golden-section
  /// refinement across the best cell and its neighbours.
  JointSolution optimize_joint(const JointPriorities& priorities, const JointOptions& options = {}) const;

 private:
  void require_collision(const char* what) const;

  NetworkScenario scenario_;
  double colliding_sinr_;
  OptimalEpsilon no_collision_;
  OptimalEpsilon collision_;
};

/// alpha_c for (snr, N, theta, T); 1 for a single node.
double compensation_loss(double snr, int n_nodes, double theta, int blocklength);

struct GracefulResult {
  double theta_i = 0.0;
  double ec_max = 0.0;
};

GracefulResult graceful_theta(double snr, int n_nodes, double theta, int blocklength);

double joint_theta2(double snr, int n_nodes, double theta, int blocklength, double rho_c_o);

JointSolution joint_optimize(double snr, int n_nodes, double theta, int blocklength,
                             const JointPriorities& priorities, const JointOptions& options = {});

/// Central-difference dEC/dsinr at fixed epsilon. step <= 0 selects
/// 1e-4 * sinr. Throws NumericError if halving the step flips the sign.
double ec_sinr_sensitivity(double sinr, double theta, double epsilon, int blocklength,
                           double step = 0.0);

}  // namespace ecfb
