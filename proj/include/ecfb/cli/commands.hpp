#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecfb/cli/config.hpp"
#include "ecfb/cli/csv.hpp"
#include "ecfb/compensation.hpp"
#include "ecfb/montecarlo.hpp"

namespace ecfb::cli {

/// A dataset plus the human-readable lines printed next to it.
struct CommandResult {
  CsvTable table;
  std::vector<std::string> summary;
};

/// One evaluated (scenario, epsilon) point.
struct PointResult {
  NetworkScenario scenario;
  double sinr = 0.0;
  bool fixed_epsilon = false;
  EcEvaluation evaluation;
  std::optional<McEstimate> monte_carlo;
  OptimalEpsilon optimum;
};

/// Evaluates EC at `epsilon` (or at epsilon* when absent) with `method`.
/// epsilon* is searched with `method`, or with direct quadrature for mc.
/// `known_optimum` skips the search when the caller already has it.
PointResult evaluate_point(const NetworkScenario& scenario, std::optional<double> epsilon,
                           const EcMethod& method, const MonteCarloSettings& mc, unsigned jobs,
                           const OptimalEpsilon* known_optimum = nullptr);

/// Columns shared by ec, epsilon-opt and scalar sweeps.
std::vector<std::string> point_columns();
void append_point(CsvTable::Row& row, const PointResult& point, const std::optional<QosTarget>& qos);

/// Grid of a sweep axis; integer variables are rounded and deduplicated.
std::vector<double> sweep_grid(const SweepAxis& axis, double lo, double hi);

CommandResult run_ec(const ScenarioConfig& cfg, unsigned jobs);
CommandResult run_epsilon_opt(const ScenarioConfig& cfg, unsigned jobs);
CommandResult run_sweep(const ScenarioConfig& cfg, unsigned jobs);
CommandResult run_compensate(const ScenarioConfig& cfg, Strategy strategy, unsigned jobs);
CommandResult run_mc_validate(const ScenarioConfig& cfg, unsigned jobs);

}  // namespace ecfb::cli
