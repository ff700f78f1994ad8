#include "ecfb/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ecfb/errors.hpp"
#include "ecfb/parallel.hpp"

namespace ecfb::cli {

namespace {

std::string num(double x, int digits = 6) {
  std::ostringstream out;
  out.precision(digits);
  out << x;
  return out.str();
}

EcMethod search_method(const EcMethod& method) {
  return method.kind == EcMethod::Kind::monte_carlo ? EcMethod::direct() : method;
}

/// Delay bound at the outage probability; infinite when the EC is not positive.
double delay_bound(double ec, double theta, double p) {
  return ec > 0.0 ? max_delay(ec, theta, p) : std::numeric_limits<double>::infinity();
}

void add_warnings(const NetworkScenario& scenario, std::vector<std::string>& summary) {
  for (const auto& w : scenario.warnings()) summary.push_back("warning: " + w);
}

std::string describe(const PointResult& p) {
  std::ostringstream out;
  out << "N=" << p.scenario.n_nodes << " snr=" << num(p.scenario.snr) << " T=" << p.scenario.blocklength
      << " theta=" << num(p.scenario.delay_exponent) << " sinr=" << num(p.sinr) << ": epsilon="
      << num(p.evaluation.epsilon) << (p.fixed_epsilon ? " (fixed)" : " (optimized)")
      << " EC=" << num(p.evaluation.ec) << " bits/channel use [" << p.evaluation.method.label() << "]";
  if (p.monte_carlo) out << " inner std error " << num(p.monte_carlo->std_error, 3);
  if (p.optimum.degenerate) out << " (EC monotone in epsilon: optimum on the search bracket)";
  return out.str();
}

std::vector<std::string> scenario_columns() { return {"n_nodes", "snr", "blocklength", "delay_exponent"}; }

void append_scenario(CsvTable::Row& row, const NetworkScenario& s) {
  row << s.n_nodes << s.snr << s.blocklength << s.delay_exponent;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

NetworkScenario with_value(NetworkScenario s, const std::string& variable, double value) {
  if (variable == "n_nodes") s.n_nodes = static_cast<int>(value);
  if (variable == "snr") s.snr = value;
  if (variable == "theta") s.delay_exponent = value;
  if (variable == "blocklength") s.blocklength = static_cast<int>(value);
  return s;
}

CommandResult run_scalar_sweep(const ScenarioConfig& cfg, unsigned jobs) {
  const SweepAxis& axis = *cfg.sweep;
  const bool db = axis.variable == "snr" && cfg.snr_in_db;
  std::vector<double> grid = sweep_grid(axis, *axis.min, *axis.max);

  std::vector<NetworkScenario> scenarios;
  for (double v : grid) {
    const double value = db ? db_to_linear(v) : v;
    scenarios.push_back(with_value(cfg.scenario, axis.variable, value));
    try {
      scenarios.back().validate();
      if (axis.variable == "epsilon" && !(value > 0.0 && value <= 1.0)) {
        throw DomainError("epsilon: must lie in (0, 1]");
      }
    } catch (const DomainError& e) {
      throw ConfigError("sweep: grid value " + num(v) + " is invalid (" + e.what() + ")");
    }
  }

  const bool sweep_epsilon = axis.variable == "epsilon";
  std::optional<OptimalEpsilon> shared_optimum;
  if (sweep_epsilon) {
    shared_optimum = optimal_epsilon(sinr_collision(cfg.scenario), cfg.scenario.delay_exponent,
                                     cfg.scenario.blocklength, search_method(cfg.method));
  }

  std::vector<PointResult> points(grid.size());
  parallel_for_ordered(grid.size(), jobs, [&](std::size_t i) {
    const std::optional<double> eps = sweep_epsilon ? std::optional<double>(grid[i]) : cfg.epsilon;
    points[i] = evaluate_point(scenarios[i], eps, cfg.method, cfg.monte_carlo, 1,
                               shared_optimum ? &*shared_optimum : nullptr);
  });

  CommandResult result{CsvTable(concat({"sweep_variable", "sweep_value"}, point_columns())), {}};
  std::size_t best = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto row = result.table.add_row();
    row << axis.variable << grid[i];
    append_point(row, points[i], cfg.qos);
    if (points[i].evaluation.ec > points[best].evaluation.ec) best = i;
  }
  add_warnings(cfg.scenario, result.summary);
  result.summary.push_back("sweep over " + axis.variable + ": " + std::to_string(points.size()) + " points [" +
                           cfg.method.label() + "]");
  result.summary.push_back("largest EC at " + axis.variable + "=" + num(grid[best]) + ": " +
                           describe(points[best]));
  return result;
}

CommandResult run_joint_sweep(const ScenarioConfig& cfg, unsigned jobs) {
  if (cfg.scenario.n_nodes < 2) {
    throw ConfigError("scenario.n_nodes: a bystander_op_sinr sweep needs at least 2 nodes");
  }
  const CompensationModel model(cfg.scenario);
  const SweepAxis& axis = *cfg.sweep;
  const double lo = axis.min.value_or(model.bystander_sinr());
  const double hi = axis.max.value_or(model.colliding_sinr());
  if (!(lo < hi)) throw ConfigError("sweep.max: must be greater than sweep.min");
  const std::vector<double> grid = sweep_grid(axis, lo, hi);
  for (double v : grid) {
    try {
      joint_operational_snr(cfg.scenario.snr, cfg.scenario.n_nodes, v);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("sweep: ") + e.what());
    }
  }
  const JointPriorities priorities = cfg.priorities.value_or(JointPriorities{});

  std::vector<OperatingPoint> points(grid.size());
  parallel_for_ordered(grid.size(), jobs,
                       [&](std::size_t i) { points[i] = model.operating_point(grid[i], priorities); });

  CommandResult result{
      CsvTable(concat(scenario_columns(),
                      {"sweep_variable", "sweep_value", "bystander_op_sinr", "recovering_snr", "alpha_co", "theta_2",
                       "eta_alpha", "eta_theta", "eta", "feasible", "outage_probability", "max_delay_recovered"})),
      {}};
  const double target_ec = model.no_collision_optimum().ec_max;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    auto row = result.table.add_row();
    append_scenario(row, cfg.scenario);
    row << axis.variable << grid[i] << p.bystander_sinr << p.recovering_snr << p.alpha;
    if (p.feasible) {
      row << p.theta_2;
    } else {
      row.blank();
    }
    if (cfg.priorities && p.feasible) {
      row << priorities.eta_alpha << priorities.eta_theta << p.eta;
    } else if (cfg.priorities) {
      row << priorities.eta_alpha << priorities.eta_theta;
      row.blank();
    } else {
      row.blank().blank().blank();
    }
    row << p.feasible;
    if (cfg.qos && p.feasible) {
      row << cfg.qos->outage_probability << delay_bound(target_ec, p.theta_2, cfg.qos->outage_probability);
    } else {
      row.blank().blank();
    }
  }
  add_warnings(cfg.scenario, result.summary);
  result.summary.push_back("bystander_op_sinr sweep over [" + num(lo) + ", " + num(hi) + "]: " +
                           std::to_string(points.size()) + " points");
  return result;
}

}  // namespace

PointResult evaluate_point(const NetworkScenario& scenario, std::optional<double> epsilon,
                           const EcMethod& method, const MonteCarloSettings& mc, unsigned jobs,
                           const OptimalEpsilon* known_optimum) {
  PointResult p;
  p.scenario = scenario;
  p.sinr = sinr_collision(scenario);
  const double theta = scenario.delay_exponent;
  const int blocklength = scenario.blocklength;
  p.optimum = known_optimum != nullptr ? *known_optimum
                                       : optimal_epsilon(p.sinr, theta, blocklength, search_method(method));
  p.fixed_epsilon = epsilon.has_value();
  const double eps = epsilon.value_or(p.optimum.epsilon_star);
  if (method.kind == EcMethod::Kind::monte_carlo) {
    const auto r = ec_monte_carlo(p.sinr, theta, eps, blocklength, mc.samples, mc.seed, {mc.shards, jobs});
    p.evaluation = r.evaluation;
    p.monte_carlo = r.estimate;
  } else if (!epsilon) {
    p.evaluation = p.optimum.evaluation;
  } else {
    p.evaluation = ec_evaluate(p.sinr, theta, eps, blocklength, method);
  }
  return p;
}

std::vector<std::string> point_columns() {
  return concat(scenario_columns(),
                {"sinr", "method", "epsilon", "epsilon_source", "ec", "inner_expectation", "error_estimate",
                 "laguerre_discrepancy", "mc_samples", "mc_seed", "inner_std_error", "epsilon_star", "ec_max",
                 "degenerate", "outage_probability", "max_delay_at_outage", "max_delay_target",
                 "outage_at_target"});
}

void append_point(CsvTable::Row& row, const PointResult& p, const std::optional<QosTarget>& qos) {
  const EcEvaluation& e = p.evaluation;
  append_scenario(row, p.scenario);
  row << p.sinr << e.method.label() << e.epsilon << (p.fixed_epsilon ? "fixed" : "optimized") << e.ec
      << e.inner_expectation << e.error_estimate << e.laguerre_discrepancy;
  if (p.monte_carlo) {
    row << p.monte_carlo->samples << p.monte_carlo->seed << p.monte_carlo->std_error;
  } else {
    row.blank().blank().blank();
  }
  row << p.optimum.epsilon_star << p.optimum.ec_max << p.optimum.degenerate;
  if (qos) {
    const double theta = p.scenario.delay_exponent;
    row << qos->outage_probability << delay_bound(e.ec, theta, qos->outage_probability);
    if (qos->max_delay > 0.0) {
      row << qos->max_delay << (e.ec >= 0.0 ? delay_outage(e.ec, theta, qos->max_delay) : 1.0);
    } else {
      row.blank().blank();
    }
  } else {
    row.blank().blank().blank().blank();
  }
}

std::vector<double> sweep_grid(const SweepAxis& axis, double lo, double hi) {
  const int n = axis.points;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    double v = axis.log_spacing ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
    if (i == 0) v = lo;
    if (i == n - 1) v = hi;
    grid.push_back(v);
  }
  if (axis.variable == "n_nodes" || axis.variable == "blocklength") {
    for (double& v : grid) v = std::round(v);
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }
  return grid;
}

CommandResult run_ec(const ScenarioConfig& cfg, unsigned jobs) {
  const PointResult p = evaluate_point(cfg.scenario, cfg.epsilon, cfg.method, cfg.monte_carlo, jobs);
  CommandResult result{CsvTable(point_columns()), {}};
  auto row = result.table.add_row();
  append_point(row, p, cfg.qos);
  add_warnings(cfg.scenario, result.summary);
  result.summary.push_back(describe(p));
  if (cfg.qos) {
    result.summary.push_back("delay bound at outage " + num(cfg.qos->outage_probability) + ": " +
                             num(delay_bound(p.evaluation.ec, cfg.scenario.delay_exponent,
                                             cfg.qos->outage_probability)) +
                             " symbols");
  }
  return result;
}

CommandResult run_epsilon_opt(const ScenarioConfig& cfg, unsigned jobs) {
  ScenarioConfig optimized = cfg;
  optimized.epsilon.reset();
  CommandResult result = run_ec(optimized, jobs);
  if (cfg.epsilon) result.summary.push_back("note: the configured epsilon is ignored by epsilon-opt");
  return result;
}

CommandResult run_sweep(const ScenarioConfig& cfg, unsigned jobs) {
  if (!cfg.sweep) throw ConfigError("sweep: the sweep command needs a sweep section");
  return cfg.sweep->variable == "bystander_op_sinr" ? run_joint_sweep(cfg, jobs) : run_scalar_sweep(cfg, jobs);
}

CommandResult run_compensate(const ScenarioConfig& cfg, Strategy strategy, unsigned jobs) {
  if (strategy != Strategy::graceful_theta && cfg.scenario.n_nodes < 2) {
    throw ConfigError("scenario.n_nodes: " + to_string(strategy) + " compensation needs at least 2 nodes");
  }
  if (strategy == Strategy::joint && !cfg.priorities) {
    throw ConfigError("priorities: joint compensation needs eta_alpha and eta_theta");
  }
  const CompensationModel model(cfg.scenario);
  const double theta = cfg.scenario.delay_exponent;
  const double ec_free = model.no_collision_optimum().ec_max;
  const double ec_collision = model.collision_optimum().ec_max;

  CommandResult result{
      CsvTable(concat(scenario_columns(),
                      {"strategy", "kind", "bystander_sinr", "recovering_snr", "loss_factor", "new_theta",
                       "eta_alpha", "eta_theta", "objective", "feasible", "ec_no_collision", "ec_collision",
                       "recovered_ec", "bystander_ec", "outage_probability", "max_delay_collision",
                       "max_delay_recovered"})),
      {}};

  auto add = [&](const std::string& kind, double bystander, double recovering, double loss, double new_theta,
                 std::optional<double> objective, bool feasible) {
    auto row = result.table.add_row();
    append_scenario(row, cfg.scenario);
    row << to_string(strategy) << kind << bystander << recovering << loss;
    if (feasible) {
      row << new_theta;
    } else {
      row.blank();
    }
    if (strategy == Strategy::joint) {
      row << cfg.priorities->eta_alpha << cfg.priorities->eta_theta;
    } else {
      row.blank().blank();
    }
    if (objective && feasible) {
      row << *objective;
    } else {
      row.blank();
    }
    row << feasible << ec_free << ec_collision;
    if (feasible) {
      row << ec_free;
    } else {
      row.blank();
    }
    row << loss * ec_collision;
    if (cfg.qos && feasible) {
      const double p = cfg.qos->outage_probability;
      row << p << delay_bound(ec_collision, theta, p) << delay_bound(ec_free, new_theta, p);
    } else {
      row.blank().blank().blank();
    }
  };

  add_warnings(cfg.scenario, result.summary);
  CompensationPlan plan;
  if (strategy == Strategy::joint) {
    const auto solution = model.optimize_joint(*cfg.priorities, {64, jobs});
    for (const auto& p : solution.curve) {
      add("grid", p.bystander_sinr, p.recovering_snr, p.alpha, p.theta_2, p.eta, p.feasible);
    }
    plan = solution.plan;
    add("optimum", plan.bystander_sinr, plan.recovering_snr, plan.loss_factor, plan.new_theta,
        plan.objective_value, true);
  } else {
    plan = strategy == Strategy::power_control ? model.power_control() : model.graceful();
    add("plan", plan.bystander_sinr, plan.recovering_snr, plan.loss_factor, plan.new_theta, std::nullopt, true);
  }

  auto& s = result.summary;
  s.push_back("EC_max without collision " + num(ec_free) + ", with collision " + num(ec_collision) +
              " bits/channel use");
  switch (strategy) {
    case Strategy::power_control:
      s.push_back("power control: recovering SNR " + num(plan.recovering_snr) + ", bystander SINR " +
                  num(plan.bystander_sinr) + ", compensation loss factor alpha_c " + num(plan.loss_factor));
      break;
    case Strategy::graceful_theta:
      s.push_back("graceful degradation: theta " + num(theta) + " -> theta_i " + num(plan.new_theta) +
                  ", recovered EC_max " + num(plan.recovered_ec));
      break;
    case Strategy::joint:
      s.push_back("joint optimum: rho_s_o " + num(plan.bystander_sinr) + ", rho_c_o " + num(plan.recovering_snr) +
                  ", alpha_c_o " + num(plan.loss_factor) + ", theta_2 " + num(plan.new_theta) + ", eta " +
                  num(plan.objective_value));
      s.push_back("bystander EC loss " + num(100.0 * (1.0 - plan.loss_factor), 4) + " %");
      break;
  }
  if (cfg.qos) {
    const double p = cfg.qos->outage_probability;
    s.push_back("delay bound at outage " + num(p) + ": " + num(delay_bound(ec_collision, theta, p)) +
                " symbols while colliding, " + num(delay_bound(ec_free, plan.new_theta, p)) +
                " symbols after compensation");
  }
  return result;
}

CommandResult run_mc_validate(const ScenarioConfig& cfg, unsigned jobs) {
  const double sinr = sinr_collision(cfg.scenario);
  const double theta = cfg.scenario.delay_exponent;
  const int blocklength = cfg.scenario.blocklength;
  const int order = cfg.method.kind == EcMethod::Kind::series ? cfg.method.truncation_order : 4;
  const double eps = cfg.epsilon ? *cfg.epsilon : optimal_epsilon(sinr, theta, blocklength).epsilon_star;

  const auto direct = ec_direct(sinr, theta, eps, blocklength);
  const auto series = ec_series(sinr, theta, eps, blocklength, order);
  const auto mc = ec_monte_carlo(sinr, theta, eps, blocklength, cfg.monte_carlo.samples, cfg.monte_carlo.seed,
                                 {cfg.monte_carlo.shards, jobs});
  const double se = mc.estimate.std_error;
  const double gap = mc.estimate.mean - direct.inner_expectation;
  const double z = se > 0.0 ? gap / se : (gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  const bool within = std::abs(z) <= 3.0;
  const double series_gap = direct.ec != 0.0 ? std::abs(series.ec - direct.ec) / std::abs(direct.ec) : 0.0;

  CommandResult result{
      CsvTable(concat(scenario_columns(),
                      {"sinr", "epsilon", "epsilon_source", "mc_samples", "mc_seed", "mc_shards", "series_order",
                       "ec_direct", "ec_series", "ec_mc", "inner_direct", "inner_series", "inner_mc",
                       "inner_std_error", "z_score", "within_3se", "series_rel_error"})),
      {}};
  auto row = result.table.add_row();
  append_scenario(row, cfg.scenario);
  row << sinr << eps << (cfg.epsilon ? "fixed" : "optimized") << cfg.monte_carlo.samples << cfg.monte_carlo.seed
      << cfg.monte_carlo.shards << order << direct.ec << series.ec << mc.evaluation.ec << direct.inner_expectation
      << series.inner_expectation << mc.estimate.mean << se << z << within << series_gap;

  add_warnings(cfg.scenario, result.summary);
  result.summary.push_back("epsilon " + num(eps) + ": EC direct " + num(direct.ec, 8) + ", series:" +
                           std::to_string(order) + " " + num(series.ec, 8) + " (rel. gap " + num(series_gap, 3) +
                           "), mc " + num(mc.evaluation.ec, 8));
  result.summary.push_back("mc inner expectation " + num(mc.estimate.mean, 8) + " +- " + num(se, 3) +
                           " vs direct " + num(direct.inner_expectation, 8) + ": z = " + num(z, 3) +
                           (within ? " (within 3 standard errors)" : " (outside 3 standard errors)"));
  return result;
}

}  // namespace ecfb::cli
