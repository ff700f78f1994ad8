#include "ecfb/cli/figures.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "ecfb/channel.hpp"
#include "ecfb/cli/config.hpp"
#include "ecfb/compensation.hpp"
#include "ecfb/parallel.hpp"

namespace ecfb::cli {

namespace {

constexpr int kEpsilonPoints = 100;
constexpr double kEpsilonMin = 1e-3;
constexpr double kEpsilonMax = 0.5;
constexpr int kFig5Points = 24;
constexpr double kOutage = 1e-3;

std::string num(double x, int digits = 6) {
  std::ostringstream out;
  out.precision(digits);
  out << x;
  return out.str();
}

std::string epsilon_axis_comment() {
  return "x axis: epsilon, " + std::to_string(kEpsilonPoints) + " log-spaced points on [" + num(kEpsilonMin) +
         ", " + num(kEpsilonMax) + "]";
}

/// Evaluates every curve on the shared epsilon grid; values[c][i].
std::vector<std::vector<double>> ec_curves(const std::vector<std::function<double(double)>>& curves,
                                           const std::vector<double>& grid, unsigned jobs) {
  std::vector<std::vector<double>> values(curves.size(), std::vector<double>(grid.size()));
  parallel_for_ordered(curves.size() * grid.size(), jobs, [&](std::size_t k) {
    const std::size_t c = k / grid.size();
    const std::size_t i = k % grid.size();
    values[c][i] = curves[c](grid[i]);
  });
  return values;
}

FigureDataset fig2(const FigureOptions& options) {
  const int blocklength = 1000;
  const double snr = 2.0;
  const double theta = 0.01;
  const std::vector<int> nodes{1, 5, 10};
  const EcMethod method = options.method.value_or(EcMethod::series(2));
  if (method.kind == EcMethod::Kind::monte_carlo) {
    throw ConfigError("method: figures accept series:M or direct");
  }

  std::vector<std::string> header{"blocklength", "snr", "delay_exponent", "method", "epsilon"};
  std::vector<std::function<double(double)>> curves;
  for (int n : nodes) {
    header.push_back("ec_n" + std::to_string(n));
    const double sinr = sinr_collision(snr, n);
    curves.emplace_back([=](double eps) { return ec_evaluate(sinr, theta, eps, blocklength, method).ec; });
  }
  const auto grid = figure_epsilon_grid();
  const auto values = ec_curves(curves, grid, options.jobs);

  FigureDataset out{"fig2", CsvTable(header), {}};
  out.table.add_comment("fig2: per-node EC versus error probability for several node counts");
  out.table.add_comment(epsilon_axis_comment());
  out.table.add_comment("y axis: ec_n<N>, EC in bits per channel use with N colliding nodes");
  out.table.add_comment("fixed: blocklength 1000, snr 2 (linear), delay_exponent 0.01, method " + method.label());
  for (int n : nodes) {
    const auto opt = optimal_epsilon(sinr_collision(snr, n), theta, blocklength, method);
    const std::string line = "optimum N=" + std::to_string(n) + ": epsilon_star " + num(opt.epsilon_star) +
                             ", ec_max " + num(opt.ec_max);
    out.table.add_comment(line);
    out.summary.push_back(line);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto row = out.table.add_row();
    row << blocklength << snr << theta << method.label() << grid[i];
    for (const auto& curve : values) row << curve[i];
  }
  return out;
}

FigureDataset fig3(const FigureOptions& options) {
  const int blocklength = 1000;
  const double snr = 1.0;
  const std::vector<double> thetas{0.001, 0.1};
  const int n_min = 2;
  const int n_max = 20;
  const auto count = static_cast<std::size_t>(n_max - n_min + 1);

  std::vector<std::vector<double>> alpha(thetas.size(), std::vector<double>(count));
  parallel_for_ordered(thetas.size() * count, options.jobs, [&](std::size_t k) {
    const std::size_t t = k / count;
    const int n = n_min + static_cast<int>(k % count);
    alpha[t][k % count] = compensation_loss(snr, n, thetas[t], blocklength);
  });

  FigureDataset out{"fig3",
                    CsvTable({"blocklength", "snr", "n_nodes", "sinr_collision", "sinr_bystander",
                              "alpha_c_theta_0.001", "alpha_c_theta_0.1"}),
                    {}};
  out.table.add_comment("fig3: compensation loss factor alpha_c under full power control");
  out.table.add_comment("x axis: n_nodes from " + std::to_string(n_min) + " to " + std::to_string(n_max));
  out.table.add_comment("y axis: alpha_c_theta_<theta>, bystander EC_max after over before compensation");
  out.table.add_comment("fixed: blocklength 1000, snr 1 (linear), direct quadrature");
  for (std::size_t i = 0; i < count; ++i) {
    const int n = n_min + static_cast<int>(i);
    auto row = out.table.add_row();
    row << blocklength << snr << n << sinr_collision(snr, n) << bystander_sinr(snr, n) << alpha[0][i]
        << alpha[1][i];
  }
  out.summary.push_back("alpha_c at N=5: " + num(alpha[0][3]) + " (theta 0.001), " + num(alpha[1][3]) +
                        " (theta 0.1)");
  return out;
}

FigureDataset fig4(const FigureOptions& options) {
  const NetworkScenario scenario{5, 1.0, 1000, 0.05};
  const CompensationModel model(scenario);
  const auto plan = model.graceful();
  const double theta = scenario.delay_exponent;
  const double theta_i = plan.new_theta;
  const double rho = scenario.snr;
  const double rho_i = model.colliding_sinr();
  const int blocklength = scenario.blocklength;

  const std::vector<std::function<double(double)>> curves{
      [=](double eps) { return ec_direct(rho, theta, eps, blocklength).ec; },
      [=](double eps) { return ec_direct(rho_i, theta, eps, blocklength).ec; },
      [=](double eps) { return ec_direct(rho_i, theta_i, eps, blocklength).ec; },
  };
  const auto grid = figure_epsilon_grid();
  const auto values = ec_curves(curves, grid, options.jobs);

  const double ec_free = model.no_collision_optimum().ec_max;
  const double ec_collision = model.collision_optimum().ec_max;
  const double delay_before = max_delay(ec_collision, theta, kOutage);
  const double delay_after = max_delay(plan.recovered_ec, theta_i, kOutage);

  FigureDataset out{"fig4",
                    CsvTable({"n_nodes", "blocklength", "snr", "delay_exponent", "theta_i", "epsilon",
                              "ec_no_collision", "ec_collision", "ec_graceful"}),
                    {}};
  out.table.add_comment("fig4: graceful degradation of the delay exponent with 5 colliding nodes");
  out.table.add_comment(epsilon_axis_comment());
  out.table.add_comment("y axis: ec_no_collision (sinr rho, theta), ec_collision (sinr rho_i, theta), "
                        "ec_graceful (sinr rho_i, theta_i)");
  out.table.add_comment("fixed: n_nodes 5, blocklength 1000, snr 1 (linear), delay_exponent 0.05, direct quadrature");
  const std::vector<std::string> notes{
      "theta_i " + num(theta_i) + ", ec_max no collision " + num(ec_free) + ", graceful " +
          num(plan.recovered_ec) + ", collision " + num(ec_collision),
      "delay bound at outage 1e-3: " + num(delay_before) + " symbols colliding, " + num(delay_after) +
          " symbols after graceful degradation",
  };
  for (const auto& n : notes) {
    out.table.add_comment(n);
    out.summary.push_back(n);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto row = out.table.add_row();
    row << scenario.n_nodes << blocklength << rho << theta << theta_i << grid[i] << values[0][i] << values[1][i]
        << values[2][i];
  }
  return out;
}

FigureDataset fig5(const FigureOptions& options) {
  const int n_nodes = 5;
  const double snr = 1.0;
  const double theta = 0.1;
  const auto& blocklengths = fig5_blocklengths();
  const JointPriorities priorities{1.0, 1.0};

  std::vector<CompensationModel> models;
  for (int t : blocklengths) models.emplace_back(NetworkScenario{n_nodes, snr, t, theta});

  std::vector<std::vector<OperatingPoint>> points(blocklengths.size(),
                                                  std::vector<OperatingPoint>(kFig5Points));
  parallel_for_ordered(blocklengths.size() * kFig5Points, options.jobs, [&](std::size_t k) {
    const std::size_t c = k / kFig5Points;
    const std::size_t i = k % kFig5Points;
    const double lo = models[c].bystander_sinr();
    const double hi = models[c].colliding_sinr();
    const double x = i == 0 ? lo : i + 1 == kFig5Points ? hi : lo + (hi - lo) * i / (kFig5Points - 1.0);
    points[c][i] = models[c].operating_point(x, priorities);
  });

  std::vector<std::string> header{"n_nodes", "snr", "delay_exponent", "outage_probability", "grid_index"};
  for (int t : blocklengths) {
    const std::string s = "_T" + std::to_string(t);
    for (const char* name : {"bystander_sinr", "alpha_co", "theta_2", "max_delay_collision", "max_delay_recovered"}) {
      header.push_back(name + s);
    }
  }
  FigureDataset out{"fig5", CsvTable(header), {}};
  out.table.add_comment("fig5: trade-off between the power-control loss factor and the relaxed delay exponent");
  out.table.add_comment("x axis: alpha_co_T<T>; y axis: theta_2_T<T>; one column group per blocklength");
  out.table.add_comment("each group samples " + std::to_string(kFig5Points) +
                        " bystander operating SINRs evenly on [rho_s, rho_i]");
  out.table.add_comment("max_delay_* are delay bounds in symbols at outage 1e-3 before and after recovery");
  out.table.add_comment("fixed: n_nodes 5, snr 1 (linear), delay_exponent 0.1, direct quadrature");

  for (std::size_t i = 0; i < static_cast<std::size_t>(kFig5Points); ++i) {
    auto row = out.table.add_row();
    row << n_nodes << snr << theta << kOutage << static_cast<int>(i);
    for (std::size_t c = 0; c < blocklengths.size(); ++c) {
      const auto& p = points[c][i];
      const double before = max_delay(models[c].collision_optimum().ec_max, theta, kOutage);
      row << p.bystander_sinr << p.alpha;
      if (p.feasible) {
        row << p.theta_2 << before << max_delay(models[c].no_collision_optimum().ec_max, p.theta_2, kOutage);
      } else {
        row.blank() << before;
        row.blank();
      }
    }
  }
  for (std::size_t c = 0; c < blocklengths.size(); ++c) {
    const auto& curve = points[c];
    out.summary.push_back("T=" + std::to_string(blocklengths[c]) + ": alpha_co from " + num(curve.front().alpha) +
                          " to " + num(curve.back().alpha) + ", theta_2 from " + num(curve.front().theta_2) +
                          " to " + num(curve.back().theta_2));
  }
  return out;
}

FigureDataset fig6(const FigureOptions& options) {
  const NetworkScenario scenario{15, 2.0, 1000, 0.1};
  const JointPriorities priorities{1.0, 4.0};
  const CompensationModel model(scenario);
  const auto solution = model.optimize_joint(priorities, {64, options.jobs});
  const auto& plan = solution.plan;
  const double theta = scenario.delay_exponent;
  const int blocklength = scenario.blocklength;
  const double rho_i = model.colliding_sinr();
  const double rho_so = plan.bystander_sinr;
  const double recovering_sinr = sinr_with_interferers(plan.recovering_snr, scenario.snr, scenario.n_nodes);
  const double theta_2 = plan.new_theta;

  const std::vector<std::function<double(double)>> curves{
      [=](double eps) { return ec_direct(rho_i, theta, eps, blocklength).ec; },
      [=](double eps) { return ec_direct(rho_so, theta, eps, blocklength).ec; },
      [=](double eps) { return ec_direct(recovering_sinr, theta_2, eps, blocklength).ec; },
      [=](double eps) { return ec_direct(scenario.snr, theta, eps, blocklength).ec; },
  };
  const auto grid = figure_epsilon_grid();
  const auto values = ec_curves(curves, grid, options.jobs);

  FigureDataset out{"fig6",
                    CsvTable({"n_nodes", "blocklength", "snr", "delay_exponent", "eta_alpha", "eta_theta",
                              "rho_s_o", "rho_c_o", "theta_2", "epsilon", "ec_bystander_before",
                              "ec_bystander_after", "ec_recovering_after", "ec_no_collision"}),
                    {}};
  out.table.add_comment("fig6: per-node EC before and after joint compensation");
  out.table.add_comment(epsilon_axis_comment());
  out.table.add_comment("y axis: ec_bystander_before (sinr rho_i, theta), ec_bystander_after (sinr rho_s_o, theta), "
                        "ec_recovering_after (rho_c_o, theta_2), ec_no_collision (sinr rho, theta)");
  out.table.add_comment("fixed: n_nodes 15, blocklength 1000, snr 2 (linear), delay_exponent 0.1, "
                        "priorities 1 and 4, direct quadrature");
  const std::vector<std::string> notes{
      "joint optimum: rho_s_o " + num(rho_so) + ", rho_c_o " + num(plan.recovering_snr) + ", alpha_c_o " +
          num(plan.loss_factor) + ", theta_2 " + num(theta_2) + ", eta " + num(plan.objective_value),
      "bystander EC loss " + num(100.0 * (1.0 - plan.loss_factor), 4) + " %",
  };
  for (const auto& n : notes) {
    out.table.add_comment(n);
    out.summary.push_back(n);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto row = out.table.add_row();
    row << scenario.n_nodes << blocklength << scenario.snr << theta << priorities.eta_alpha << priorities.eta_theta
        << rho_so << plan.recovering_snr << theta_2 << grid[i];
    for (const auto& curve : values) row << curve[i];
  }
  return out;
}

using Builder = FigureDataset (*)(const FigureOptions&);

const std::map<std::string, Builder>& builders() {
  static const std::map<std::string, Builder> table{
      {"fig2", fig2}, {"fig3", fig3}, {"fig4", fig4}, {"fig5", fig5}, {"fig6", fig6}};
  return table;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig2", "fig3", "fig4", "fig5", "fig6"};
  return ids;
}

const std::vector<int>& fig5_blocklengths() {
  static const std::vector<int> values{500, 700, 1000, 2000};
  return values;
}

std::vector<double> figure_epsilon_grid() {
  std::vector<double> grid(kEpsilonPoints);
  const double ratio = std::log(kEpsilonMax / kEpsilonMin);
  for (int i = 0; i < kEpsilonPoints; ++i) {
    grid[static_cast<std::size_t>(i)] = kEpsilonMin * std::exp(ratio * i / (kEpsilonPoints - 1));
  }
  grid.back() = kEpsilonMax;
  return grid;
}

FigureDataset make_figure(const std::string& id, const FigureOptions& options) {
  const auto it = builders().find(id);
  if (it == builders().end()) {
    std::string valid;
    for (const auto& name : figure_ids()) valid += (valid.empty() ? "" : ", ") + name;
    throw ConfigError("figure: unknown id '" + id + "', valid ids are " + valid);
  }
  return it->second(options);
}

}  // namespace ecfb::cli
