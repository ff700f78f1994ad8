#include "ecfb/cli/app.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "ecfb/cli/commands.hpp"
#include "ecfb/cli/config.hpp"
#include "ecfb/cli/figures.hpp"
#include "ecfb/errors.hpp"

namespace ecfb::cli {

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string method;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  unsigned jobs = 1;
  CLI::Option* seed_option = nullptr;
  CLI::Option* samples_option = nullptr;
};

void add_run_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON scenario config")->required();
  sub->add_option("--out", f.out, "CSV output path (default: config output, else stdout)");
  sub->add_option("--method", f.method, "series:M | direct | mc");
  f.seed_option = sub->add_option("--seed", f.seed, "Monte Carlo seed");
  f.samples_option = sub->add_option("--samples", f.samples, "Monte Carlo sample count");
  sub->add_option("--jobs", f.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
}

ScenarioConfig resolve(const Flags& f) {
  ScenarioConfig cfg = load_config(f.config);
  if (!f.method.empty()) {
    try {
      cfg.method = EcMethod::parse(f.method);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("--method: ") + e.what());
    }
  }
  if (f.seed_option != nullptr && f.seed_option->count() > 0) cfg.monte_carlo.seed = f.seed;
  if (f.samples_option != nullptr && f.samples_option->count() > 0) cfg.monte_carlo.samples = f.samples;
  if (cfg.method.kind == EcMethod::Kind::monte_carlo) {
    cfg.method = EcMethod::monte_carlo(cfg.monte_carlo.samples, cfg.monte_carlo.seed);
  }
  cfg.validate();
  if (!f.out.empty()) cfg.output_path = f.out;
  return cfg;
}

void emit(const CsvTable& table, const std::vector<std::string>& summary, const std::string& path,
          std::ostream& out, std::ostream& err) {
  if (path.empty()) {
    table.write(out);
    for (const auto& line : summary) err << line << '\n';
    return;
  }
  try {
    table.save(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("--out: ") + e.what());
  }
  for (const auto& line : summary) out << line << '\n';
  out << "wrote " << path << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Effective capacity of finite-blocklength nodes on block-fading collision channels", "ecfb"};
  app.require_subcommand(1);

  Flags ec_flags, opt_flags, sweep_flags, comp_flags, mc_flags;
  auto* ec = app.add_subcommand("ec", "EC at the configured epsilon, or at epsilon* when absent");
  add_run_flags(ec, ec_flags);
  auto* opt = app.add_subcommand("epsilon-opt", "EC-maximizing error probability");
  add_run_flags(opt, opt_flags);
  auto* sweep = app.add_subcommand("sweep", "evaluate the configured sweep axis");
  add_run_flags(sweep, sweep_flags);
  auto* comp = app.add_subcommand("compensate", "collision compensation plan");
  std::string strategy;
  comp->add_option("strategy", strategy, "power | graceful | joint")
      ->required()
      ->check(CLI::IsMember({"power", "graceful", "joint"}));
  add_run_flags(comp, comp_flags);
  auto* mc = app.add_subcommand("mc-validate", "Monte Carlo against direct quadrature and the series");
  add_run_flags(mc, mc_flags);

  auto* fig = app.add_subcommand("figure", "write the dataset of one figure");
  std::string figure_id;
  std::string figure_dir = ".";
  std::string figure_method;
  unsigned figure_jobs = 1;
  fig->add_option("id", figure_id, "fig2 | fig3 | fig4 | fig5 | fig6")->required();
  fig->add_option("--out", figure_dir, "output directory");
  fig->add_option("--method", figure_method, "EC method of fig2: series:M | direct");
  fig->add_option("--jobs", figure_jobs, "worker threads")->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*fig) {
      FigureOptions options{figure_jobs, std::nullopt};
      if (!figure_method.empty()) {
        try {
          options.method = EcMethod::parse(figure_method);
        } catch (const DomainError& e) {
          throw ConfigError(std::string("--method: ") + e.what());
        }
      }
      const auto data = make_figure(figure_id, options);
      std::filesystem::create_directories(figure_dir);
      const std::string path = (std::filesystem::path(figure_dir) / (data.id + ".csv")).string();
      emit(data.table, data.summary, path, out, err);
      return kExitOk;
    }
    if (*ec) {
      const auto cfg = resolve(ec_flags);
      const auto r = run_ec(cfg, ec_flags.jobs);
      emit(r.table, r.summary, cfg.output_path, out, err);
    } else if (*opt) {
      const auto cfg = resolve(opt_flags);
      const auto r = run_epsilon_opt(cfg, opt_flags.jobs);
      emit(r.table, r.summary, cfg.output_path, out, err);
    } else if (*sweep) {
      const auto cfg = resolve(sweep_flags);
      const auto r = run_sweep(cfg, sweep_flags.jobs);
      emit(r.table, r.summary, cfg.output_path, out, err);
    } else if (*comp) {
      const auto cfg = resolve(comp_flags);
      const Strategy s = strategy == "power"      ? Strategy::power_control
                         : strategy == "graceful" ? Strategy::graceful_theta
                                                  : Strategy::joint;
      const auto r = run_compensate(cfg, s, comp_flags.jobs);
      emit(r.table, r.summary, cfg.output_path, out, err);
    } else if (*mc) {
      const auto cfg = resolve(mc_flags);
      const auto r = run_mc_validate(cfg, mc_flags.jobs);
      emit(r.table, r.summary, cfg.output_path, out, err);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << " (best estimate " << e.best_estimate() << ", error bound "
        << e.error_bound() << ")\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace ecfb::cli
