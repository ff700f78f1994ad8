#include "ecfb/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "ecfb/errors.hpp"

namespace ecfb::cli {

using nlohmann::json;

namespace {

const std::set<std::string>& sweep_variables() {
  static const std::set<std::string> names{"epsilon", "n_nodes",   "snr",
                                           "theta",   "blocklength", "bystander_op_sinr"};
  return names;
}

const json* find(const json& object, const std::string& key) {
  const auto it = object.find(key);
  return it == object.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& value, const std::string& field) {
  if (!value.is_number()) throw ConfigError(field + ": expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field + ": must be finite");
  return x;
}

long long integer(const json& value, const std::string& field) {
  if (value.is_number_integer()) return value.get<long long>();
  if (value.is_number_float()) {
    const double x = value.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
  }
  throw ConfigError(field + ": expected an integer");
}

std::string text(const json& value, const std::string& field) {
  if (!value.is_string()) throw ConfigError(field + ": expected a string");
  return value.get<std::string>();
}

const json& require(const json& object, const std::string& key, const std::string& prefix) {
  const json* v = find(object, key);
  if (v == nullptr) throw ConfigError(prefix + key + ": missing required field");
  return *v;
}

int bounded_int(long long v, const std::string& field) {
  if (v < -2'000'000'000LL || v > 2'000'000'000LL) throw ConfigError(field + ": out of range");
  return static_cast<int>(v);
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void ScenarioConfig::validate() const {
  try {
    scenario.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario.") + e.what());
  }
  if (epsilon && !(*epsilon > 0.0 && *epsilon <= 1.0)) {
    throw ConfigError("epsilon: must lie in (0, 1]");
  }
  if (method.kind == EcMethod::Kind::series && method.truncation_order < 0) {
    throw ConfigError("method: series order must be >= 0");
  }
  if (monte_carlo.samples < 1000) throw ConfigError("monte_carlo.samples: must be >= 1000");
  if (monte_carlo.shards < 1) throw ConfigError("monte_carlo.shards: must be >= 1");
  if (qos) {
    try {
      qos->validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (priorities) {
    try {
      priorities->validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (sweep) {
    if (!sweep_variables().contains(sweep->variable)) {
      throw ConfigError("sweep.variable: '" + sweep->variable +
                        "' is not one of epsilon, n_nodes, snr, theta, blocklength, bystander_op_sinr");
    }
    if (sweep->points < 2) throw ConfigError("sweep.points: must be >= 2");
    if (sweep->variable != "bystander_op_sinr" && (!sweep->min || !sweep->max)) {
      throw ConfigError("sweep.min: min and max are required for " + sweep->variable);
    }
    if (sweep->min && sweep->max && !(*sweep->min < *sweep->max)) {
      throw ConfigError("sweep.max: must be greater than sweep.min");
    }
    if (sweep->log_spacing && sweep->min && !(*sweep->min > 0.0)) {
      throw ConfigError("sweep.min: log spacing needs a positive minimum");
    }
  }
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  const json& version = require(doc, "schema_version", "");
  if (integer(version, "schema_version") != kSchemaVersion) {
    throw ConfigError("schema_version: unsupported version, expected " + std::to_string(kSchemaVersion));
  }

  ScenarioConfig cfg;
  const json& scenario = require(doc, "scenario", "");
  if (!scenario.is_object()) throw ConfigError("scenario: expected an object");
  cfg.scenario.n_nodes = bounded_int(integer(require(scenario, "n_nodes", "scenario."), "scenario.n_nodes"),
                                     "scenario.n_nodes");
  cfg.scenario.blocklength = bounded_int(
      integer(require(scenario, "blocklength", "scenario."), "scenario.blocklength"), "scenario.blocklength");
  cfg.scenario.delay_exponent =
      number(require(scenario, "delay_exponent", "scenario."), "scenario.delay_exponent");
  const double snr = number(require(scenario, "snr", "scenario."), "scenario.snr");
  std::string unit = "linear";
  if (const json* u = find(scenario, "snr_unit")) unit = text(*u, "scenario.snr_unit");
  if (unit == "linear") {
    cfg.scenario.snr = snr;
  } else if (unit == "db" || unit == "dB") {
    cfg.scenario.snr = db_to_linear(snr);
    cfg.snr_in_db = true;
  } else {
    throw ConfigError("scenario.snr_unit: expected 'linear' or 'dB'");
  }

  if (const json* e = find(doc, "epsilon")) cfg.epsilon = number(*e, "epsilon");
  if (const json* m = find(doc, "method")) {
    try {
      cfg.method = EcMethod::parse(text(*m, "method"));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (const json* mc = find(doc, "monte_carlo")) {
    if (!mc->is_object()) throw ConfigError("monte_carlo: expected an object");
    if (const json* v = find(*mc, "samples")) {
      const long long n = integer(*v, "monte_carlo.samples");
      if (n < 0) throw ConfigError("monte_carlo.samples: must be >= 1000");
      cfg.monte_carlo.samples = static_cast<std::uint64_t>(n);
    }
    if (const json* v = find(*mc, "seed")) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
        throw ConfigError("monte_carlo.seed: expected a non-negative integer");
      }
      cfg.monte_carlo.seed = v->get<std::uint64_t>();
    }
    if (const json* v = find(*mc, "shards")) {
      const long long n = integer(*v, "monte_carlo.shards");
      if (n < 1 || n > 4096) throw ConfigError("monte_carlo.shards: must lie in [1, 4096]");
      cfg.monte_carlo.shards = static_cast<unsigned>(n);
    }
  }
  if (cfg.method.kind == EcMethod::Kind::monte_carlo) {
    cfg.method = EcMethod::monte_carlo(cfg.monte_carlo.samples, cfg.monte_carlo.seed);
  }
  if (const json* q = find(doc, "qos")) {
    if (!q->is_object()) throw ConfigError("qos: expected an object");
    QosTarget target;
    target.outage_probability =
        number(require(*q, "outage_probability", "qos."), "qos.outage_probability");
    if (const json* d = find(*q, "max_delay")) target.max_delay = number(*d, "qos.max_delay");
    cfg.qos = target;
  }
  if (const json* p = find(doc, "priorities")) {
    if (!p->is_object()) throw ConfigError("priorities: expected an object");
    JointPriorities pr;
    pr.eta_alpha = number(require(*p, "eta_alpha", "priorities."), "priorities.eta_alpha");
    pr.eta_theta = number(require(*p, "eta_theta", "priorities."), "priorities.eta_theta");
    cfg.priorities = pr;
  }
  if (const json* s = find(doc, "sweep")) {
    if (!s->is_object()) throw ConfigError("sweep: expected an object");
    SweepAxis axis;
    axis.variable = text(require(*s, "variable", "sweep."), "sweep.variable");
    if (const json* v = find(*s, "min")) axis.min = number(*v, "sweep.min");
    if (const json* v = find(*s, "max")) axis.max = number(*v, "sweep.max");
    axis.points = bounded_int(integer(require(*s, "points", "sweep."), "sweep.points"), "sweep.points");
    if (const json* v = find(*s, "spacing")) {
      const std::string spacing = text(*v, "sweep.spacing");
      if (spacing != "linear" && spacing != "log") {
        throw ConfigError("sweep.spacing: expected 'linear' or 'log'");
      }
      axis.log_spacing = spacing == "log";
    }
    cfg.sweep = axis;
  }
  if (const json* o = find(doc, "output")) cfg.output_path = text(*o, "output");

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON in '") + path + "': " + e.what());
  }
  return parse_config(doc);
}

}  // namespace ecfb::cli
