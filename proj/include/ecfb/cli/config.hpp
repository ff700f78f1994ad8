#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ecfb/channel.hpp"
#include "ecfb/compensation.hpp"
#include "ecfb/effective_capacity.hpp"

namespace ecfb::cli {

/// Invalid configuration; the message starts with the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

struct SweepAxis {
  std::string variable;
  std::optional<double> min;
  std::optional<double> max;
  int points = 2;
  bool log_spacing = false;
};

struct MonteCarloSettings {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  unsigned shards = 16;
};

struct ScenarioConfig {
  NetworkScenario scenario;
  bool snr_in_db = false;  ///< sweep bounds on snr follow the config unit
  std::optional<double> epsilon;  ///< absent: optimize
  EcMethod method = EcMethod::series(2);
  MonteCarloSettings monte_carlo;
  std::optional<QosTarget> qos;
  std::optional<JointPriorities> priorities;
  std::optional<SweepAxis> sweep;
  std::string output_path;

  /// Throws ConfigError.
  void validate() const;
};

/// Parses and validates a version-1 config document.
ScenarioConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON file and parses it. Throws ConfigError on I/O or syntax errors.
ScenarioConfig load_config(const std::string& path);

double db_to_linear(double db);

}  // namespace ecfb::cli
