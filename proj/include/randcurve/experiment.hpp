#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace randcurve {

struct ExperimentConfig {
  std::string experiment;
  nlohmann::json params;
  std::uint64_t seed = 0;
  std::uint64_t replicas = 1;
  std::string output;  // file path prefix

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
};

struct Report {
  std::vector<std::string> columns;                 // after experiment, seed, replicas
  std::vector<std::vector<std::string>> rows;       // preformatted cells
  nlohmann::json metadata;

  std::string csv(const ExperimentConfig& config) const;
  void write(const ExperimentConfig& config) const;  // <prefix>.csv, <prefix>.meta.json
};

// empty iff run() would accept the config; never mutates state
std::vector<std::string> validate(const ExperimentConfig& config);

// dispatches to the module pipeline; throws std::invalid_argument on
// validation failure and std::runtime_error on numeric failure
Report run(const ExperimentConfig& config);

// deterministic 17-significant-digit float formatting used in CSV cells
std::string format_double(double v);

}  // namespace randcurve
