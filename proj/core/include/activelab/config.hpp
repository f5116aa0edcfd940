#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "activelab/learner.hpp"
#include "activelab/oracle.hpp"
#include "activelab/simdata.hpp"

namespace activelab {

inline constexpr int kConfigSchemaVersion = 1;

struct DatasetFile {
  std::filesystem::path path;
  std::optional<std::size_t> num_classes;

  friend bool operator==(const DatasetFile&, const DatasetFile&) = default;
};

using DataSource = std::variant<GenConfig, DatasetFile>;

struct ExperimentConfig {
  std::string strategy = "random";
  std::size_t batch_size = 204;
  std::size_t budget = 16320;
  LearnerConfig learner;
  OracleConfig oracle;
  DataSource data = GenConfig{};
  std::size_t per_class_test = 10;
  std::size_t runs = 5;
  std::uint64_t base_seed = 0;
  std::size_t smoothing_window = 10;
  /// Threshold for the "labels until every class has this many labels" metric.
  std::size_t min_queries_target = 10;
  std::vector<double> accuracy_targets;

  /// Throws ConfigError (including for an unknown strategy name).
  void validate() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Strict parse: unknown keys, a missing or unsupported schema_version and
/// wrongly typed values all raise ConfigError. Relative dataset paths are
/// resolved against `base_dir`.
ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir = {});

/// Compare configs carry the experiment keys (minus "strategy") plus a
/// "strategies" array whose entries are either a name or an object holding
/// "strategy" and any per-strategy overrides.
std::vector<ExperimentConfig> parse_compare_config(const nlohmann::json& j,
                                                   const std::filesystem::path& base_dir = {});

nlohmann::json to_json(const ExperimentConfig& config);

/// Reads and parses a file; JSON syntax errors become ConfigError, an
/// unreadable file IoError.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace activelab
