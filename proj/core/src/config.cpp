#include "activelab/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <string_view>

#include "activelab/error.hpp"
#include "activelab/format.hpp"
#include "activelab/strategy.hpp"

namespace activelab {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::string_view where,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
  }
}

std::uint64_t get_uint(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
}

double get_number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

template <typename T>
void read_uint(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = static_cast<T>(get_uint(j, key));
}

void read_number(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = get_number(j, key);
}

LearnerConfig parse_learner(const json& j) {
  if (!j.is_object()) throw ConfigError("'learner' must be an object");
  reject_unknown_keys(j, "learner",
                      {"kind", "hidden_units", "epochs", "learning_rate", "minibatch_size", "l2",
                       "init_seed"});
  LearnerConfig c;
  if (j.contains("kind")) c.kind = parse_model_kind(get_string(j, "kind"));
  read_uint(j, "hidden_units", c.hidden_units);
  read_uint(j, "epochs", c.epochs);
  read_number(j, "learning_rate", c.learning_rate);
  read_uint(j, "minibatch_size", c.minibatch_size);
  read_number(j, "l2", c.l2);
  read_uint(j, "init_seed", c.init_seed);
  return c;
}

OracleConfig parse_oracle(const json& j) {
  if (!j.is_object()) throw ConfigError("'oracle' must be an object");
  reject_unknown_keys(j, "oracle", {"flops_per_query", "unit_cost_per_query"});
  OracleConfig c;
  read_number(j, "flops_per_query", c.flops_per_query);
  read_number(j, "unit_cost_per_query", c.unit_cost_per_query);
  return c;
}

DataSource parse_data(const json& j, const std::filesystem::path& base_dir) {
  if (j.is_string()) {
    if (j.get<std::string>() == "flash-default") return GenConfig{};
    throw ConfigError("unknown data preset '" + j.get<std::string>() +
                      "' (expected flash-default or an object)");
  }
  if (!j.is_object()) throw ConfigError("'data' must be a preset name or an object");
  if (j.contains("path")) {
    reject_unknown_keys(j, "data", {"path", "num_classes"});
    DatasetFile f;
    f.path = get_string(j, "path");
    if (f.path.is_relative() && !base_dir.empty()) f.path = base_dir / f.path;
    if (j.contains("num_classes")) f.num_classes = get_uint(j, "num_classes");
    return f;
  }
  reject_unknown_keys(j, "data", {"populations", "dim", "separation", "spread", "seed"});
  GenConfig g;
  if (j.contains("populations")) {
    const json& p = j.at("populations");
    if (p.is_string()) {
      g.populations = parse_populations(p.get<std::string>());
    } else if (p.is_array()) {
      g.populations.counts.clear();
      for (const auto& v : p) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
          throw ConfigError("'populations' entries must be non-negative integers");
        g.populations.counts.push_back(v.get<std::size_t>());
      }
    } else {
      throw ConfigError("'populations' must be \"flash\" or an array of counts");
    }
  }
  read_uint(j, "dim", g.dim);
  read_number(j, "separation", g.separation);
  read_number(j, "spread", g.spread);
  read_uint(j, "seed", g.seed);
  return g;
}

constexpr std::array<std::string_view, 13> kExperimentKeys = {
    "schema_version", "strategy",       "batch_size",       "budget",
    "learner",        "oracle",         "data",             "per_class_test",
    "runs",           "base_seed",      "smoothing_window", "min_queries_target",
    "accuracy_targets"};

void check_schema(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("schema_version")) throw ConfigError("missing 'schema_version'");
  if (get_uint(j, "schema_version") != kConfigSchemaVersion)
    throw ConfigError("unsupported schema_version (expected " +
                      std::to_string(kConfigSchemaVersion) + ")");
}

}  // namespace

void ExperimentConfig::validate() const {
  make_strategy(strategy, 0);
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (budget < 1) throw ConfigError("budget must be at least 1");
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (smoothing_window < 1) throw ConfigError("smoothing_window must be at least 1");
  if (per_class_test < 1) throw ConfigError("per_class_test must be at least 1");
  for (double t : accuracy_targets)
    if (!std::isfinite(t)) throw ConfigError("accuracy targets must be finite");
  learner.validate();
  oracle.validate();
  if (const auto* g = std::get_if<GenConfig>(&data)) g->validate();
}

ExperimentConfig parse_experiment_config(const json& j, const std::filesystem::path& base_dir) {
  check_schema(j);
  ExperimentConfig c;
  for (const auto& item : j.items()) {
    if (std::find(kExperimentKeys.begin(), kExperimentKeys.end(), item.key()) ==
        kExperimentKeys.end())
      throw ConfigError("unknown key '" + item.key() + "' in experiment config");
  }
  try {
    if (j.contains("strategy")) c.strategy = get_string(j, "strategy");
    read_uint(j, "batch_size", c.batch_size);
    read_uint(j, "budget", c.budget);
    if (j.contains("learner")) c.learner = parse_learner(j.at("learner"));
    if (j.contains("oracle")) c.oracle = parse_oracle(j.at("oracle"));
    if (j.contains("data")) c.data = parse_data(j.at("data"), base_dir);
    read_uint(j, "per_class_test", c.per_class_test);
    read_uint(j, "runs", c.runs);
    read_uint(j, "base_seed", c.base_seed);
    read_uint(j, "smoothing_window", c.smoothing_window);
    read_uint(j, "min_queries_target", c.min_queries_target);
    if (j.contains("accuracy_targets")) {
      const json& t = j.at("accuracy_targets");
      if (!t.is_array()) throw ConfigError("'accuracy_targets' must be an array");
      for (const auto& v : t) {
        if (!v.is_number()) throw ConfigError("'accuracy_targets' entries must be numbers");
        c.accuracy_targets.push_back(v.get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<ExperimentConfig> parse_compare_config(const json& j,
                                                   const std::filesystem::path& base_dir) {
  check_schema(j);
  if (!j.contains("strategies") || !j.at("strategies").is_array())
    throw ConfigError("compare config needs a 'strategies' array");
  if (j.contains("strategy"))
    throw ConfigError("compare config takes 'strategies', not 'strategy'");
  json base = j;
  base.erase("strategies");
  std::vector<ExperimentConfig> out;
  for (const auto& entry : j.at("strategies")) {
    json merged = base;
    if (entry.is_string()) {
      merged["strategy"] = entry;
    } else if (entry.is_object()) {
      if (!entry.contains("strategy")) throw ConfigError("strategy entry without a 'strategy' name");
      for (const auto& item : entry.items()) merged[item.key()] = item.value();
    } else {
      throw ConfigError("'strategies' entries must be names or objects");
    }
    out.push_back(parse_experiment_config(merged, base_dir));
  }
  return out;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json learner = {{"kind", std::string(to_string(c.learner.kind))},
                  {"hidden_units", c.learner.hidden_units},
                  {"epochs", c.learner.epochs},
                  {"learning_rate", c.learner.learning_rate},
                  {"minibatch_size", c.learner.minibatch_size},
                  {"l2", c.learner.l2},
                  {"init_seed", c.learner.init_seed}};
  json data;
  if (const auto* g = std::get_if<GenConfig>(&c.data)) {
    data = {{"populations", g->populations.counts},
            {"dim", g->dim},
            {"separation", g->separation},
            {"spread", g->spread},
            {"seed", g->seed}};
  } else {
    const auto& f = std::get<DatasetFile>(c.data);
    data = {{"path", f.path.string()}};
    if (f.num_classes) data["num_classes"] = *f.num_classes;
  }
  return {{"schema_version", kConfigSchemaVersion},
          {"strategy", c.strategy},
          {"batch_size", c.batch_size},
          {"budget", c.budget},
          {"learner", learner},
          {"oracle",
           {{"flops_per_query", c.oracle.flops_per_query},
            {"unit_cost_per_query", c.oracle.unit_cost_per_query}}},
          {"data", data},
          {"per_class_test", c.per_class_test},
          {"runs", c.runs},
          {"base_seed", c.base_seed},
          {"smoothing_window", c.smoothing_window},
          {"min_queries_target", c.min_queries_target},
          {"accuracy_targets", c.accuracy_targets}};
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace activelab
