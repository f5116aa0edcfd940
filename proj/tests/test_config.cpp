#include <gtest/gtest.h>

#include "activelab/config.hpp"
#include "activelab/error.hpp"

using namespace activelab;
using nlohmann::json;

TEST(Config, DefaultsFromMinimalDocument) {
  const auto c = parse_experiment_config(json{{"schema_version", 1}});
  EXPECT_EQ(c, ExperimentConfig{});
  EXPECT_EQ(c.batch_size, 204u);
  EXPECT_EQ(c.runs, 5u);
  EXPECT_EQ(c.per_class_test, 10u);
  EXPECT_EQ(c.smoothing_window, 10u);
}

TEST(Config, FullDocument) {
  const json j = json::parse(R"({
    "schema_version": 1, "strategy": "galaxy", "batch_size": 50, "budget": 500,
    "learner": {"kind": "mlp-1hidden", "hidden_units": 8, "epochs": 5, "learning_rate": 0.05,
                "minibatch_size": 16, "l2": 0.0, "init_seed": 3},
    "oracle": {"flops_per_query": 1e6, "unit_cost_per_query": 0.25},
    "data": {"populations": [30, 40], "dim": 4, "separation": 2.5, "spread": 0.5, "seed": 11},
    "per_class_test": 3, "runs": 2, "base_seed": 100, "smoothing_window": 3,
    "min_queries_target": 5, "accuracy_targets": [0.5, 0.75]})");
  const auto c = parse_experiment_config(j);
  EXPECT_EQ(c.strategy, "galaxy");
  EXPECT_EQ(c.learner.kind, ModelKind::Mlp1Hidden);
  EXPECT_EQ(c.learner.hidden_units, 8u);
  EXPECT_EQ(c.oracle.unit_cost_per_query, 0.25);
  const auto& g = std::get<GenConfig>(c.data);
  EXPECT_EQ(g.populations.counts, (std::vector<std::size_t>{30, 40}));
  EXPECT_EQ(g.seed, 11u);
  EXPECT_EQ(c.accuracy_targets, (std::vector<double>{0.5, 0.75}));
  EXPECT_EQ(parse_experiment_config(to_json(c)), c);
}

TEST(Config, Presets) {
  const auto c = parse_experiment_config(json{{"schema_version", 1}, {"data", "flash-default"}});
  EXPECT_EQ(std::get<GenConfig>(c.data), GenConfig{});
  EXPECT_THROW(parse_experiment_config(json{{"schema_version", 1}, {"data", "mnist"}}), ConfigError);
}

TEST(Config, DatasetPathResolvesAgainstBaseDir) {
  const auto c = parse_experiment_config(
      json{{"schema_version", 1}, {"data", {{"path", "d.csv"}, {"num_classes", 4}}}}, "/cfg");
  const auto& f = std::get<DatasetFile>(c.data);
  EXPECT_EQ(f.path, std::filesystem::path("/cfg/d.csv"));
  EXPECT_EQ(f.num_classes, 4u);
}

TEST(Config, StrictValidation) {
  EXPECT_THROW(parse_experiment_config(json{{"strategy", "random"}}), ConfigError);
  EXPECT_THROW(parse_experiment_config(json{{"schema_version", 2}}), ConfigError);
  EXPECT_THROW(parse_experiment_config(json{{"schema_version", 1}, {"batchsize", 5}}), ConfigError);
  EXPECT_THROW(parse_experiment_config(json{{"schema_version", 1}, {"learner", {{"epoch", 5}}}}),
               ConfigError);
  EXPECT_THROW(parse_experiment_config(json{{"schema_version", 1}, {"batch_size", -1}}), ConfigError);
  EXPECT_THROW(parse_experiment_config(json{{"schema_version", 1}, {"batch_size", "x"}}), ConfigError);
  EXPECT_THROW(parse_experiment_config(json{{"schema_version", 1}, {"runs", 0}}), ConfigError);
  EXPECT_THROW(parse_experiment_config(json::array()), ConfigError);
  try {
    parse_experiment_config(json{{"schema_version", 1}, {"strategy", "unknown"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("galaxy"), std::string::npos);
  }
}

TEST(Config, CompareDocument) {
  const json j = json::parse(R"({"schema_version": 1, "budget": 400, "batch_size": 40,
    "strategies": ["random", {"strategy": "galaxy"}]})");
  const auto cs = parse_compare_config(j);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].strategy, "random");
  EXPECT_EQ(cs[1].strategy, "galaxy");
  EXPECT_EQ(cs[1].budget, 400u);
  EXPECT_THROW(parse_compare_config(json{{"schema_version", 1}}), ConfigError);
  EXPECT_THROW(parse_compare_config(json{{"schema_version", 1},
                                         {"strategy", "random"},
                                         {"strategies", {"random", "galaxy"}}}),
               ConfigError);
  EXPECT_THROW(parse_compare_config(json{{"schema_version", 1}, {"strategies", {1, 2}}}), ConfigError);
}

TEST(Config, ReadJsonFileErrors) {
  EXPECT_THROW(read_json_file("/nonexistent/config.json"), IoError);
}
