#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "activelab/artifacts.hpp"
#include "activelab/error.hpp"
#include "activelab/harness.hpp"
#include "activelab/seed.hpp"

using namespace activelab;

namespace {

ExperimentConfig small_config(const std::string& strategy = "galaxy") {
  ExperimentConfig c;
  c.strategy = strategy;
  GenConfig g;
  g.populations = parse_populations("40,25,60,15");
  g.dim = 4;
  g.separation = 2.0;
  g.seed = 3;
  c.data = g;
  c.per_class_test = 5;
  c.batch_size = 12;
  c.budget = 70;
  c.runs = 3;
  c.learner.epochs = 8;
  c.smoothing_window = 3;
  return c;
}

RunResult fake_run(std::vector<double> accuracy, std::vector<std::size_t> min_queries = {}) {
  RunResult r;
  for (std::size_t i = 0; i < accuracy.size(); ++i) {
    IterationRecord rec;
    rec.iteration = i + 1;
    rec.labels_acquired = 10 * (i + 1);
    rec.test_accuracy = accuracy[i];
    rec.per_class_min_queries = i < min_queries.size() ? min_queries[i] : 0;
    r.iterations.push_back(rec);
  }
  return r;
}

}  // namespace

TEST(Smooth, DefiningExamples) {
  const std::vector<double> flat(50, 0.5);
  for (double v : smooth(flat, 10)) EXPECT_DOUBLE_EQ(v, 0.5);
  const std::vector<double> x{0.3, 0.9, 0.1};
  EXPECT_EQ(smooth(x, 1), x);
  std::vector<double> alt(20);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<double>(i % 2);
  const auto s = smooth(alt, 2);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) EXPECT_DOUBLE_EQ(s[i], 0.5);
  EXPECT_THROW(smooth(x, 0), ConfigError);
}

TEST(Smooth, MatchesDirectWindowMean) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(37);
  for (auto& v : c) v = u(rng);
  for (std::size_t w = 1; w <= 12; ++w) {
    const auto s = smooth(c, w);
    ASSERT_EQ(s.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const long lo = std::max(0L, static_cast<long>(i) - static_cast<long>((w - 1) / 2));
      const long hi = std::min<long>(static_cast<long>(c.size()) - 1, static_cast<long>(i + w / 2));
      double sum = 0.0;
      for (long j = lo; j <= hi; ++j) sum += c[static_cast<std::size_t>(j)];
      ASSERT_NEAR(s[i], sum / static_cast<double>(hi - lo + 1), 1e-15);
    }
  }
}

TEST(Metrics, PerClassMinQueries) {
  PoolState pool(12);
  EXPECT_EQ(per_class_min_queries(pool, 3), 0u);
  const std::vector<ClassId> labels{0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 2, 2};
  for (SampleId i = 0; i < 12; ++i) pool.mark_labeled(i, labels[i], 1);
  EXPECT_EQ(per_class_min_queries(pool, 3), 2u);
  EXPECT_EQ(per_class_min_queries(pool, 4), 0u);
}

TEST(Metrics, AccuracyOfPerfectAndUniformModels) {
  // One-hot weights on a dataset whose features are the class indicators.
  std::vector<Example> ex;
  for (SampleId i = 0; i < 12; ++i) {
    std::vector<double> f(3, 0.0);
    f[i % 3] = 1.0;
    ex.push_back({i, f, i % 3});
  }
  const Dataset test(3, 3, ex);
  std::vector<double> theta(12, 0.0);
  for (std::size_t c = 0; c < 3; ++c) theta[c * 3 + c] = 5.0;
  EXPECT_DOUBLE_EQ(accuracy(Model({}, 3, 3, theta), test), 1.0);
  // Uniform predictions: argmax tie goes to class 0.
  EXPECT_DOUBLE_EQ(accuracy(Model::zeros({}, 3, 3), test), 1.0 / 3.0);
}

TEST(Aggregate, MeanAndStandardError) {
  const std::vector<RunResult> same(5, fake_run({0.6}));
  auto agg = aggregate(same, ExperimentConfig{});
  EXPECT_DOUBLE_EQ(agg.mean_accuracy[0], 0.6);
  EXPECT_DOUBLE_EQ(agg.stderr_accuracy[0], 0.0);

  const std::vector<RunResult> two{fake_run({0.5}), fake_run({0.7})};
  agg = aggregate(two, ExperimentConfig{});
  EXPECT_NEAR(agg.mean_accuracy[0], 0.6, 1e-15);
  EXPECT_NEAR(agg.stderr_accuracy[0], 0.1, 1e-15);

  const std::vector<RunResult> single{fake_run({0.1, 0.4})};
  agg = aggregate(single, ExperimentConfig{});
  EXPECT_EQ(agg.stderr_accuracy, (std::vector<double>{0.0, 0.0}));
}

TEST(Aggregate, LabelsToReachUsesSmoothedMean) {
  ExperimentConfig c;
  c.smoothing_window = 1;
  c.accuracy_targets = {0.5, 2.0};
  const std::vector<RunResult> runs{fake_run({0.2, 0.4, 0.6, 0.8})};
  const auto agg = aggregate(runs, c);
  ASSERT_EQ(agg.labels_to_reach.size(), 2u);
  EXPECT_EQ(agg.labels_to_reach[0].labels, 30u);
  EXPECT_EQ(agg.labels_to_reach[1].labels, std::nullopt);
}

TEST(Aggregate, GridMismatch) {
  const std::vector<RunResult> runs{fake_run({0.2, 0.4}), fake_run({0.2})};
  EXPECT_THROW(aggregate(runs, ExperimentConfig{}), GridMismatch);
}

TEST(Aggregate, MinQueriesSummaryCensorsUnreachedRuns) {
  const std::vector<RunResult> runs{fake_run({0, 0, 0}, {1, 2, 3}), fake_run({0, 0, 0}, {0, 1, 1})};
  const auto row = min_queries_summary("x", runs, 2);
  EXPECT_EQ(row.runs_reached, 1u);
  EXPECT_DOUBLE_EQ(row.mean_labels, (20.0 + 30.0) / 2.0);
}

TEST(RunExperiment, ProtocolInvariants) {
  for (const std::string s : {"random", "confidence", "galaxy"}) {
    const auto c = small_config(s);
    const Dataset ds = materialize_data(c);
    std::size_t prediction_rows = 0;
    RunHooks hooks;
    hooks.on_predictions = [&](std::size_t, const PredictionMatrix& p) {
      for (SampleId i = 0; i < p.rows(); ++i) ASSERT_TRUE(is_prob_vector(p.row(i)));
      prediction_rows += p.rows();
    };
    const RunResult r = run_experiment(c, ds, 1, hooks);
    ASSERT_EQ(r.iterations.size(), 6u) << s;  // 5 x 12 + 10
    for (std::size_t t = 0; t < r.iterations.size(); ++t) {
      const auto& rec = r.iterations[t];
      EXPECT_EQ(rec.iteration, t + 1);
      EXPECT_EQ(rec.labels_acquired, std::min<std::size_t>(12 * (t + 1), 70));
      EXPECT_EQ(rec.cumulative_flops, 3.35e7 * static_cast<double>(rec.labels_acquired));
      if (t > 0) {
        EXPECT_GE(rec.per_class_min_queries, r.iterations[t - 1].per_class_min_queries);
      }
    }
    EXPECT_EQ(r.query_log.size(), 70u);
    std::set<SampleId> unique;
    for (const auto& q : r.query_log) unique.insert(q.id);
    EXPECT_EQ(unique.size(), 70u);
    EXPECT_EQ(r.query_log.front().iteration, 1u);
    EXPECT_EQ(r.query_log.back().iteration, 6u);
    EXPECT_EQ(prediction_rows, 5u * (140 - 20));
    ASSERT_TRUE(r.final_model.has_value());
  }
}

TEST(RunExperiment, BudgetEqualToBatchIsOneRandomIteration) {
  auto c = small_config();
  c.budget = c.batch_size;
  const RunResult r = run_experiment(c, 0);
  ASSERT_EQ(r.iterations.size(), 1u);
  EXPECT_EQ(r.iterations[0].labels_acquired, c.batch_size);
  EXPECT_TRUE(r.iterations[0].strategy_diagnostics.empty());
}

TEST(RunExperiment, PoolExhaustionEndsTheRun) {
  auto c = small_config("confidence");
  c.budget = 10000;
  c.batch_size = 50;
  const RunResult r = run_experiment(c, 2);
  EXPECT_TRUE(r.pool_exhausted);
  EXPECT_EQ(r.iterations.back().labels_acquired, 140u - 20u);
  EXPECT_EQ(r.iterations.back().per_class_min_queries, 10u);
}

TEST(RunExperiment, DeterministicSerialization) {
  const auto c = small_config();
  const auto a = run_to_json(run_experiment(c, 4)).dump();
  const auto b = run_to_json(run_experiment(c, 4)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, run_to_json(run_experiment(c, 5)).dump());
}

TEST(RunExperiment, SharedSeedsGiveSamePartitionAndSeedBatch) {
  const Dataset ds = materialize_data(small_config());
  const auto a = run_experiment(small_config("random"), ds, 7);
  const auto b = run_experiment(small_config("galaxy"), ds, 7);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(a.query_log[i], b.query_log[i]);
  EXPECT_EQ(a.iterations[0].test_accuracy, b.iterations[0].test_accuracy);
}

TEST(RunAll, ParallelMatchesSerial) {
  const auto c = small_config();
  const Dataset ds = materialize_data(c);
  const auto serial = run_all(c, ds, 1);
  const auto parallel = run_all(c, ds, 3);
  ASSERT_EQ(serial.size(), 3u);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].seed, run_seed(c, i));
    EXPECT_EQ(run_to_json(serial[i]).dump(), run_to_json(parallel[i]).dump());
  }
}

TEST(Compare, Validation) {
  const auto r = small_config("random");
  const auto g = small_config("galaxy");
  EXPECT_NO_THROW(validate_comparable(std::vector{r, g}));
  EXPECT_THROW(validate_comparable(std::vector{r}), ConfigError);
  EXPECT_THROW(validate_comparable(std::vector{r, r}), ConfigError);
  auto other = g;
  other.budget = 48;
  EXPECT_THROW(validate_comparable(std::vector{r, other}), GridMismatch);
  other = g;
  other.learner.epochs = 3;
  try {
    validate_comparable(std::vector{r, other});
    FAIL();
  } catch (const GridMismatch&) {
    FAIL() << "learner difference is not a grid mismatch";
  } catch (const ConfigError&) {
  }
}

TEST(Compare, TablesAndDiversity) {
  const std::vector configs{small_config("random"), small_config("confidence"),
                            small_config("galaxy")};
  const auto cmp = compare(configs, 2);
  ASSERT_EQ(cmp.aggregates.size(), 3u);
  ASSERT_EQ(cmp.reductions.size(), 3u);
  for (const auto& row : cmp.reductions) EXPECT_EQ(row.target_name, "mid-range");
  EXPECT_EQ(cmp.reductions[0].reduction_vs_random_percent, 0.0);
  ASSERT_EQ(cmp.diversity.size(), 3u);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(cmp.runs[s][r].seed, run_seed(configs[s], r));
}
