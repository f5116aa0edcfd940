#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "activelab/error.hpp"
#include "activelab/learner.hpp"
#include "activelab/simdata.hpp"
#include "test_support.hpp"

using namespace activelab;

namespace {

const std::vector<std::size_t> kFlash = {123, 353, 43,  250, 115, 22,  345,  507, 20,  2404, 207, 331,
                                         753, 380, 252, 3059, 1000, 557, 6882, 927, 39, 1771, 1199, 276,
                                         39,  2254, 411, 79,  556, 4211, 30,  594, 170, 552};

GenConfig small_config() {
  GenConfig g;
  g.populations = parse_populations("30,20,40");
  g.dim = 4;
  g.seed = 9;
  return g;
}

}  // namespace

TEST(Populations, FlashProfile) {
  const auto p = ClassPopulations::flash();
  EXPECT_EQ(p.counts, kFlash);
  EXPECT_EQ(p.total(), 30711u);
  EXPECT_EQ(p.num_classes(), 34u);
  EXPECT_EQ(*std::min_element(p.counts.begin(), p.counts.end()), 20u);
  EXPECT_EQ(p.counts[8], 20u);
  EXPECT_EQ(p.counts[18], 6882u);
}

TEST(Populations, Parsing) {
  EXPECT_EQ(parse_populations("flash"), ClassPopulations::flash());
  EXPECT_EQ(parse_populations("5,5").counts, (std::vector<std::size_t>{5, 5}));
  EXPECT_THROW(parse_populations("5,,5"), ConfigError);
  EXPECT_THROW(parse_populations("5,0"), ConfigError);
  EXPECT_THROW(parse_populations("x"), ConfigError);
}

TEST(Generate, FlashProfileCountsAndHistogram) {
  const Dataset ds = generate_synthetic(GenConfig{});
  EXPECT_EQ(ds.size(), 30711u);
  EXPECT_EQ(ds.num_classes(), 34u);
  EXPECT_EQ(ds.dim(), 32u);
  EXPECT_EQ(ds.class_histogram(), kFlash);
}

TEST(Generate, TinyProfile) {
  GenConfig g;
  g.populations = parse_populations("5,5");
  g.dim = 2;
  g.seed = 1;
  const Dataset ds = generate_synthetic(g);
  EXPECT_EQ(ds.size(), 10u);
  EXPECT_EQ(ds.class_histogram(), (std::vector<std::size_t>{5, 5}));
}

TEST(Generate, DeterministicAndSeedSensitive) {
  const GenConfig g = small_config();
  EXPECT_EQ(generate_synthetic(g), generate_synthetic(g));
  GenConfig other = g;
  other.seed = 10;
  EXPECT_NE(generate_synthetic(g), generate_synthetic(other));
}

TEST(Generate, ValidatesConfig) {
  GenConfig g;
  g.dim = 1;
  EXPECT_THROW(g.validate(), ConfigError);
  g = {};
  g.separation = 0.0;
  EXPECT_THROW(g.validate(), ConfigError);
  g = {};
  g.spread = -1.0;
  EXPECT_THROW(g.validate(), ConfigError);
}

TEST(Generate, ClassMeansSitOnTheSeparationSphere) {
  GenConfig g;
  g.populations = parse_populations("4000,4000");
  g.dim = 3;
  g.separation = 5.0;
  g.spread = 0.5;
  const Dataset ds = generate_synthetic(g);
  for (ClassId c = 0; c < 2; ++c) {
    std::vector<double> mean(3, 0.0);
    for (const auto& e : ds.examples())
      if (e.true_label == c)
        for (std::size_t j = 0; j < 3; ++j) mean[j] += e.features[j] / 4000.0;
    const double r = std::sqrt(std::inner_product(mean.begin(), mean.end(), mean.begin(), 0.0));
    EXPECT_NEAR(r, 5.0, 0.05);
  }
}

TEST(Generate, WellSeparatedClassesAreLearnable) {
  GenConfig g;
  g.populations = parse_populations("200,200,200,200,200");
  g.dim = 8;
  g.separation = 10.0;
  g.spread = 0.1;
  const Dataset ds = generate_synthetic(g);
  // Nearest-mean oracle on the true means estimated from all data.
  std::vector<std::vector<double>> means(5, std::vector<double>(8, 0.0));
  for (const auto& e : ds.examples())
    for (std::size_t j = 0; j < 8; ++j) means[e.true_label][j] += e.features[j] / 200.0;
  std::size_t oracle_ok = 0;
  for (const auto& e : ds.examples()) {
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t c = 0; c < 5; ++c) {
      double d = 0.0;
      for (std::size_t j = 0; j < 8; ++j) d += (e.features[j] - means[c][j]) * (e.features[j] - means[c][j]);
      if (d < best_d) best_d = d, best = c;
    }
    oracle_ok += best == e.true_label;
  }
  EXPECT_EQ(oracle_ok, ds.size());

  LabeledSet train_set(8);
  std::size_t ok = 0, tested = 0;
  const std::size_t cut = ds.size() * 4 / 5;
  for (std::size_t i = 0; i < cut; ++i) train_set.add(ds[i].features, ds[i].true_label);
  const Model m = train({}, train_set, 5, 3);
  for (std::size_t i = cut; i < ds.size(); ++i, ++tested)
    ok += argmax(predict_proba(m, ds[i].features)) == ds[i].true_label;
  EXPECT_GE(static_cast<double>(ok) / static_cast<double>(tested), 0.99);
}

TEST(Partition, FlashProfileSplit) {
  const Dataset ds = generate_synthetic(GenConfig{});
  const Partition p = partition(ds, 10, 4);
  EXPECT_EQ(p.test.size(), 340u);
  EXPECT_EQ(p.train.size(), 30371u);
  for (std::size_t c : p.test.class_histogram()) EXPECT_EQ(c, 10u);
  EXPECT_EQ(p.train.class_histogram()[8], 10u);
}

TEST(Partition, PreservesMultisetAndIsDeterministic) {
  const Dataset ds = generate_synthetic(small_config());
  const Partition a = partition(ds, 5, 1);
  const Partition b = partition(ds, 5, 1);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(partition(ds, 5, 2).test, a.test);
  std::vector<SampleId> origins = a.train_origin;
  origins.insert(origins.end(), a.test_origin.begin(), a.test_origin.end());
  std::sort(origins.begin(), origins.end());
  for (std::size_t i = 0; i < origins.size(); ++i) ASSERT_EQ(origins[i], i);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[static_cast<SampleId>(i)].features, ds[a.train_origin[i]].features);
    EXPECT_EQ(a.train[static_cast<SampleId>(i)].id, i);
  }
}

TEST(Partition, TestMembershipIsUniform) {
  // Each member of a 4-element class lands in a 2-element test draw with
  // probability 1/2.
  GenConfig g;
  g.populations = parse_populations("4,4");
  g.dim = 2;
  const Dataset ds = generate_synthetic(g);
  std::map<SampleId, int> hits;
  const int trials = 4000;
  for (int s = 0; s < trials; ++s)
    for (SampleId id : partition(ds, 2, static_cast<std::uint64_t>(s)).test_origin) ++hits[id];
  for (SampleId id = 0; id < 8; ++id) EXPECT_NEAR(hits[id] / double(trials), 0.5, 0.04);
}

TEST(Partition, ClassTooSmall) {
  try {
    partition(generate_synthetic(GenConfig{}), 25, 0);
    FAIL();
  } catch (const ClassTooSmall& e) {
    EXPECT_EQ(e.class_index(), 5u);
  }
}

TEST(DatasetCsv, RoundTripIsBitExact) {
  testkit::TempDir dir("csv");
  const Dataset ds = generate_synthetic(small_config());
  save_dataset(ds, dir / "d.csv");
  EXPECT_EQ(load_dataset(dir / "d.csv", 3), ds);
  EXPECT_EQ(load_dataset(dir / "d.csv"), ds);
}

TEST(DatasetCsv, FlashRoundTrip) {
  testkit::TempDir dir("csvflash");
  const Dataset ds = generate_synthetic(GenConfig{});
  save_dataset(ds, dir / "d.csv");
  EXPECT_EQ(load_dataset(dir / "d.csv"), ds);
}

TEST(DatasetCsv, FormatErrors) {
  auto parse = [](const std::string& text, std::optional<std::size_t> k = std::nullopt) {
    std::istringstream in(text);
    return read_dataset_csv(in, k);
  };
  try {
    parse("id,label,f0\n0,0,1.5\n1,3,2\n", 2);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse("id,label,x\n0,0,1\n"), FormatError);
  EXPECT_THROW(parse("id,label,f0\n0,0,abc\n"), FormatError);
  EXPECT_THROW(parse("id,label,f0\n0,0,1\n0,1,2\n"), FormatError);
  EXPECT_THROW(parse("id,label,f0\n0,0\n"), FormatError);
  EXPECT_THROW(load_dataset("/nonexistent/file.csv"), IoError);
}

TEST(DatasetCsv, ExternalFileWithSparseIdsLoads) {
  std::istringstream in("id,label,f0,f1\n17,1,0.5,-1\n4,0,2,3e-3\n");
  const Dataset ds = read_dataset_csv(in);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.num_classes(), 2u);
  EXPECT_EQ(ds[0].true_label, 1u);
  EXPECT_EQ(ds[1].features[1], 3e-3);
}
