// Copyright 2026 The FairGNN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "fairgnn/data_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <string>

#include "fairgnn/error.hpp"
#include "test_util.hpp"

namespace fairgnn {
namespace {

using testing::WarningCapture;

const std::string kFixtures = FAIRGNN_FIXTURES;

std::string Fixture(const std::string& name) { return kFixtures + "/" + name; }

std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fairgnn_data_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

Error Caught(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error raised";
  return Error(ErrorKind::kUndefined, "none");
}

bool SameDataset(const Dataset& a, const Dataset& b) {
  return a.features() == b.features() && a.labels() == b.labels() &&
         a.sensitive() == b.sensitive() && a.labeled() == b.labeled() &&
         Matrix(a.adjacency()) == Matrix(b.adjacency());
}

void ExpectSameReport(const MetricsReport& a, const MetricsReport& b) {
  EXPECT_EQ(a.bacc, b.bacc);
  EXPECT_EQ(a.auc, b.auc);
  EXPECT_EQ(a.f1, b.f1);
  EXPECT_EQ(a.delta_sp, b.delta_sp);
  EXPECT_EQ(a.delta_eo, b.delta_eo);
  EXPECT_EQ(a.cells, b.cells);
  EXPECT_EQ(a.evaluated, b.evaluated);
}

SyntheticConfig Small(std::size_t n, double rho, std::uint64_t seed) {
  SyntheticConfig c;
  c.n = n;
  c.label_attr_correlation = rho;
  c.intra_edge_prob = 0.001;
  c.inter_edge_prob = 0.001;
  c.feature_dim = 2;
  c.seed = seed;
  return c;
}

double BaseRateGap(const Dataset& d) {
  double pos[2] = {0, 0};
  double total[2] = {0, 0};
  for (std::size_t i = 0; i < d.num_nodes(); ++i) {
    const int s = *d.sensitive()[i];
    total[s] += 1;
    pos[s] += *d.labels()[i];
  }
  return pos[1] / total[1] - pos[0] / total[0];
}

TEST(LoadDatasetTest, SampleFixture) {
  const Dataset d = LoadDataset(Fixture("sample_nodes.csv"), Fixture("sample_edges.csv"));
  EXPECT_EQ(d.num_nodes(), 3u);
  EXPECT_EQ(d.num_features(), 2u);
  EXPECT_EQ(d.num_edges(), 2u);
  EXPECT_EQ(d.features()(0, 1), -1.25);
  EXPECT_EQ(d.features()(2, 1), 3.5);
  EXPECT_EQ(d.labels()[0], 1);
  EXPECT_FALSE(d.labels()[2].has_value());
  EXPECT_EQ(d.sensitive()[1], 1);
  EXPECT_EQ(d.labeled(), (IndexSet{0, 1}));
  EXPECT_EQ(d.adjacency().coeff(0, 1), 1.0);
  EXPECT_EQ(d.adjacency().coeff(2, 1), 1.0);
  EXPECT_EQ(d.adjacency().coeff(0, 2), 0.0);
}

TEST(LoadDatasetTest, SelfEdgeDroppedWithWarning) {
  WarningCapture warnings;
  std::size_t dropped = 0;
  const Dataset d =
      LoadDataset(Fixture("sample_nodes.csv"), Fixture("self_edge_edges.csv"), &dropped);
  EXPECT_EQ(dropped, 1u);
  EXPECT_EQ(d.num_edges(), 1u);
  ASSERT_EQ(warnings.messages.size(), 1u);
  EXPECT_NE(warnings.messages[0].find("self-edge 5,5"), std::string::npos);
  EXPECT_NE(warnings.messages[0].find(":3"), std::string::npos);
}

TEST(LoadDatasetTest, Errors) {
  const Error missing = Caught([] { LoadDataset(Fixture("nope.csv"), Fixture("sample_edges.csv")); });
  EXPECT_EQ(missing.kind(), ErrorKind::kIo);
  EXPECT_NE(std::string(missing.what()).find("nope.csv"), std::string::npos);

  const Error label = Caught(
      [] { LoadDataset(Fixture("bad_label_nodes.csv"), Fixture("sample_edges.csv")); });
  EXPECT_EQ(label.kind(), ErrorKind::kSchema);
  EXPECT_NE(std::string(label.what()).find("bad_label_nodes.csv:3"), std::string::npos);

  const Error number = Caught(
      [] { LoadDataset(Fixture("bad_number_nodes.csv"), Fixture("sample_edges.csv")); });
  EXPECT_EQ(number.kind(), ErrorKind::kIo);
  EXPECT_NE(std::string(number.what()).find("bad_number_nodes.csv:3"), std::string::npos);

  const Error unknown = Caught(
      [] { LoadDataset(Fixture("sample_nodes.csv"), Fixture("unknown_node_edges.csv")); });
  EXPECT_EQ(unknown.kind(), ErrorKind::kIo);
  EXPECT_NE(std::string(unknown.what()).find("unknown_node_edges.csv:3"), std::string::npos);
}

TEST(LoadDatasetTest, SaveLoadRoundTrip) {
  const auto dir = TempDir("roundtrip");
  const Dataset first = LoadDataset(Fixture("sample_nodes.csv"), Fixture("sample_edges.csv"));
  SaveDataset(first, dir / "n.csv", dir / "e.csv");
  const Dataset second = LoadDataset(dir / "n.csv", dir / "e.csv");
  EXPECT_TRUE(SameDataset(first, second));

  const Dataset synth = GenerateSynthetic(Small(200, 0.3, 4));
  SaveDataset(synth, dir / "sn.csv", dir / "se.csv");
  EXPECT_TRUE(SameDataset(synth, LoadDataset(dir / "sn.csv", dir / "se.csv")));
}

TEST(LoadDatasetTest, GermanShapedFile) {
  SyntheticConfig c = Small(1000, 0.2, 1);
  c.feature_dim = 27;
  const auto dir = TempDir("german");
  SaveDataset(GenerateSynthetic(c), dir / "n.csv", dir / "e.csv");
  const Dataset d = LoadDataset(dir / "n.csv", dir / "e.csv");
  EXPECT_EQ(d.num_nodes(), 1000u);
  const Splits s = MakeSplits(d, 100, 0);
  EXPECT_EQ(s.train.size(), 100u);
}

TEST(SyntheticTest, SeedDeterministic) {
  const SyntheticConfig c = Small(300, 0.4, 9);
  EXPECT_TRUE(SameDataset(GenerateSynthetic(c), GenerateSynthetic(c)));
  SyntheticConfig other = c;
  other.seed = 10;
  EXPECT_FALSE(SameDataset(GenerateSynthetic(c), GenerateSynthetic(other)));
}

TEST(SyntheticTest, ZeroCorrelationHasNoBaseRateGap) {
  const Dataset d = GenerateSynthetic(Small(10000, 0.0, 3));
  EXPECT_LT(std::abs(BaseRateGap(d)), 3.0 / std::sqrt(10000.0));
}

TEST(SyntheticTest, NoHomophilyWhenEdgeProbabilitiesMatch) {
  SyntheticConfig c = Small(3000, 0.0, 5);
  c.intra_edge_prob = c.inter_edge_prob = 0.01;
  const Dataset d = GenerateSynthetic(c);
  double n1 = 0;
  for (const Observation& s : d.sensitive()) n1 += *s;
  const double n = static_cast<double>(d.num_nodes());
  const double n0 = n - n1;
  const double expected = (n0 * (n0 - 1) + n1 * (n1 - 1)) / (n * (n - 1));
  double same = 0;
  double total = 0;
  for (Eigen::Index r = 0; r < d.adjacency().outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(d.adjacency(), r); it; ++it) {
      total += 1;
      same += d.sensitive()[static_cast<std::size_t>(r)] ==
              d.sensitive()[static_cast<std::size_t>(it.col())];
    }
  }
  const double frac = same / total;
  EXPECT_LT(std::abs(frac - expected), 4.0 * std::sqrt(expected * (1 - expected) / (total / 2)));
}

TEST(SyntheticTest, HomophilyWhenIntraExceedsInter) {
  SyntheticConfig c = Small(2000, 0.0, 5);
  c.intra_edge_prob = 0.02;
  c.inter_edge_prob = 0.002;
  const Dataset d = GenerateSynthetic(c);
  double same = 0;
  double total = 0;
  for (Eigen::Index r = 0; r < d.adjacency().outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(d.adjacency(), r); it; ++it) {
      total += 1;
      same += d.sensitive()[static_cast<std::size_t>(r)] ==
              d.sensitive()[static_cast<std::size_t>(it.col())];
    }
  }
  EXPECT_GT(same / total, 0.85);
}

TEST(SyntheticTest, GapIncreasesWithCorrelation) {
  double previous = -1.0;
  for (double rho : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      mean += std::abs(BaseRateGap(GenerateSynthetic(Small(5000, rho, seed)))) / 20.0;
    }
    EXPECT_GT(mean, previous) << "rho " << rho;
    EXPECT_NEAR(mean, rho, 0.02);
    previous = mean;
  }
}

TEST(SyntheticTest, FeatureMeansFollowCells) {
  SyntheticConfig c = Small(4000, 0.0, 2);
  c.feature_dim = 3;
  c.label_shift = 1.5;
  c.attr_shift = -2.0;
  const Dataset d = GenerateSynthetic(c);
  double label_feature[2] = {0, 0};
  double attr_feature[2] = {0, 0};
  double count_y[2] = {0, 0};
  double count_s[2] = {0, 0};
  for (std::size_t i = 0; i < d.num_nodes(); ++i) {
    const int y = *d.labels()[i];
    const int s = *d.sensitive()[i];
    label_feature[y] += d.features()(static_cast<Eigen::Index>(i), 1);
    count_y[y] += 1;
    attr_feature[s] += d.features()(static_cast<Eigen::Index>(i), 2);
    count_s[s] += 1;
  }
  EXPECT_NEAR(label_feature[1] / count_y[1], 1.5, 0.1);
  EXPECT_NEAR(label_feature[0] / count_y[0], -1.5, 0.1);
  EXPECT_NEAR(attr_feature[1] / count_s[1], -2.0, 0.1);
  EXPECT_NEAR(attr_feature[0] / count_s[0], 2.0, 0.1);
}

TEST(SyntheticTest, InfeasibleCorrelationNamesBound) {
  SyntheticConfig c;
  c.label_balance = 0.9;
  c.label_attr_correlation = 0.9;
  const Error e = Caught([&] { GenerateSynthetic(c); });
  EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  EXPECT_NE(std::string(e.what()).find("0.333333"), std::string::npos) << e.what();
}

TEST(SyntheticTest, ConfigParsing) {
  const SyntheticConfig c = LoadSyntheticConfig(Fixture("synthetic.toml"));
  EXPECT_EQ(c.n, 500u);
  EXPECT_EQ(c.group_balance, 0.4);
  EXPECT_EQ(c.label_attr_correlation, 0.6);
  EXPECT_EQ(c.feature_dim, 8u);
  EXPECT_EQ(c.seed, 11u);
  const SyntheticConfig back = ParseSyntheticConfig(SyntheticConfigToText(c));
  EXPECT_EQ(SyntheticConfigToText(back), SyntheticConfigToText(c));
  EXPECT_EQ(Caught([] { ParseSyntheticConfig("bogus = 1\n"); }).kind(), ErrorKind::kConfig);
  EXPECT_EQ(Caught([] { ParseSyntheticConfig("n 5\n"); }).kind(), ErrorKind::kConfig);
  EXPECT_EQ(Caught([] { ParseSyntheticConfig("intra_edge_prob = 2\n"); }).kind(),
            ErrorKind::kConfig);
}

TEST(ResultTest, MeanStdCells) {
  EXPECT_EQ(FormatMeanStd(59.70, 3.79), "59.70 (3.79)");
  ExperimentResult single{"GCN", {MetricsReport{}}};
  single.per_seed[0].bacc = 61.5;
  const auto summary = single.Summarize();
  EXPECT_EQ(*summary[0].std, 0.0);
  EXPECT_FALSE(summary[1].mean.has_value());
  EXPECT_EQ(FormatMeanStd(*summary[0].mean, *summary[0].std), "61.50 (0.00)");
}

TEST(ResultTest, SampleStandardDeviation) {
  ExperimentResult r{"GCN", std::vector<MetricsReport>(3)};
  r.per_seed[0].f1 = 1.0;
  r.per_seed[1].f1 = 2.0;
  r.per_seed[2].f1 = 6.0;
  const auto summary = r.Summarize();
  EXPECT_DOUBLE_EQ(*summary[2].mean, 3.0);
  EXPECT_DOUBLE_EQ(*summary[2].std, std::sqrt(7.0));
  EXPECT_EQ(summary[2].defined, 3u);
}

TEST(ResultTest, CsvAndJsonFiles) {
  const auto dir = TempDir("results");
  ExperimentResult r{"GCN-EOSP", std::vector<MetricsReport>(2)};
  r.per_seed[0].bacc = 60.0;
  r.per_seed[1].bacc = 62.0;
  r.per_seed[0].delta_eo = 3.0;
  r.per_seed[0].cells[1][0][1] = 7;
  r.per_seed[1].evaluated = 250;
  WriteResult(r, dir / "r.csv", ResultFormat::kCsv);
  EXPECT_EQ(ReadFile(dir / "r.csv"),
            "method,bacc,auc,f1,delta_sp,delta_eo\nGCN-EOSP,61.00 (1.41),NA,NA,NA,3.00 (0.00)\n");
  WriteResult(r, dir / "r.json", ResultFormat::kJson);
  const auto back = ReadResultsJson(dir / "r.json");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].method, r.method);
  ASSERT_EQ(back[0].per_seed.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) ExpectSameReport(back[0].per_seed[k], r.per_seed[k]);
  EXPECT_EQ(Caught([&] { WriteResult(r, dir / "missing" / "r.csv", ResultFormat::kCsv); }).kind(),
            ErrorKind::kIo);
}

TEST(SplitsFileTest, RoundTrip) {
  const auto dir = TempDir("splits");
  const Splits s{{1, 4}, {2}, {0, 3}, 17};
  SaveSplits(s, dir / "s.json");
  const Splits back = LoadSplits(dir / "s.json");
  EXPECT_EQ(back.train, s.train);
  EXPECT_EQ(back.val, s.val);
  EXPECT_EQ(back.test, s.test);
  EXPECT_EQ(back.seed, 17u);
  EXPECT_EQ(Caught([] { SplitsFromJson("{\"train\": 3}"); }).kind(), ErrorKind::kIo);
}

}  // namespace
}  // namespace fairgnn
