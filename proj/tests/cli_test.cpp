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


#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kCli = FAIRGNN_CLI;
const std::string kFixtures = FAIRGNN_FIXTURES;

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome Invoke(const std::string& args) {
  const std::string command = kCli + " " + args + " 2>&1";
  Outcome out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buffer;
  std::size_t got;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.output.append(buffer.data(), got);
  const int status = pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

fs::path Fresh(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fairgnn_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t CountLines(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kSynthetic = "--synthetic " + kFixtures + "/synthetic.toml";

TEST(CliTest, HelpAndUnknownCommand) {
  EXPECT_EQ(Invoke("--help").code, 0);
  EXPECT_EQ(Invoke("frobnicate").code, 2);
  EXPECT_NE(Invoke("").code, 0);
}

TEST(CliTest, MissingInputFileIsExitTwoNamingPath) {
  const Outcome o = Invoke("train --nodes /no/such/nodes.csv --edges /no/such/edges.csv --epochs 2");
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.output.find("/no/such/nodes.csv"), std::string::npos) << o.output;
}

TEST(CliTest, FeasibilityDomainErrorIsExitTwo) {
  const Outcome o = Invoke("feasibility --x 0 --y 0.6 --out " + Fresh("feas_bad").string());
  EXPECT_EQ(o.code, 2);
}

TEST(CliTest, FeasibilityRegion) {
  const fs::path dir = Fresh("feas");
  const Outcome o = Invoke("feasibility --x 0.3 --y 0.6 --resolution 200 --out " + dir.string());
  ASSERT_EQ(o.code, 0) << o.output;
  EXPECT_EQ(CountLines(dir / "region.csv"), 200u * 200u + 1);
  EXPECT_NE(o.output.find("measure="), std::string::npos);
  const auto j = nlohmann::json::parse(Slurp(dir / "measure.json"));
  EXPECT_GT(j["measure"].get<double>(), 0.0);

  const fs::path equal = Fresh("feas_equal");
  ASSERT_EQ(Invoke("feasibility --x 0.4 --y 0.4 --resolution 50 --out " + equal.string()).code, 0);
  EXPECT_EQ(nlohmann::json::parse(Slurp(equal / "measure.json"))["measure"].get<double>(), 1.0);
}

TEST(CliTest, SynthWritesLoadableFiles) {
  const fs::path dir = Fresh("synth");
  ASSERT_EQ(Invoke("synth " + kSynthetic + " --seed 4 --out " + dir.string()).code, 0);
  EXPECT_EQ(CountLines(dir / "nodes.csv"), 501u);
  const fs::path run = Fresh("synth_train");
  const Outcome o = Invoke("train --nodes " + (dir / "nodes.csv").string() + " --edges " +
                        (dir / "edges.csv").string() + " --epochs 3 --out " + run.string());
  EXPECT_EQ(o.code, 0) << o.output;
}

TEST(CliTest, TrainWritesRunDirectory) {
  const fs::path dir = Fresh("train");
  const Outcome o = Invoke("train " + kSynthetic + " --epochs 5 --seeds 2 --alpha 0.5 --beta 0.5 --jobs 2 --out " +
                        dir.string());
  ASSERT_EQ(o.code, 0) << o.output;
  for (const char* f : {"config.toml", "summary.csv", "summary.json", "timing.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  for (const char* seed : {"seed_0", "seed_1"}) {
    for (const char* f : {"splits.json", "history.jsonl", "checkpoint.json", "metrics.json"}) {
      EXPECT_TRUE(fs::exists(dir / seed / f)) << seed << "/" << f;
    }
    EXPECT_EQ(CountLines(dir / seed / "history.jsonl"), 5u);
  }
  EXPECT_NE(Slurp(dir / "summary.csv").find("GCN-EOSP,"), std::string::npos);

  const fs::path eval = Fresh("eval");
  const Outcome e = Invoke("eval " + kSynthetic + " --checkpoint " + (dir / "seed_1" / "checkpoint.json").string() +
                        " --splits " + (dir / "seed_1" / "splits.json").string() + " --out " + eval.string());
  ASSERT_EQ(e.code, 0) << e.output;
  const auto evaluated = nlohmann::json::parse(Slurp(eval / "metrics.json"));
  const auto trained = nlohmann::json::parse(Slurp(dir / "seed_1" / "metrics.json"));
  EXPECT_EQ(evaluated["metrics"]["bacc"], trained["test"]["bacc"]);
  EXPECT_EQ(evaluated["metrics"]["delta_sp"], trained["test"]["delta_sp"]);
}

TEST(CliTest, HpoLogsExactlyTheBudget) {
  const fs::path dir = Fresh("hpo");
  const Outcome o = Invoke("hpo " + kSynthetic + " --epochs 3 --trials 6 --jobs 2 --out " + dir.string());
  ASSERT_EQ(o.code, 0) << o.output;
  EXPECT_EQ(CountLines(dir / "trials.jsonl"), 6u);
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_NE(o.output.find("alpha"), std::string::npos);
  EXPECT_EQ(Invoke("hpo " + kSynthetic + " --trials 0 --out " + dir.string()).code, 2);
}

TEST(CliTest, SweepRowsPerProportion) {
  const fs::path one = Fresh("sweep1");
  ASSERT_EQ(Invoke("sweep-labeled " + kSynthetic + " --epochs 3 --proportions 30 --out " + one.string()).code, 0);
  EXPECT_EQ(CountLines(one / "sweep.csv"), 1u + 2u);
  const fs::path four = Fresh("sweep4");
  const Outcome o = Invoke("sweep-labeled " + kSynthetic + " --epochs 3 --jobs 2 --out " + four.string());
  ASSERT_EQ(o.code, 0) << o.output;
  EXPECT_EQ(CountLines(four / "sweep.csv"), 1u + 8u);
  EXPECT_TRUE(fs::exists(four / "sweep_timing.csv"));
}

TEST(CliTest, SeedFromEnvironment) {
  const fs::path a = Fresh("env_a");
  const fs::path b = Fresh("env_b");
  ASSERT_EQ(std::system(("FAIRGNN_SEED=7 " + kCli + " train " + kSynthetic + " --epochs 2 --out " +
                         a.string() + " > /dev/null 2>&1")
                            .c_str()),
            0);
  ASSERT_EQ(Invoke("train " + kSynthetic + " --epochs 2 --seed 7 --out " + b.string()).code, 0);
  EXPECT_TRUE(fs::exists(a / "seed_7"));
  EXPECT_EQ(Slurp(a / "seed_7" / "metrics.json"), Slurp(b / "seed_7" / "metrics.json"));
}

}  // namespace
