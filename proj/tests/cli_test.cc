// Copyright 2026 The EPP Authors.
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

#include "epp/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

namespace epp::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "epp");
  std::ostringstream out;
  std::ostringstream err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Data(const std::string& name) {
  return std::string(EPP_TEST_DATA_DIR) + "/" + name;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("epp_cli_" + std::string(::testing::UnitTest::GetInstance()
                                         ->current_test_info()
                                         ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream(path, std::ios::binary) << text;
    return path;
  }

  fs::path dir_;
};

TEST_F(CliTest, FourFoldComparison) {
  const Outcome o = Invoke({"compare", "-i", Data("four_fold.csv"), "--scheme",
                            "same", "--ties", "ignore", "--player-i",
                            "AutoML_1:default", "--player-j",
                            "AutoML_2:default", "--format", "json"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("\"prob\": 0.75"), std::string::npos) << o.out;
}

TEST_F(CliTest, RateWritesAllArtifacts) {
  const fs::path out = dir_ / "rated";
  const Outcome o = Invoke({"rate", "-i", Data("four_fold.csv"), "-o", out.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  for (const char* name : {"epp_results.json", "leaderboard.csv",
                           "pair_counts.csv", "census.json", "tunability.csv"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  EXPECT_EQ(Slurp(out / "leaderboard.csv").rfind("tournament,rank,player", 0), 0u);
}

TEST_F(CliTest, EmptyInputIsInputError) {
  const Outcome o = Invoke({"rate", "-i", Data("empty.csv")});
  EXPECT_EQ(o.code, kExitInput);
  EXPECT_FALSE(o.err.empty());
}

TEST_F(CliTest, MalformedAndMissingInput) {
  const fs::path bad = Write("bad.csv", "tournament,algorithm\nx,y\n");
  EXPECT_EQ(Invoke({"rate", "-i", bad.string()}).code, kExitInput);
  EXPECT_EQ(Invoke({"rate", "-i", (dir_ / "nope.csv").string()}).code,
            kExitInput);
  EXPECT_EQ(Invoke({"rate", "--scheme", "diagonal"}).code, kExitInput);
  EXPECT_EQ(Invoke({}).code, kExitInput);
}

TEST_F(CliTest, UnknownReferenceIsComputationError) {
  const Outcome o = Invoke({"rate", "-i", Data("four_fold.csv"), "--constraint",
                            "reference=gbm:h01"});
  EXPECT_EQ(o.code, kExitComputation);
  EXPECT_NE(o.err.find("UnknownPlayer"), std::string::npos) << o.err;
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const Outcome a = Invoke({"simulate", "--players", "10", "--seed", "7"});
  const Outcome b = Invoke({"simulate", "--players", "10", "--seed", "7"});
  const Outcome c = Invoke({"simulate", "--players", "10", "--seed", "8"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(a.out.rfind("tournament,algorithm,hyperparam_set,split,score\n", 0),
            0u);
}

TEST_F(CliTest, EloSingleMatch) {
  const fs::path matches = Write(
      "m.csv",
      "algorithm_1,hyperparam_set_1,algorithm_2,hyperparam_set_2,result\n"
      "a,1,b,1,1\n");
  const Outcome o = Invoke({"elo", "-i", matches.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.out, "player,rating,matches_played\na:1,1516,1\nb:1,1484,1\n");
}

TEST_F(CliTest, EmbedRejectsMaskedCells) {
  const fs::path table = Write(
      "ragged.csv",
      "tournament,algorithm,hyperparam_set,split,score\n"
      "d1,a,1,0,0.1\nd1,a,1,1,0.9\nd1,b,1,0,0.5\nd1,b,1,1,0.4\n"
      "d1,c,1,0,0.3\nd1,c,1,1,0.6\n"
      "d2,a,1,0,0.2\nd2,a,1,1,0.8\nd2,b,1,0,0.6\nd2,b,1,1,0.3\n");
  const Outcome o = Invoke({"embed", "-i", table.string(), "-k", "1"});
  EXPECT_EQ(o.code, kExitComputation);
  EXPECT_NE(o.err.find("IncompleteMatrix"), std::string::npos) << o.err;
  const Outcome dropped =
      Invoke({"embed", "-i", table.string(), "-k", "1", "--drop-incomplete"});
  EXPECT_EQ(dropped.code, kExitOk) << dropped.err;
}

TEST_F(CliTest, HelpListsDefaults) {
  const Outcome top = Invoke({"--help"});
  EXPECT_EQ(top.code, kExitOk);
  for (const char* cmd : {"rate", "probs", "compare", "elo", "embed", "simulate"}) {
    EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
  }
  const Outcome rate = Invoke({"rate", "--help"});
  EXPECT_EQ(rate.code, kExitOk);
  EXPECT_NE(rate.out.find("1e-08"), std::string::npos) << rate.out;
  EXPECT_NE(rate.out.find("mean-zero"), std::string::npos);
}

TEST_F(CliTest, PipelineIsByteStable) {
  std::vector<std::string> runs;
  for (int k = 0; k < 2; ++k) {
    const fs::path run = dir_ / ("run" + std::to_string(k));
    fs::create_directories(run);
    ASSERT_EQ(Invoke({"simulate", "--players", "6", "--tournaments", "3",
                      "--seed", "3", "-o", run.string()})
                  .code,
              kExitOk);
    const std::string scores = (run / "scores.csv").string();
    ASSERT_EQ(Invoke({"rate", "-i", scores, "-o", (run / "rate").string()}).code,
              kExitOk);
    const std::string results = (run / "rate" / "epp_results.json").string();
    ASSERT_EQ(Invoke({"probs", "-i", results, "-o", run.string()}).code, kExitOk);
    ASSERT_EQ(Invoke({"embed", "-i", results, "-o", run.string()}).code, kExitOk);
    std::string all;
    for (const char* name : {"scores.csv", "rate/epp_results.json",
                             "rate/leaderboard.csv", "probabilities.csv",
                             "embedding.json", "epp_matrix.csv"}) {
      all += Slurp(run / name);
    }
    runs.push_back(all);
  }
  EXPECT_EQ(runs[0], runs[1]);
  EXPECT_FALSE(runs[0].empty());
}

}  // namespace
}  // namespace epp::cli
