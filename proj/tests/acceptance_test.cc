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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Runs standalone so it can be invoked outside ctest as well.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "epp/analysis.h"
#include "epp/bt_fitter.h"
#include "epp/csv.h"
#include "epp/elo.h"
#include "epp/ingest.h"
#include "epp/match_engine.h"
#include "epp/synth.h"

namespace {

namespace fs = std::filesystem;
using epp::PlayerId;

struct Verdict {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string Fmt(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3g", x);
  return buffer;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double Logit(double p) { return std::log(p / (1.0 - p)); }

std::vector<epp::DesignRow> RowsFor(const std::vector<epp::PairCounts>& counts,
                                    const std::vector<PlayerId>& players) {
  std::vector<epp::DesignRow> rows;
  for (const epp::PairCounts& p : counts) {
    const int i = static_cast<int>(
        std::find(players.begin(), players.end(), p.i) - players.begin());
    const int j = static_cast<int>(
        std::find(players.begin(), players.end(), p.j) - players.begin());
    rows.push_back({i, j, p.wins_i, p.wins_j});
  }
  return rows;
}

// 1. The four-fold example: equal mean score ordering disagrees with EPP.
Verdict FourFold() {
  Verdict v;
  const epp::ScoreTable table = epp::ParseScoreTable(
      Slurp(fs::path(EPP_TEST_DATA_DIR) / "four_fold.csv"), epp::TableFormat::kCsv);
  const auto matches = epp::GenerateMatches(
      table, {epp::Scheme::kSameSplit, epp::TiePolicy::kIgnore});
  const epp::PairCounts& p = matches.at(0).pairs.at(0);
  v.Check(p.wins_i == 3 && p.wins_j == 1,
          "wins (" + Fmt(p.wins_i) + "," + Fmt(p.wins_j) + ")");
  const epp::EppResult r = epp::FitEpp(matches[0], {});
  const PlayerId a{"AutoML_1", "default"};
  const PlayerId b{"AutoML_2", "default"};
  const epp::Comparison c = epp::Compare(r, a, b);
  v.Check(std::abs(c.delta - Logit(0.75)) < 1e-8,
          "delta error " + Fmt(std::abs(c.delta - Logit(0.75))));
  v.Check(c.prob == 0.75, "P = " + epp::csv::FormatDouble(c.prob));
  double mean_a = 0;
  double mean_b = 0;
  for (const auto& rec : table.records) {
    (rec.player == a ? mean_a : mean_b) += rec.score / 4.0;
  }
  v.Check(mean_b > mean_a && c.delta > 0, "mean score and EPP should disagree");
  return v;
}

// 2. Two-player closed form.
Verdict TwoPlayerSweep() {
  Verdict v;
  const epp::TournamentId t{"sweep"};
  const PlayerId a{"a", "1"};
  const PlayerId b{"b", "1"};
  double worst = 0;
  for (int n = 2; n <= 50; ++n) {
    for (int w = 1; w < n; ++w) {
      const std::vector<epp::PairCounts> counts = {
          epp::MakePairCounts(t, a, b, w, n - w)};
      const epp::EppResult r = epp::FitEpp(t, counts, {});
      const double delta = r.BetaOf(a) - r.BetaOf(b);
      worst = std::max(worst, std::abs(delta - Logit(double(w) / n)));
      if (!r.converged) v.Check(false, "not converged at " + std::to_string(w));
    }
  }
  v.Check(worst < 1e-8, "max error " + Fmt(worst));
  return v;
}

// 3. Analytic derivatives against central differences.
Verdict Derivatives() {
  Verdict v;
  epp::SynthConfig config;
  config.true_beta = epp::EvenlySpacedBeta(6, 1.5);
  config.n_comparisons_per_pair = 40;
  config.seed = 2024;
  const auto counts = epp::GeneratePairCounts(config);
  const auto rows = RowsFor(counts, config.PlayerLabels());
  std::mt19937_64 engine(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double h = 1e-5;
  double worst_grad = 0;
  double worst_sym = 0;
  for (int point = 0; point < 10; ++point) {
    Eigen::VectorXd beta(6);
    for (int k = 0; k < 6; ++k) beta[k] = normal(engine);
    const Eigen::VectorXd g = epp::Gradient(beta, rows);
    const Eigen::MatrixXd hess = epp::Hessian(beta, rows);
    Eigen::VectorXd fd(6);
    for (int k = 0; k < 6; ++k) {
      Eigen::VectorXd up = beta;
      Eigen::VectorXd down = beta;
      up[k] += h;
      down[k] -= h;
      fd[k] = (epp::LogLikelihood(up, rows) - epp::LogLikelihood(down, rows)) /
              (2 * h);
    }
    const double rel = (g - fd).cwiseAbs().maxCoeff() /
                       std::max(1.0, g.cwiseAbs().maxCoeff());
    worst_grad = std::max(worst_grad, rel);
    worst_sym = std::max(worst_sym, (hess - hess.transpose()).cwiseAbs().maxCoeff());
  }
  v.Check(worst_grad < 1e-6, "gradient rel error " + Fmt(worst_grad));
  v.Check(worst_sym < 1e-10, "hessian asymmetry " + Fmt(worst_sym));
  return v;
}

// 4. Parameter recovery on a synthetic tournament.
Verdict Recovery() {
  Verdict v;
  epp::SynthConfig config;
  config.true_beta = epp::EvenlySpacedBeta(10, 2.0);
  config.n_comparisons_per_pair = 200;
  const epp::EppResult r =
      epp::FitEpp(config.tournament, epp::GeneratePairCounts(config), {});
  v.Check(r.converged, "fit did not converge");
  const auto labels = config.PlayerLabels();
  double worst_beta = 0;
  double worst_prob = 0;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    worst_beta = std::max(
        worst_beta, std::abs(r.BetaOf(labels[a]) - config.true_beta[a]));
  }
  const epp::ProbabilityMatrix m = epp::ComputeProbabilityMatrix(r);
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = 0; b < labels.size(); ++b) {
      const double truth =
          epp::WinProbability(config.true_beta[a], config.true_beta[b]);
      worst_prob = std::max(
          worst_prob, std::abs(m.p(r.IndexOf(labels[a]), r.IndexOf(labels[b])) - truth));
    }
  }
  v.Check(worst_beta < 0.15, "max beta error " + Fmt(worst_beta));
  v.Check(worst_prob < 0.05, "max probability error " + Fmt(worst_prob));
  return v;
}

// 5. The identifiability constraint does not change contrasts.
Verdict ConstraintInvariance() {
  Verdict v;
  epp::SynthConfig config;
  config.true_beta = epp::EvenlySpacedBeta(8, 1.0);
  config.n_comparisons_per_pair = 25;
  config.seed = 314;
  const auto counts = epp::GeneratePairCounts(config);
  const auto labels = config.PlayerLabels();
  epp::FitConfig reference;
  reference.constraint = epp::Reference{labels[3]};
  const epp::EppResult mean = epp::FitEpp(config.tournament, counts, {});
  const epp::EppResult ref = epp::FitEpp(config.tournament, counts, reference);
  double worst = 0;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = 0; b < labels.size(); ++b) {
      const double d1 = mean.beta[a] - mean.beta[b];
      const double d2 = ref.beta[a] - ref.beta[b];
      worst = std::max(worst, std::abs(d1 - d2));
    }
  }
  v.Check(worst < 1e-8, "contrast difference " + Fmt(worst));
  const auto l1 = epp::Leaderboard(mean);
  const auto l2 = epp::Leaderboard(ref);
  for (std::size_t k = 0; k < l1.size(); ++k) {
    if (l1[k].player != l2[k].player) {
      v.Check(false, "leaderboard order differs at " + std::to_string(k));
      break;
    }
  }
  return v;
}

// 6. Complementarity and diagonal of fitted probability matrices.
Verdict ProbabilityLaws() {
  Verdict v;
  std::mt19937_64 engine(606);
  std::uniform_int_distribution<int> size(2, 8);
  std::normal_distribution<double> normal(0.0, 1.0);
  int fitted = 0;
  double worst = 0;
  bool diagonal = true;
  while (fitted < 100) {
    const int n = size(engine);
    epp::SynthConfig config;
    config.true_beta.resize(n);
    for (double& b : config.true_beta) b = normal(engine);
    const double mean =
        std::accumulate(config.true_beta.begin(), config.true_beta.end(), 0.0) / n;
    for (double& b : config.true_beta) b -= mean;
    if (std::abs(std::accumulate(config.true_beta.begin(),
                                 config.true_beta.end(), 0.0)) >= 1e-12) {
      continue;
    }
    config.n_comparisons_per_pair = 30;
    config.seed = engine();
    const epp::EppResult r =
        epp::FitEpp(config.tournament, epp::GeneratePairCounts(config), {});
    if (!r.converged) continue;  // separated draws are exercised elsewhere
    const epp::ProbabilityMatrix m = epp::ComputeProbabilityMatrix(r);
    for (int a = 0; a < n; ++a) {
      diagonal = diagonal && m.p(a, a) == 0.5;
      for (int b = 0; b < n; ++b) {
        worst = std::max(worst, std::abs(m.p(a, b) + m.p(b, a) - 1.0));
      }
    }
    ++fitted;
  }
  v.Check(worst < 1e-12, "complement error " + Fmt(worst));
  v.Check(diagonal, "diagonal not exactly 0.5");
  return v;
}

// 7. Elo expected score and zero-sum updates.
Verdict EloCalibration() {
  Verdict v;
  const double e = epp::ExpectedScore(1700, 1500);
  v.Check(std::abs(e - 0.75975) < 1e-5, "expected score " + Fmt(e));

  const int players = 20;
  std::vector<epp::EloMatch> matches;
  matches.reserve(1000000);
  std::mt19937_64 engine(77);
  std::uniform_int_distribution<int> pick(0, players - 1);
  std::uniform_int_distribution<int> outcome(0, 2);
  while (matches.size() < 1000000) {
    const int a = pick(engine);
    const int b = pick(engine);
    if (a == b) continue;
    matches.push_back({{"p", std::to_string(a)},
                       {"p", std::to_string(b)},
                       static_cast<epp::MatchOutcome>(outcome(engine))});
  }
  const epp::EloTable table = epp::RunSequential(matches);
  long double sum = 0;
  for (const auto& [player, rating] : table.ratings) sum += rating;
  const double drift =
      static_cast<double>(std::abs(sum - 1500.0L * table.ratings.size()));
  v.Check(drift < 1e-9, "rating-sum drift " + Fmt(drift));
  return v;
}

// 8. Accounting for the 4 x 11 x 11 x 20 benchmark layout.
Verdict Census() {
  Verdict v;
  epp::BenchmarkSynthConfig config;
  config.algorithms = 4;
  config.settings = 11;
  config.tournaments = 11;
  config.n_splits = 20;
  const epp::ScoreTable table = epp::GenerateBenchmark(config);
  const epp::Census census = epp::ComparisonCensus(table, {});
  v.Check(census.score_records == 9680,
          "records " + std::to_string(census.score_records));
  for (const auto& t : census.tournaments) {
    if (t.pairs != 946 || t.comparisons != 378400) {
      v.Check(false, "tournament " + t.tournament.name + " has " +
                         std::to_string(t.pairs) + " pairs, " +
                         std::to_string(t.comparisons) + " comparisons");
    }
  }
  v.Check(census.tournaments.size() == 11, "tournament count");
  std::vector<epp::EppResult> results;
  for (const auto& t : epp::GenerateMatches(table, {})) {
    results.push_back(epp::FitEpp(t, {}));
  }
  const epp::EppMatrix matrix = epp::BuildEppMatrix(results);
  v.Check(matrix.values.size() == 484 && matrix.ObservedCells() == 484,
          "matrix cells " + std::to_string(matrix.ObservedCells()));
  return v;
}

// 9. PCA reconstruction, variance bookkeeping and sign convention.
Verdict PcaFidelity() {
  Verdict v;
  epp::BenchmarkSynthConfig config;
  config.algorithms = 2;
  config.settings = 4;
  config.tournaments = 12;
  config.seed = 99;
  std::vector<epp::EppResult> results;
  for (const auto& t :
       epp::GenerateMatches(epp::GenerateBenchmark(config), {})) {
    results.push_back(epp::FitEpp(t, {}));
  }
  const epp::EppMatrix matrix = epp::BuildEppMatrix(results);
  const int k = static_cast<int>(matrix.values.cols());
  const epp::EmbeddingResult e = epp::PcaEmbed(matrix, k);
  const Eigen::MatrixXd centered =
      matrix.values.rowwise() - matrix.values.colwise().mean();
  const double recon =
      (e.scores * e.loadings.transpose() - centered).cwiseAbs().maxCoeff();
  v.Check(recon < 1e-8, "reconstruction error " + Fmt(recon));
  for (int c = 1; c < k; ++c) {
    if (e.explained_variance[c] > e.explained_variance[c - 1]) {
      v.Check(false, "explained variance increases at " + std::to_string(c));
    }
  }
  const double gap = std::abs(e.explained_variance.sum() - e.total_variance);
  v.Check(gap < 1e-10, "variance sum gap " + Fmt(gap));
  for (int run = 0; run < 5; ++run) {
    const epp::EmbeddingResult again = epp::PcaEmbed(matrix, k);
    if (again.scores != e.scores || again.loadings != e.loadings) {
      v.Check(false, "repeated run differs");
      break;
    }
  }
  for (int c = 0; c < k; ++c) {
    Eigen::Index pivot = 0;
    e.loadings.col(c).cwiseAbs().maxCoeff(&pivot);
    if (e.loadings(pivot, c) < 0) v.Check(false, "sign convention");
  }
  return v;
}

// 10. Byte-identical artifacts from the CLI pipeline.
Verdict Determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "epp_acceptance";
  fs::remove_all(root);
  std::vector<std::string> artifacts;
  const std::string tool = EPP_TOOL_PATH;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / ("run" + std::to_string(run));
    fs::create_directories(dir);
    const std::string d = dir.string();
    const std::string pipeline =
        "'" + tool + "' simulate --players 8 --algorithms 2 --tournaments 3 "
        "--seed 1234 | '" + tool + "' rate --format json > '" + d +
        "/results.json' && '" + tool + "' probs -i '" + d +
        "/results.json' > '" + d + "/probabilities.csv' && '" + tool +
        "' embed -i '" + d + "/results.json' -o '" + d + "'";
    if (std::system(pipeline.c_str()) != 0) {
      v.Check(false, "pipeline failed");
      return v;
    }
    std::string bytes;
    for (const char* name : {"results.json", "probabilities.csv",
                             "embedding.json", "epp_matrix.csv"}) {
      const std::string content = Slurp(dir / name);
      if (content.empty()) v.Check(false, std::string(name) + " is empty");
      bytes += content;
    }
    artifacts.push_back(bytes);
  }
  v.Check(artifacts[0] == artifacts[1], "artifacts differ between runs");
  const auto parsed = nlohmann::json::parse(Slurp(root / "run0/results.json"));
  v.Check(parsed.size() >= 2, "fewer than two tournaments");
  fs::remove_all(root);
  return v;
}

bool AllFinite(const nlohmann::json& node) {
  if (node.is_number_float()) return std::isfinite(node.get<double>());
  if (node.is_array() || node.is_object()) {
    for (const auto& child : node) {
      if (!AllFinite(child)) return false;
    }
  }
  return true;
}

// 11. A player that wins every match.
Verdict Separation() {
  Verdict v;
  const epp::TournamentId t{"sep"};
  const PlayerId a{"a", "1"};
  const PlayerId b{"b", "1"};
  const std::vector<epp::PairCounts> counts = {epp::MakePairCounts(t, a, b, 4, 0)};
  const epp::FitConfig config;
  const epp::EppResult r = epp::FitEpp(t, counts, config);
  v.Check(r.iterations <= config.max_iter, "iterations " + std::to_string(r.iterations));
  v.Check(r.separated && !r.converged, "separation not flagged");
  v.Check(std::find(r.separated_players.begin(), r.separated_players.end(), a) !=
              r.separated_players.end(),
          "winner not listed as separated");
  const std::vector<epp::EppResult> results = {r};
  const std::string json = epp::EppResultsToJson(results);
  for (const char* bad : {"inf", "nan", "NaN", "Infinity"}) {
    if (json.find(bad) != std::string::npos) {
      v.Check(false, std::string("JSON contains ") + bad);
    }
  }
  const auto parsed = nlohmann::json::parse(json, nullptr, false);
  v.Check(!parsed.is_discarded() && AllFinite(parsed), "JSON not finite");
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 means no limit
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "four-fold worked example", 1.0, FourFold},
      {2, "two-player closed-form sweep", 5.0, TwoPlayerSweep},
      {3, "gradient and hessian", 0.0, Derivatives},
      {4, "synthetic recovery", 10.0, Recovery},
      {5, "constraint invariance", 0.0, ConstraintInvariance},
      {6, "probability-matrix laws", 0.0, ProbabilityLaws},
      {7, "elo calibration and conservation", 0.0, EloCalibration},
      {8, "benchmark census", 0.0, Census},
      {9, "pca fidelity", 0.0, PcaFidelity},
      {10, "end-to-end determinism", 0.0, Determinism},
      {11, "separation handling", 0.0, Separation},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.Check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      v.Check(false, "runtime " + Fmt(seconds) + " s exceeds " +
                         Fmt(c.limit_seconds) + " s");
    }
    if (!v.pass) ++failures;
    std::printf("[%s] criterion %2d: %-34s %.3f s%s%s\n",
                v.pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                v.detail.empty() ? "" : "  ", v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
