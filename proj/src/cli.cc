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
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "epp/csv.h"
#include "epp/analysis.h"
#include "epp/bt_fitter.h"
#include "epp/elo.h"
#include "epp/ingest.h"
#include "epp/match_engine.h"
#include "epp/synth.h"
#include "json.hpp"

namespace epp::cli {
namespace {

namespace fs = std::filesystem;

struct FitFlags {
  std::string scheme = "cross";
  std::string ties = "half";
  std::string constraint = "mean-zero";
  double ridge = 0.0;
  double tol = 1e-8;
  int max_iter = 100;
  bool lower_is_better = false;
  std::string input_format = "auto";
};

struct CommonFlags {
  std::string input = "-";
  std::string format = "csv";
  std::string output;
  bool force = false;
};

std::string ReadInput(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EppError(ErrorCode::kIoError, "cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Writes through a temporary file and renames it into place.
void WriteAtomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw EppError(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << content;
    if (!out) throw EppError(ErrorCode::kIoError, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw EppError(ErrorCode::kIoError, "cannot rename to " + path.string());
}

fs::path OutputDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw EppError(ErrorCode::kIoError, "cannot create " + dir);
  return fs::path(dir);
}

PlayerId ParsePlayer(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw EppError(ErrorCode::kInvalidArgument,
                   "player must be <algorithm>:<hyperparam_set>, got '" + text +
                       "'");
  }
  return {text.substr(0, colon), text.substr(colon + 1)};
}

MatchConfig ToMatchConfig(const FitFlags& flags) {
  MatchConfig config;
  config.scheme = flags.scheme == "same" ? Scheme::kSameSplit : Scheme::kCrossSplit;
  config.tie_policy =
      flags.ties == "ignore" ? TiePolicy::kIgnore : TiePolicy::kHalfWin;
  return config;
}

FitConfig ToFitConfig(const FitFlags& flags) {
  FitConfig config;
  config.ridge = flags.ridge;
  config.tol = flags.tol;
  config.max_iter = flags.max_iter;
  constexpr std::string_view kRef = "reference=";
  if (flags.constraint.rfind(kRef, 0) == 0) {
    config.constraint =
        Reference{ParsePlayer(flags.constraint.substr(kRef.size()))};
  } else if (flags.constraint != "mean-zero") {
    throw EppError(ErrorCode::kInvalidArgument,
                   "unknown constraint '" + flags.constraint + "'");
  }
  config.Validate();
  return config;
}

ScoreTable LoadScoreTable(const std::string& text, const CommonFlags& common,
                          const FitFlags& flags, std::ostream& err) {
  TableFormat format = TableFormat::kCsv;
  if (flags.input_format == "json") {
    format = TableFormat::kJson;
  } else if (flags.input_format == "auto") {
    format = FormatForPath(common.input);
  }
  ScoreTable table = ParseScoreTable(
      text, format,
      flags.lower_is_better ? Orientation::kLowerBetter
                            : Orientation::kHigherBetter);
  const ValidationReport report = Validate(table);
  for (const ValidationIssue& issue : report.issues) {
    err << (issue.severity == Severity::kError ? "error: " : "warning: ")
        << issue.message << " [" << issue.locus << "]\n";
  }
  if (report.HasErrors()) {
    throw EppError(ErrorCode::kParseError,
                   std::to_string(report.CountErrors()) +
                       " validation error(s)");
  }
  return OrientScores(std::move(table));
}

struct RatedTable {
  std::vector<TournamentMatches> matches;
  std::vector<EppResult> results;
  Census census;
};

RatedTable RateTable(const ScoreTable& table, const FitFlags& flags,
                     std::ostream& err) {
  const MatchConfig match_config = ToMatchConfig(flags);
  const FitConfig fit_config = ToFitConfig(flags);
  RatedTable rated;
  rated.census = ComparisonCensus(table, match_config);
  rated.matches = GenerateMatches(table, match_config);
  for (const TournamentMatches& t : rated.matches) {
    if (t.players.size() < 2) {
      err << "warning: skipping tournament " << t.tournament.name
          << " with a single player\n";
      continue;
    }
    rated.results.push_back(FitEpp(t, fit_config));
    const EppResult& r = rated.results.back();
    if (r.separated) {
      err << "warning: tournament " << r.tournament.name
          << " is separated; ratings diverge\n";
    } else if (!r.converged) {
      err << "warning: tournament " << r.tournament.name
          << " did not converge in " << r.iterations << " iterations\n";
    }
  }
  if (rated.results.empty()) {
    throw EppError(ErrorCode::kTooFewPlayers, "no tournament could be rated");
  }
  return rated;
}

bool LooksLikeResults(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  return !doc.is_discarded() && doc.is_array() && !doc.empty() &&
         doc.front().is_object() && doc.front().contains("beta");
}

// Accepts either the JSON written by `rate` or a raw score table.
std::vector<EppResult> LoadResults(const CommonFlags& common,
                                   const FitFlags& flags, std::ostream& err) {
  const std::string text = ReadInput(common.input);
  if (LooksLikeResults(text)) return EppResultsFromJson(text);
  return RateTable(LoadScoreTable(text, common, flags, err), flags, err).results;
}

void Emit(const CommonFlags& common, const std::string& filename,
          const std::string& content, std::ostream& out) {
  if (!common.output.empty()) {
    WriteAtomically(OutputDir(common.output) / filename, content);
  } else {
    out << content;
  }
}

void AddFitFlags(CLI::App* cmd, FitFlags& flags) {
  cmd->add_option("--scheme", flags.scheme, "Comparison scheme")
      ->check(CLI::IsMember({"cross", "same"}));
  cmd->add_option("--ties", flags.ties, "Tie policy")
      ->check(CLI::IsMember({"ignore", "half"}));
  cmd->add_option("--constraint", flags.constraint,
                  "mean-zero or reference=<algorithm>:<hyperparam_set>");
  cmd->add_option("--ridge", flags.ridge, "L2 penalty on ratings")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol", flags.tol, "Gradient-norm tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", flags.max_iter, "Newton iteration limit")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--lower-is-better", flags.lower_is_better,
                "Scores are losses (e.g. RMSE); negate before comparing");
  cmd->add_option("--input-format", flags.input_format,
                  "Score table format (auto uses the file extension)")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
}

void AddCommonFlags(CLI::App* cmd, CommonFlags& common, bool with_force) {
  cmd->add_option("--input,-i", common.input, "Input file ('-' for stdin)");
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output,-o", common.output,
                  "Output directory (stdout when empty)");
  if (with_force) {
    cmd->add_flag("--force", common.force, "Accept unconverged fits");
  }
}

int RunRate(const CommonFlags& common, const FitFlags& flags,
            std::ostream& out, std::ostream& err) {
  const ScoreTable table =
      LoadScoreTable(ReadInput(common.input), common, flags, err);
  const RatedTable rated = RateTable(table, flags, err);
  const std::string results_json = EppResultsToJson(rated.results);
  const std::string leaderboard = LeaderboardsToCsv(rated.results, true);
  if (!common.output.empty()) {
    const fs::path dir = OutputDir(common.output);
    WriteAtomically(dir / "epp_results.json", results_json);
    WriteAtomically(dir / "leaderboard.csv", leaderboard);
    WriteAtomically(dir / "pair_counts.csv", PairCountsToCsv(rated.matches));
    WriteAtomically(dir / "census.json", CensusToJson(rated.census));
    WriteAtomically(dir / "tunability.csv",
                    TunabilityToCsv(Tunability(rated.results)));
  } else {
    out << (common.format == "json" ? results_json : leaderboard);
  }
  return kExitOk;
}

int RunProbs(const CommonFlags& common, const FitFlags& flags,
             std::ostream& out, std::ostream& err) {
  const std::vector<EppResult> results = LoadResults(common, flags, err);
  std::vector<ProbabilityMatrix> matrices;
  for (const EppResult& r : results) {
    matrices.push_back(ComputeProbabilityMatrix(r, common.force));
  }
  if (common.format == "json") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const ProbabilityMatrix& m : matrices) {
      nlohmann::ordered_json item;
      item["tournament"] = m.tournament.name;
      item["players"] = nlohmann::ordered_json::array();
      for (const PlayerId& p : m.players) item["players"].push_back(p.ToString());
      item["p"] = nlohmann::ordered_json::array();
      for (Eigen::Index a = 0; a < m.p.rows(); ++a) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index b = 0; b < m.p.cols(); ++b) row.push_back(m.p(a, b));
        item["p"].push_back(std::move(row));
      }
      doc.push_back(std::move(item));
    }
    Emit(common, "probabilities.json", doc.dump(2) + "\n", out);
  } else {
    Emit(common, "probabilities.csv", ProbabilitiesToCsv(matrices), out);
  }
  return kExitOk;
}

int RunCompare(const CommonFlags& common, const FitFlags& flags,
               const std::string& first, const std::string& second,
               const std::string& tournament, std::ostream& out,
               std::ostream& err) {
  const PlayerId i = ParsePlayer(first);
  const PlayerId j = ParsePlayer(second);
  const std::vector<EppResult> results = LoadResults(common, flags, err);
  std::string json_out = "[\n";
  std::string csv_out =
      "tournament,player_i,player_j,delta,prob,z,p_value,degenerate\n";
  int matched = 0;
  for (const EppResult& r : results) {
    if (!tournament.empty() && r.tournament.name != tournament) continue;
    if (tournament.empty()) {
      // Without an explicit tournament, compare wherever both are rated.
      const bool has_both =
          std::binary_search(r.players.begin(), r.players.end(), i) &&
          std::binary_search(r.players.begin(), r.players.end(), j);
      if (!has_both) continue;
    }
    if (!r.converged && !common.force) {
      throw EppError(ErrorCode::kNotConverged,
                     "fit for tournament " + r.tournament.name +
                         " did not converge");
    }
    const Comparison c = Compare(r, i, j);
    json_out += (matched ? ",\n" : "") + ComparisonToJson(r.tournament, c);
    csv_out += csv::JoinLine(
        {csv::Escape(r.tournament.name), csv::Escape(i.ToString()),
         csv::Escape(j.ToString()), csv::FormatDouble(c.delta),
         csv::FormatDouble(c.prob),
         c.degenerate ? std::string() : csv::FormatDouble(c.z),
         csv::FormatDouble(c.p_value), c.degenerate ? "true" : "false"});
    ++matched;
  }
  if (matched == 0) {
    throw EppError(ErrorCode::kUnknownPlayer,
                   "no tournament rates both " + i.ToString() + " and " +
                       j.ToString());
  }
  json_out += "]\n";
  if (common.format == "json") {
    Emit(common, "comparison.json", json_out, out);
  } else {
    Emit(common, "comparison.csv", csv_out, out);
  }
  return kExitOk;
}

int RunElo(const CommonFlags& common, const EloConfig& config,
           std::ostream& out) {
  config.Validate();
  const std::vector<EloMatch> matches =
      ParseEloMatches(ReadInput(common.input));
  const EloTable table = RunSequential(matches, config);
  if (common.format == "json") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    const std::vector<csv::Row> rows = csv::ReadRows(EloTableToCsv(table));
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const PlayerId player = ParsePlayer(rows[k].fields[0]);
      nlohmann::ordered_json item;
      item["player"] = rows[k].fields[0];
      item["rating"] = table.ratings.at(player);
      item["matches_played"] = table.matches_played.at(player);
      doc.push_back(std::move(item));
    }
    Emit(common, "elo.json", doc.dump(2) + "\n", out);
  } else {
    Emit(common, "elo.csv", EloTableToCsv(table), out);
  }
  return kExitOk;
}

int RunEmbed(const CommonFlags& common, const FitFlags& flags, int components,
             bool drop_incomplete, std::ostream& out, std::ostream& err) {
  const std::vector<EppResult> results = LoadResults(common, flags, err);
  EppMatrix matrix = BuildEppMatrix(results);
  if (drop_incomplete) matrix = matrix.FullyObservedColumns();
  const EmbeddingResult embedding = PcaEmbed(matrix, components);
  if (!common.output.empty()) {
    const fs::path dir = OutputDir(common.output);
    WriteAtomically(dir / "embedding.json", EmbeddingToJson(embedding));
    WriteAtomically(dir / "epp_matrix.csv", EppMatrixToCsv(matrix));
  } else {
    out << EmbeddingToJson(embedding);
  }
  return kExitOk;
}

int RunSimulate(const CommonFlags& common, BenchmarkSynthConfig config,
                int players, std::ostream& out) {
  if (players < 1 || players % config.algorithms != 0) {
    throw EppError(ErrorCode::kInvalidArgument,
                   "--players must be a positive multiple of --algorithms");
  }
  config.settings = players / config.algorithms;
  const ScoreTable table = GenerateBenchmark(config);
  const bool json = common.format == "json";
  Emit(common, json ? "scores.json" : "scores.csv",
       SerializeScoreTable(table, json ? TableFormat::kJson : TableFormat::kCsv),
       out);
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kDuplicateKey:
    case ErrorCode::kIoError:
    case ErrorCode::kInvalidArgument:
      return kExitInput;
    default:
      return kExitComputation;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"EPP: pairwise-comparison ratings for predictive models",
               "epp"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  CommonFlags common;
  FitFlags fit;
  EloConfig elo;
  BenchmarkSynthConfig synth;
  int players = 10;
  int components = 2;
  bool drop_incomplete = false;
  std::string first;
  std::string second;
  std::string tournament;

  auto* rate = app.add_subcommand("rate", "Fit EPP ratings per tournament");
  AddCommonFlags(rate, common, false);
  AddFitFlags(rate, fit);

  auto* probs = app.add_subcommand("probs", "Pairwise win-probability matrices");
  AddCommonFlags(probs, common, true);
  AddFitFlags(probs, fit);

  auto* compare = app.add_subcommand("compare", "Wald test of two players");
  AddCommonFlags(compare, common, true);
  AddFitFlags(compare, fit);
  compare->add_option("--player-i", first, "<algorithm>:<hyperparam_set>")
      ->required();
  compare->add_option("--player-j", second, "<algorithm>:<hyperparam_set>")
      ->required();
  compare->add_option("--tournament", tournament,
                      "Restrict to one tournament (default: all rating both)");

  auto* elo_cmd = app.add_subcommand("elo", "Sequential Elo over a match list");
  AddCommonFlags(elo_cmd, common, false);
  elo_cmd->add_option("--k-factor", elo.k_factor, "Elo K factor")
      ->check(CLI::PositiveNumber);
  elo_cmd->add_option("--scale", elo.scale, "Rating points per decade of odds")
      ->check(CLI::PositiveNumber);
  elo_cmd->add_option("--initial-rating", elo.initial_rating,
                      "Rating of a new player");

  auto* embed = app.add_subcommand("embed", "PCA embedding of tournaments");
  AddCommonFlags(embed, common, false);
  AddFitFlags(embed, fit);
  embed->add_option("--components,-k", components, "Principal components")
      ->check(CLI::PositiveNumber);
  embed->add_flag("--drop-incomplete", drop_incomplete,
                  "Drop players not rated in every tournament");

  auto* simulate = app.add_subcommand("simulate", "Synthetic score table");
  AddCommonFlags(simulate, common, false);
  simulate->add_option("--players", players, "Players per tournament");
  simulate->add_option("--algorithms", synth.algorithms,
                       "Algorithms (players are split evenly)");
  simulate->add_option("--tournaments", synth.tournaments, "Tournaments");
  simulate->add_option("--splits", synth.n_splits, "Splits per player");
  simulate->add_option("--spread", synth.spread,
                       "True ratings span [-spread, spread]");
  simulate->add_option("--tournament-sd", synth.tournament_sd,
                       "Per-tournament rating perturbation");
  simulate->add_option("--noise", synth.noise_scale, "Score noise scale")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", synth.seed, "Random seed");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*rate) return RunRate(common, fit, out, err);
    if (*probs) return RunProbs(common, fit, out, err);
    if (*compare) {
      return RunCompare(common, fit, first, second, tournament, out, err);
    }
    if (*elo_cmd) return RunElo(common, elo, out);
    if (*embed) {
      return RunEmbed(common, fit, components, drop_incomplete, out, err);
    }
    if (*simulate) return RunSimulate(common, synth, players, out);
  } catch (const EppError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
  return kExitInput;
}

}  // namespace epp::cli
