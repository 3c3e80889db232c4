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

#include "epp/elo.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "epp/csv.h"
#include "epp/error.h"

namespace epp {
namespace {

void CheckFinite(double r1, double r2) {
  if (!std::isfinite(r1) || !std::isfinite(r2)) {
    throw EppError(ErrorCode::kDomainError, "non-finite Elo rating");
  }
}

double ActualScore(MatchOutcome outcome) {
  switch (outcome) {
    case MatchOutcome::kWinI:
      return 1.0;
    case MatchOutcome::kWinJ:
      return 0.0;
    case MatchOutcome::kTie:
      return 0.5;
  }
  return 0.5;
}

constexpr std::string_view kMatchHeader =
    "algorithm_1,hyperparam_set_1,algorithm_2,hyperparam_set_2,result";

}  // namespace

void EloConfig::Validate() const {
  if (!(k_factor > 0.0) || !(scale > 0.0) || !(base > 1.0) ||
      !std::isfinite(initial_rating) || !std::isfinite(k_factor) ||
      !std::isfinite(scale) || !std::isfinite(base)) {
    throw EppError(ErrorCode::kInvalidArgument,
                   "Elo config needs k_factor > 0, scale > 0, base > 1");
  }
}

double ExpectedScore(double r1, double r2, const EloConfig& config) {
  CheckFinite(r1, r2);
  return 1.0 / (1.0 + std::pow(config.base, (r2 - r1) / config.scale));
}

std::pair<double, double> EloUpdate(double r1, double r2, MatchOutcome outcome,
                                    const EloConfig& config) {
  const double expected = ExpectedScore(r1, r2, config);
  const double delta = config.k_factor * (ActualScore(outcome) - expected);
  return {r1 + delta, r2 - delta};
}

EloTable RunSequential(std::span<const EloMatch> matches,
                       const EloConfig& config) {
  config.Validate();
  EloTable table;
  for (const EloMatch& match : matches) {
    if (match.first == match.second) {
      throw EppError(ErrorCode::kInvalidPair,
                     "self-match for " + match.first.ToString());
    }
    auto& r1 = table.ratings.try_emplace(match.first, config.initial_rating)
                   .first->second;
    auto& r2 = table.ratings.try_emplace(match.second, config.initial_rating)
                   .first->second;
    std::tie(r1, r2) = EloUpdate(r1, r2, match.outcome, config);
    ++table.matches_played[match.first];
    ++table.matches_played[match.second];
  }
  return table;
}

std::string EloTableToCsv(const EloTable& table) {
  std::vector<std::pair<PlayerId, double>> rows(table.ratings.begin(),
                                                table.ratings.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  std::string out = "player,rating,matches_played\n";
  for (const auto& [player, rating] : rows) {
    auto played = table.matches_played.find(player);
    out += csv::JoinLine(
        {csv::Escape(player.ToString()), csv::FormatDouble(rating),
         std::to_string(played == table.matches_played.end() ? 0
                                                              : played->second)});
  }
  return out;
}

std::vector<EloMatch> ParseEloMatches(std::string_view text) {
  const std::vector<csv::Row> rows = csv::ReadRows(text);
  if (rows.empty() || csv::JoinLine(rows.front().fields) !=
                          std::string(kMatchHeader) + "\n") {
    throw EppError(ErrorCode::kParseError,
                   "line 1: expected header '" + std::string(kMatchHeader) +
                       "'");
  }
  std::vector<EloMatch> matches;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const csv::Row& row = rows[k];
    if (row.fields.size() != 5) {
      throw EppError(ErrorCode::kParseError,
                     "line " + std::to_string(row.line) +
                         ": expected 5 fields");
    }
    EloMatch match;
    match.first = {row.fields[0], row.fields[1]};
    match.second = {row.fields[2], row.fields[3]};
    const double result = csv::ParseDouble(row.fields[4], row.line);
    if (result == 1.0) {
      match.outcome = MatchOutcome::kWinI;
    } else if (result == 0.0) {
      match.outcome = MatchOutcome::kWinJ;
    } else if (result == 0.5) {
      match.outcome = MatchOutcome::kTie;
    } else {
      throw EppError(ErrorCode::kParseError,
                     "line " + std::to_string(row.line) +
                         ": result must be 1, 0 or 0.5");
    }
    matches.push_back(std::move(match));
  }
  return matches;
}

}  // namespace epp
