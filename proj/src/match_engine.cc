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

#include "epp/match_engine.h"

#include <algorithm>
#include <map>

#include "epp/csv.h"
#include "json.hpp"

namespace epp {
namespace {

struct SplitScore {
  std::int64_t split;
  double score;
};

// tournament -> player -> scores sorted by split
using Grouped = std::map<TournamentId, std::map<PlayerId, std::vector<SplitScore>>>;

Grouped GroupScores(const ScoreTable& table) {
  Grouped grouped;
  for (const ScoreRecord& r : table.records) {
    grouped[r.tournament][r.player].push_back({r.split, r.score});
  }
  for (auto& [tournament, players] : grouped) {
    for (auto& [player, scores] : players) {
      std::sort(scores.begin(), scores.end(),
                [](const SplitScore& a, const SplitScore& b) {
                  return a.split < b.split;
                });
    }
  }
  return grouped;
}

struct RawTally {
  std::int64_t wins_i = 0;
  std::int64_t wins_j = 0;
  std::int64_t ties = 0;
};

// Every split of i against every split of j, in O(n log n) via sorting.
RawTally CrossSplitTally(const std::vector<SplitScore>& a,
                         const std::vector<SplitScore>& b) {
  std::vector<double> sorted_b;
  sorted_b.reserve(b.size());
  for (const SplitScore& s : b) sorted_b.push_back(s.score);
  std::sort(sorted_b.begin(), sorted_b.end());
  RawTally tally;
  const auto nb = static_cast<std::int64_t>(sorted_b.size());
  for (const SplitScore& s : a) {
    const auto lo = std::lower_bound(sorted_b.begin(), sorted_b.end(), s.score);
    const auto hi = std::upper_bound(lo, sorted_b.end(), s.score);
    const std::int64_t below = lo - sorted_b.begin();
    const std::int64_t equal = hi - lo;
    tally.wins_i += below;
    tally.ties += equal;
    tally.wins_j += nb - below - equal;
  }
  return tally;
}

RawTally SameSplitTally(const std::vector<SplitScore>& a,
                        const std::vector<SplitScore>& b) {
  RawTally tally;
  std::size_t p = 0;
  std::size_t q = 0;
  while (p < a.size() && q < b.size()) {
    if (a[p].split < b[q].split) {
      ++p;
    } else if (b[q].split < a[p].split) {
      ++q;
    } else {
      if (a[p].score > b[q].score) {
        ++tally.wins_i;
      } else if (a[p].score < b[q].score) {
        ++tally.wins_j;
      } else {
        ++tally.ties;
      }
      ++p;
      ++q;
    }
  }
  return tally;
}

std::int64_t SharedSplits(const std::vector<SplitScore>& a,
                          const std::vector<SplitScore>& b) {
  RawTally t = SameSplitTally(a, b);
  return t.wins_i + t.wins_j + t.ties;
}

}  // namespace

std::vector<TournamentMatches> GenerateMatches(const ScoreTable& table,
                                               const MatchConfig& config) {
  const Grouped grouped = GroupScores(table);
  std::vector<TournamentMatches> out;
  out.reserve(grouped.size());
  for (const auto& [tournament, players] : grouped) {
    TournamentMatches matches;
    matches.tournament = tournament;
    for (const auto& entry : players) matches.players.push_back(entry.first);

    // std::map iteration is already in canonical PlayerId order.
    for (auto first = players.begin(); first != players.end(); ++first) {
      for (auto second = std::next(first); second != players.end(); ++second) {
        const RawTally tally =
            config.scheme == Scheme::kCrossSplit
                ? CrossSplitTally(first->second, second->second)
                : SameSplitTally(first->second, second->second);
        PairCounts counts;
        counts.tournament = tournament;
        counts.i = first->first;
        counts.j = second->first;
        counts.wins_i = static_cast<double>(tally.wins_i);
        counts.wins_j = static_cast<double>(tally.wins_j);
        counts.ties = static_cast<double>(tally.ties);
        counts.comparisons = tally.wins_i + tally.wins_j + tally.ties;
        if (config.tie_policy == TiePolicy::kHalfWin) {
          counts.wins_i += 0.5 * counts.ties;
          counts.wins_j += 0.5 * counts.ties;
        }
        if (counts.total() > 0.0) matches.pairs.push_back(std::move(counts));
      }
    }
    out.push_back(std::move(matches));
  }
  return out;
}

Census ComparisonCensus(const ScoreTable& table, const MatchConfig& config) {
  const Grouped grouped = GroupScores(table);
  Census census;
  census.score_records = static_cast<std::int64_t>(table.records.size());
  for (const auto& [tournament, players] : grouped) {
    TournamentCensus entry;
    entry.tournament = tournament;
    entry.players = static_cast<std::int64_t>(players.size());
    entry.pairs = entry.players * (entry.players - 1) / 2;
    for (auto first = players.begin(); first != players.end(); ++first) {
      for (auto second = std::next(first); second != players.end(); ++second) {
        entry.comparisons +=
            config.scheme == Scheme::kCrossSplit
                ? static_cast<std::int64_t>(first->second.size() *
                                            second->second.size())
                : SharedSplits(first->second, second->second);
      }
    }
    census.comparisons_total += entry.comparisons;
    census.tournaments.push_back(std::move(entry));
  }
  return census;
}

std::string PairCountsToCsv(std::span<const TournamentMatches> matches) {
  std::string out = "tournament,player_i,player_j,wins_i,wins_j,n_comparisons\n";
  for (const TournamentMatches& t : matches) {
    for (const PairCounts& p : t.pairs) {
      out += csv::JoinLine({csv::Escape(t.tournament.name),
                            csv::Escape(p.i.ToString()),
                            csv::Escape(p.j.ToString()),
                            csv::FormatDouble(p.wins_i),
                            csv::FormatDouble(p.wins_j),
                            std::to_string(p.comparisons)});
    }
  }
  return out;
}

std::string CensusToJson(const Census& census) {
  nlohmann::ordered_json doc;
  doc["score_records"] = census.score_records;
  doc["comparisons_total"] = census.comparisons_total;
  doc["tournaments"] = nlohmann::ordered_json::array();
  for (const TournamentCensus& t : census.tournaments) {
    nlohmann::ordered_json item;
    item["tournament"] = t.tournament.name;
    item["players"] = t.players;
    item["pairs"] = t.pairs;
    item["comparisons"] = t.comparisons;
    doc["tournaments"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

}  // namespace epp
