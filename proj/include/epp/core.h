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

#ifndef EPP_CORE_H_
#define EPP_CORE_H_

// Shared domain types. A "player" is one algorithm run with one
// hyperparameter setting; a "tournament" is one data set.

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace epp {

struct PlayerId {
  std::string algorithm;
  std::string hyperparam_set;

  auto operator<=>(const PlayerId&) const = default;
  bool operator==(const PlayerId&) const = default;

  // "algorithm:hyperparam_set", used in human-facing output and CLI flags.
  std::string ToString() const { return algorithm + ":" + hyperparam_set; }
};

struct TournamentId {
  std::string name;

  auto operator<=>(const TournamentId&) const = default;
  bool operator==(const TournamentId&) const = default;
};

struct ScoreRecord {
  TournamentId tournament;
  PlayerId player;
  std::int64_t split = 0;
  double score = 0.0;

  bool operator==(const ScoreRecord&) const = default;
};

enum class Orientation { kHigherBetter, kLowerBetter };

struct ScoreTable {
  std::vector<ScoreRecord> records;
  Orientation orientation = Orientation::kHigherBetter;

  bool operator==(const ScoreTable&) const = default;
};

enum class MatchOutcome { kWinI, kWinJ, kTie };

// Aggregated outcomes for one unordered pair within a tournament. The pair is
// stored in canonical order (i < j). Ties have already been folded into the
// win counts (or dropped) according to the tie policy; `ties` keeps the raw
// number of tied comparisons for auditing.
struct PairCounts {
  TournamentId tournament;
  PlayerId i;
  PlayerId j;
  double wins_i = 0.0;
  double wins_j = 0.0;
  double ties = 0.0;
  std::int64_t comparisons = 0;

  double total() const { return wins_i + wins_j; }
  // Wins of `player` against the other member; player must be i or j.
  double WinsOf(const PlayerId& player) const;
  bool Involves(const PlayerId& player) const {
    return player == i || player == j;
  }

  bool operator==(const PairCounts&) const = default;
};

// Returns (i, j) in lexicographic order. Throws kInvalidPair when i == j.
std::pair<PlayerId, PlayerId> CanonicalPair(const PlayerId& i,
                                            const PlayerId& j);

// Builds a canonical PairCounts from counts given in (a, b) order.
PairCounts MakePairCounts(const TournamentId& tournament, const PlayerId& a,
                          const PlayerId& b, double wins_a, double wins_b);

}  // namespace epp

#endif  // EPP_CORE_H_
