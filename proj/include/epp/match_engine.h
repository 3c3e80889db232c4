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

#ifndef EPP_MATCH_ENGINE_H_
#define EPP_MATCH_ENGINE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "epp/core.h"

namespace epp {

// kCrossSplit compares every split of one player with every split of the
// other; kSameSplit only compares splits both players share.
enum class Scheme { kCrossSplit, kSameSplit };

// kIgnore drops tied comparisons; kHalfWin credits half a win to each side.
enum class TiePolicy { kIgnore, kHalfWin };

struct MatchConfig {
  Scheme scheme = Scheme::kCrossSplit;
  TiePolicy tie_policy = TiePolicy::kHalfWin;
};

// All pair outcomes of one tournament. `players` lists every player that
// has a score in the tournament (sorted), including players whose pairs were
// all dropped.
struct TournamentMatches {
  TournamentId tournament;
  std::vector<PlayerId> players;
  std::vector<PairCounts> pairs;  // canonical (i, j) order
};

// Groups a validated, higher-is-better table into per-tournament pair counts.
// Output is sorted by tournament, then by (i, j), independent of record order.
std::vector<TournamentMatches> GenerateMatches(const ScoreTable& table,
                                               const MatchConfig& config);

struct TournamentCensus {
  TournamentId tournament;
  std::int64_t players = 0;
  std::int64_t pairs = 0;
  std::int64_t comparisons = 0;  // before tie handling
};

struct Census {
  std::int64_t score_records = 0;
  std::vector<TournamentCensus> tournaments;
  std::int64_t comparisons_total = 0;
};

Census ComparisonCensus(const ScoreTable& table, const MatchConfig& config);

// Audit dump: tournament,player_i,player_j,wins_i,wins_j,n_comparisons.
// Players are written as "algorithm:hyperparam_set".
std::string PairCountsToCsv(std::span<const TournamentMatches> matches);

std::string CensusToJson(const Census& census);

}  // namespace epp

#endif  // EPP_MATCH_ENGINE_H_
