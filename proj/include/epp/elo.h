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

#ifndef EPP_ELO_H_
#define EPP_ELO_H_

// Classic sequential Elo, kept as a baseline next to EPP.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "epp/core.h"

namespace epp {

struct EloConfig {
  double initial_rating = 1500.0;
  double k_factor = 32.0;
  double scale = 400.0;
  double base = 10.0;

  void Validate() const;
};

struct EloTable {
  std::map<PlayerId, double> ratings;
  std::map<PlayerId, std::int64_t> matches_played;
};

struct EloMatch {
  PlayerId first;
  PlayerId second;
  MatchOutcome outcome = MatchOutcome::kWinI;  // from first's point of view
};

// 1 / (1 + base^((r2 - r1) / scale)): expected score of the first player.
double ExpectedScore(double r1, double r2, const EloConfig& config = {});

// One rating update. The second player's change is the exact negation of
// the first player's, so the rating sum is conserved.
std::pair<double, double> EloUpdate(double r1, double r2, MatchOutcome outcome,
                                    const EloConfig& config = {});

// Applies matches in order. Throws kInvalidPair on a self-match.
EloTable RunSequential(std::span<const EloMatch> matches,
                       const EloConfig& config = {});

// player,rating,matches_played sorted by rating descending (ties by player).
std::string EloTableToCsv(const EloTable& table);

// Parses algorithm_1,hyperparam_set_1,algorithm_2,hyperparam_set_2,result
// where result is the first player's actual score: 1, 0 or 0.5.
std::vector<EloMatch> ParseEloMatches(std::string_view text);

}  // namespace epp

#endif  // EPP_ELO_H_
