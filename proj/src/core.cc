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

#include "epp/core.h"

#include "epp/error.h"

namespace epp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidPair:
      return "InvalidPair";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kDuplicateKey:
      return "DuplicateKey";
    case ErrorCode::kShapeError:
      return "ShapeError";
    case ErrorCode::kTooFewPlayers:
      return "TooFewPlayers";
    case ErrorCode::kDisconnectedGraph:
      return "DisconnectedGraph";
    case ErrorCode::kDomainError:
      return "DomainError";
    case ErrorCode::kNotConverged:
      return "NotConverged";
    case ErrorCode::kUnknownPlayer:
      return "UnknownPlayer";
    case ErrorCode::kIncompleteMatrix:
      return "IncompleteMatrix";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kIoError:
      return "IoError";
  }
  return "Unknown";
}

double PairCounts::WinsOf(const PlayerId& player) const {
  if (player == i) return wins_i;
  if (player == j) return wins_j;
  throw EppError(ErrorCode::kUnknownPlayer,
                 player.ToString() + " is not part of this pair");
}

std::pair<PlayerId, PlayerId> CanonicalPair(const PlayerId& i,
                                            const PlayerId& j) {
  if (i == j) {
    throw EppError(ErrorCode::kInvalidPair,
                   "self-pair " + i.ToString() + " vs " + j.ToString());
  }
  if (j < i) return {j, i};
  return {i, j};
}

PairCounts MakePairCounts(const TournamentId& tournament, const PlayerId& a,
                          const PlayerId& b, double wins_a, double wins_b) {
  auto [first, second] = CanonicalPair(a, b);
  PairCounts counts;
  counts.tournament = tournament;
  counts.i = std::move(first);
  counts.j = std::move(second);
  const bool swapped = !(counts.i == a);
  counts.wins_i = swapped ? wins_b : wins_a;
  counts.wins_j = swapped ? wins_a : wins_b;
  counts.comparisons = static_cast<std::int64_t>(wins_a + wins_b);
  return counts;
}

}  // namespace epp
