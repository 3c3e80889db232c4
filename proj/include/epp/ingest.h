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

#ifndef EPP_INGEST_H_
#define EPP_INGEST_H_

#include <string>
#include <string_view>
#include <vector>

#include "epp/core.h"

namespace epp {

enum class TableFormat { kCsv, kJson };

// Canonical CSV header. JSON uses an array of objects with the same keys.
inline constexpr std::string_view kScoreTableHeader =
    "tournament,algorithm,hyperparam_set,split,score";

// Parses a score table. Column order in CSV may vary but the column set must
// be exactly the five canonical columns. Throws kParseError (with line or
// element number) and kDuplicateKey on a repeated (tournament, player, split).
ScoreTable ParseScoreTable(std::string_view source, TableFormat format,
                           Orientation orientation = Orientation::kHigherBetter);

// Renders the table in canonical column order with shortest round-trip
// numbers. Record order is preserved.
std::string SerializeScoreTable(const ScoreTable& table, TableFormat format);

// Negates every score of a lower-is-better table and marks it higher-better.
ScoreTable OrientScores(ScoreTable table);

enum class Severity { kError, kWarning };

struct ValidationIssue {
  Severity severity = Severity::kError;
  std::string message;
  std::string locus;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool HasErrors() const;
  int CountErrors() const;
  int CountWarnings() const;
};

ValidationReport Validate(const ScoreTable& table);

// Guesses the format from a path extension (".json" vs anything else).
TableFormat FormatForPath(std::string_view path);

}  // namespace epp

#endif  // EPP_INGEST_H_
