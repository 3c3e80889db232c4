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

#include "epp/ingest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "epp/csv.h"
#include "epp/error.h"
#include "json.hpp"

namespace epp {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 5> kColumns = {
    "tournament", "algorithm", "hyperparam_set", "split", "score"};

using RecordKey = std::tuple<std::string, std::string, std::string,
                             std::int64_t>;

RecordKey KeyOf(const ScoreRecord& r) {
  return {r.tournament.name, r.player.algorithm, r.player.hyperparam_set,
          r.split};
}

std::string Locus(const ScoreRecord& r) {
  return r.tournament.name + "/" + r.player.ToString() + "/split " +
         std::to_string(r.split);
}

void CheckRecord(const ScoreRecord& r, const std::string& where) {
  if (r.tournament.name.empty() || r.player.algorithm.empty() ||
      r.player.hyperparam_set.empty()) {
    throw EppError(ErrorCode::kParseError, where + "empty label");
  }
  if (r.split < 0) {
    throw EppError(ErrorCode::kParseError, where + "negative split index");
  }
}

void RejectDuplicates(const std::vector<ScoreRecord>& records,
                      const std::vector<std::string>& where) {
  std::map<RecordKey, std::size_t> seen;
  for (std::size_t k = 0; k < records.size(); ++k) {
    auto [it, inserted] = seen.emplace(KeyOf(records[k]), k);
    if (!inserted) {
      throw EppError(ErrorCode::kDuplicateKey,
                     where[k] + "duplicate key " + Locus(records[k]) +
                         " (first seen at " + where[it->second] + ")");
    }
  }
}

ScoreTable ParseCsv(std::string_view source, Orientation orientation) {
  std::vector<csv::Row> rows = csv::ReadRows(source);
  ScoreTable table;
  table.orientation = orientation;
  if (rows.empty()) {
    throw EppError(ErrorCode::kParseError, "line 1: missing header");
  }

  // Map header names to canonical positions.
  const csv::Row& header = rows.front();
  std::array<std::optional<std::size_t>, kColumns.size()> position;
  for (std::size_t col = 0; col < header.fields.size(); ++col) {
    auto it = std::find(kColumns.begin(), kColumns.end(), header.fields[col]);
    if (it == kColumns.end()) {
      throw EppError(ErrorCode::kParseError,
                     "line " + std::to_string(header.line) +
                         ": unknown column '" + header.fields[col] + "'");
    }
    auto& slot = position[it - kColumns.begin()];
    if (slot.has_value()) {
      throw EppError(ErrorCode::kParseError,
                     "line " + std::to_string(header.line) +
                         ": repeated column '" + header.fields[col] + "'");
    }
    slot = col;
  }
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    if (!position[c].has_value()) {
      throw EppError(ErrorCode::kParseError,
                     "line " + std::to_string(header.line) +
                         ": missing column '" + std::string(kColumns[c]) + "'");
    }
  }

  std::vector<std::string> where;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const csv::Row& row = rows[k];
    const std::string at = "line " + std::to_string(row.line) + ": ";
    if (row.fields.size() != kColumns.size()) {
      throw EppError(ErrorCode::kParseError,
                     at + "expected 5 fields, found " +
                         std::to_string(row.fields.size()));
    }
    auto field = [&](std::size_t c) -> const std::string& {
      return row.fields[*position[c]];
    };
    ScoreRecord record;
    record.tournament.name = field(0);
    record.player.algorithm = field(1);
    record.player.hyperparam_set = field(2);
    record.split = csv::ParseInteger(field(3), row.line);
    record.score = csv::ParseDouble(field(4), row.line);
    CheckRecord(record, at);
    table.records.push_back(std::move(record));
    where.push_back(at);
  }
  RejectDuplicates(table.records, where);
  return table;
}

ScoreTable ParseJson(std::string_view source, Orientation orientation) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw EppError(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_array()) {
    throw EppError(ErrorCode::kParseError, "top-level value must be an array");
  }
  ScoreTable table;
  table.orientation = orientation;
  std::vector<std::string> where;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const json& item = doc[k];
    const std::string at = "element " + std::to_string(k) + ": ";
    if (!item.is_object()) {
      throw EppError(ErrorCode::kParseError, at + "expected an object");
    }
    for (const auto& [key, value] : item.items()) {
      if (std::find(kColumns.begin(), kColumns.end(), key) == kColumns.end()) {
        throw EppError(ErrorCode::kParseError, at + "unknown key '" + key + "'");
      }
    }
    for (std::string_view key : kColumns) {
      if (!item.contains(key)) {
        throw EppError(ErrorCode::kParseError,
                       at + "missing key '" + std::string(key) + "'");
      }
    }
    const json& split = item["split"];
    const json& score = item["score"];
    if (!item["tournament"].is_string() || !item["algorithm"].is_string() ||
        !item["hyperparam_set"].is_string()) {
      throw EppError(ErrorCode::kParseError, at + "labels must be strings");
    }
    if (!split.is_number_integer()) {
      throw EppError(ErrorCode::kParseError, at + "split must be an integer");
    }
    if (!score.is_number()) {
      throw EppError(ErrorCode::kParseError, at + "score must be a number");
    }
    ScoreRecord record;
    record.tournament.name = item["tournament"].get<std::string>();
    record.player.algorithm = item["algorithm"].get<std::string>();
    record.player.hyperparam_set = item["hyperparam_set"].get<std::string>();
    record.split = split.get<std::int64_t>();
    record.score = score.get<double>();
    if (!std::isfinite(record.score)) {
      throw EppError(ErrorCode::kParseError, at + "non-finite score");
    }
    CheckRecord(record, at);
    table.records.push_back(std::move(record));
    where.push_back(at);
  }
  RejectDuplicates(table.records, where);
  return table;
}

}  // namespace

ScoreTable ParseScoreTable(std::string_view source, TableFormat format,
                           Orientation orientation) {
  if (format == TableFormat::kJson) return ParseJson(source, orientation);
  return ParseCsv(source, orientation);
}

std::string SerializeScoreTable(const ScoreTable& table, TableFormat format) {
  if (format == TableFormat::kJson) {
    json doc = json::array();
    for (const ScoreRecord& r : table.records) {
      json item = json::object();
      item["tournament"] = r.tournament.name;
      item["algorithm"] = r.player.algorithm;
      item["hyperparam_set"] = r.player.hyperparam_set;
      item["split"] = r.split;
      item["score"] = r.score;
      doc.push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
  }
  std::string out(kScoreTableHeader);
  out.push_back('\n');
  for (const ScoreRecord& r : table.records) {
    out += csv::JoinLine({csv::Escape(r.tournament.name),
                          csv::Escape(r.player.algorithm),
                          csv::Escape(r.player.hyperparam_set),
                          std::to_string(r.split), csv::FormatDouble(r.score)});
  }
  return out;
}

ScoreTable OrientScores(ScoreTable table) {
  if (table.orientation == Orientation::kLowerBetter) {
    for (ScoreRecord& r : table.records) r.score = -r.score;
    table.orientation = Orientation::kHigherBetter;
  }
  return table;
}

bool ValidationReport::HasErrors() const { return CountErrors() > 0; }

int ValidationReport::CountErrors() const {
  return static_cast<int>(
      std::count_if(issues.begin(), issues.end(), [](const auto& issue) {
        return issue.severity == Severity::kError;
      }));
}

int ValidationReport::CountWarnings() const {
  return static_cast<int>(issues.size()) - CountErrors();
}

ValidationReport Validate(const ScoreTable& table) {
  ValidationReport report;
  auto error = [&](std::string message, std::string locus) {
    report.issues.push_back(
        {Severity::kError, std::move(message), std::move(locus)});
  };
  auto warning = [&](std::string message, std::string locus) {
    report.issues.push_back(
        {Severity::kWarning, std::move(message), std::move(locus)});
  };

  if (table.records.empty()) {
    error("table has no records", "table");
    return report;
  }

  std::set<RecordKey> seen;
  // tournament -> player -> number of splits
  std::map<TournamentId, std::map<PlayerId, int>> splits;
  std::set<PlayerId> all_players;
  for (const ScoreRecord& r : table.records) {
    if (r.tournament.name.empty() || r.player.algorithm.empty() ||
        r.player.hyperparam_set.empty()) {
      error("empty label", Locus(r));
    }
    if (r.split < 0) error("negative split index", Locus(r));
    if (!std::isfinite(r.score)) error("non-finite score", Locus(r));
    if (!seen.insert(KeyOf(r)).second) error("duplicate key", Locus(r));
    ++splits[r.tournament][r.player];
    all_players.insert(r.player);
  }

  for (const auto& [tournament, players] : splits) {
    if (players.size() == 1) {
      warning("tournament has a single player; no matches can be formed",
              tournament.name);
    }
    auto [lo, hi] = std::minmax_element(
        players.begin(), players.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    if (lo->second != hi->second) {
      warning("unbalanced split counts (" + std::to_string(lo->second) +
                  " to " + std::to_string(hi->second) + ")",
              tournament.name);
    }
  }

  if (splits.size() > 1) {
    for (const PlayerId& player : all_players) {
      std::vector<std::string> missing;
      for (const auto& [tournament, players] : splits) {
        if (!players.contains(player)) missing.push_back(tournament.name);
      }
      if (!missing.empty()) {
        std::string names;
        for (const auto& name : missing) {
          names += (names.empty() ? "" : ", ") + name;
        }
        warning("player absent from tournament(s) " + names,
                player.ToString());
      }
    }
  }
  return report;
}

TableFormat FormatForPath(std::string_view path) {
  constexpr std::string_view kJsonExt = ".json";
  if (path.size() >= kJsonExt.size() &&
      path.substr(path.size() - kJsonExt.size()) == kJsonExt) {
    return TableFormat::kJson;
  }
  return TableFormat::kCsv;
}

}  // namespace epp
