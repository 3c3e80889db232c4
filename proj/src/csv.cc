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

#include "epp/csv.h"

#include <charconv>
#include <cmath>
#include <system_error>

#include "epp/error.h"

namespace epp::csv {
namespace {

std::string AtLine(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

}  // namespace

std::vector<Row> ReadRows(std::string_view text) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  std::size_t line = 1;
  row.line = line;
  bool in_quotes = false;
  bool after_quote = false;  // just closed a quoted field
  bool row_has_content = false;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    after_quote = false;
  };
  auto end_row = [&] {
    if (row_has_content) {
      end_field();
      rows.push_back(std::move(row));
    }
    row = Row{};
    field.clear();
    after_quote = false;
    row_has_content = false;
  };

  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '\r') {
      if (pos + 1 < text.size() && text[pos + 1] == '\n') continue;
      throw EppError(ErrorCode::kParseError, AtLine(line) + "bare CR");
    }
    if (c == '\n') {
      end_row();
      ++line;
      row.line = line;
      continue;
    }
    if (!row_has_content) {
      row_has_content = true;
      row.line = line;
    }
    if (c == ',') {
      end_field();
      continue;
    }
    if (after_quote) {
      throw EppError(ErrorCode::kParseError,
                     AtLine(line) + "unexpected character after quoted field");
    }
    if (c == '"') {
      if (!field.empty()) {
        throw EppError(ErrorCode::kParseError,
                       AtLine(line) + "quote inside unquoted field");
      }
      in_quotes = true;
      continue;
    }
    field.push_back(c);
  }
  if (in_quotes) {
    throw EppError(ErrorCode::kParseError,
                   AtLine(line) + "unterminated quoted field");
  }
  end_row();
  return rows;
}

std::string Escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string JoinLine(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out.push_back(',');
    out += fields[k];
  }
  out.push_back('\n');
  return out;
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, end);
}

double ParseDouble(std::string_view field, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw EppError(ErrorCode::kParseError,
                   AtLine(line) + "not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw EppError(ErrorCode::kParseError,
                   AtLine(line) + "non-finite value '" + std::string(field) +
                       "'");
  }
  return value;
}

long long ParseInteger(std::string_view field, std::size_t line) {
  long long value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw EppError(ErrorCode::kParseError,
                   AtLine(line) + "not an integer: '" + std::string(field) +
                       "'");
  }
  return value;
}

}  // namespace epp::csv
