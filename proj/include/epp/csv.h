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

#ifndef EPP_CSV_H_
#define EPP_CSV_H_

// Minimal RFC-4180 reader/writer shared by every CSV surface of the project.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace epp::csv {

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the row starts
};

// Splits `text` into rows. Quoted fields may contain commas, doubled quotes
// and line breaks. Blank lines are skipped. Throws kParseError on an
// unterminated quote or stray characters after a closing quote.
std::vector<Row> ReadRows(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string Escape(std::string_view field);

// Joins already-formatted fields into one CRLF-free line (with '\n').
std::string JoinLine(const std::vector<std::string>& fields);

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);

// Strict parsers: the whole field must be consumed. Throw kParseError.
double ParseDouble(std::string_view field, std::size_t line);
long long ParseInteger(std::string_view field, std::size_t line);

}  // namespace epp::csv

#endif  // EPP_CSV_H_
