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

#ifndef EPP_CLI_H_
#define EPP_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "epp/error.h"

namespace epp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitComputation = 3;

// Maps a library error to the CLI exit-code taxonomy.
int ExitCodeFor(ErrorCode code);

// Runs the `epp` command line. args[0] is the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace epp::cli

#endif  // EPP_CLI_H_
