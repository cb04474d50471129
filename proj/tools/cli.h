// Copyright 2026 The sparql2q Authors.
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

#ifndef SPARQL2Q_TOOLS_CLI_H_
#define SPARQL2Q_TOOLS_CLI_H_

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sparql2q::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;  // missing input or conflicting config
inline constexpr int kExitTransport = 3;
inline constexpr int kExitInvariant = 4;

// Flat "key = value" config. Keys are flag names without dashes; a
// "<stage>.key" entry applies to that subcommand only and overrides the
// global key. Blank lines and lines starting with '#' are ignored.
using ConfigFile = std::map<std::string, std::string>;

ConfigFile ParseConfig(std::string_view text, std::string_view source);
ConfigFile LoadConfig(const std::string &path);

// Runs the command line `args` (args[0] is the program name). Errors are
// reported as a single "error: <Class>: <message>" line on `err`.
int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace sparql2q::cli

#endif  // SPARQL2Q_TOOLS_CLI_H_
