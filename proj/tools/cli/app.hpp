// Copyright 2026 The feynroute Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef FEYNROUTE_CLI_APP_HPP
#define FEYNROUTE_CLI_APP_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "report.hpp"

namespace feynroute::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitComputation = 3;

inline constexpr std::uint64_t kDefaultTrials = 100000;
inline constexpr std::uint64_t kDefaultSeed = 2026;

/// Text of the shipped three-box scenario, embedded at build time.
const char *threebox_scenario_text();

std::string run_threebox(Format format);
std::string run_classical(std::uint64_t trials, std::uint64_t seed, Format format);
std::string run_scenario(const std::string &path, Format format);

/// Maps an in-flight exception to an exit code: 2 for bad input, 3 for
/// failures of the computation itself.
int exit_code_for(const std::exception &e);

/// Runs the command line `args` (without the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace feynroute::cli

#endif  // FEYNROUTE_CLI_APP_HPP
