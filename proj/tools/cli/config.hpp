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

#ifndef FEYNROUTE_CLI_CONFIG_HPP
#define FEYNROUTE_CLI_CONFIG_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "feynroute/hilbert.hpp"

namespace feynroute::cli {

/// A scenario file that does not parse or does not validate. `line` is
/// 1-based, or 0 when the problem is not tied to one line.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string source, std::size_t line, const std::string &message);

    const std::string &source() const {
        return source_;
    }
    std::size_t line() const {
        return line_;
    }

   private:
    std::string source_;
    std::size_t line_;
};

/// Evaluates a scalar such as `1`, `-1/3`, `0.5-2i`, `i`, `(1+i)/sqrt(2)`.
/// Throws std::invalid_argument on malformed input.
Complex parse_complex(std::string_view text);

/// As parse_complex, requiring a zero imaginary part.
double parse_real(std::string_view text);

struct NamedState {
    std::string name;
    State state;
    std::size_t line = 0;
};

struct NamedFamily {
    std::string name;
    ProjectorFamily family;
    std::size_t line = 0;
};

struct NamedUnitary {
    std::string name;
    Operator matrix;
    std::size_t line = 0;
};

/// `none`, a family name, or `product A B`.
struct ContextSpec {
    enum class Kind { none, family, product };
    Kind kind = Kind::none;
    std::string name;
    std::string first;
    std::string second;
    std::size_t line = 0;
};

struct ConstraintSpec {
    std::string tag;
    std::vector<double> coeffs;
    double rhs = 0.0;
    std::size_t line = 0;
};

struct BoundSpec {
    std::string variable;
    double lower = 0.0;
    double upper = 1.0;
    std::size_t line = 0;
};

struct ScenarioConfig {
    std::string name;
    std::size_t dim = 0;
    State initial = State::basis(1, 0);
    std::vector<NamedState> finals;
    /// Index into `finals` of the post-selected state.
    std::size_t postselect = 0;
    std::vector<NamedFamily> families;
    std::vector<ContextSpec> contexts;
    std::vector<NamedUnitary> unitaries;
    /// Name of the transition matrix for the two-kick jump measurement.
    std::optional<std::string> deltan;
    std::vector<std::string> variables;
    std::vector<BoundSpec> bounds;
    std::vector<ConstraintSpec> constraints;

    const ProjectorFamily &family(const std::string &name) const;
    const Operator &unitary(const std::string &name) const;
};

/// Parses and validates a scenario. `source` names the input in messages.
ScenarioConfig parse_scenario(std::string_view text, const std::string &source = "<input>");

/// Reads and parses a scenario file; a missing file is a ConfigError.
ScenarioConfig load_scenario(const std::string &path);

}  // namespace feynroute::cli

#endif  // FEYNROUTE_CLI_CONFIG_HPP
