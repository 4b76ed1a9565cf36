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

#ifndef FEYNROUTE_CLI_REPORT_HPP
#define FEYNROUTE_CLI_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "feynroute/classical.hpp"
#include "feynroute/hilbert.hpp"

namespace feynroute::cli {

// Reports are plain values so that the structured form can round-trip
// exactly and compare with ==.

struct ContextReport {
    std::string name;
    std::vector<double> eigenvalues;
    /// finals by classes.
    std::vector<std::vector<double>> weights;
    std::vector<double> marginals;
    double total = 0.0;
    /// Conditional class probabilities at the post-selected final.
    std::vector<double> conditionals;
    bool sharp = false;
    double sharp_value = 0.0;

    bool operator==(const ContextReport &) const = default;
};

struct SharpnessEntry {
    bool sharp = false;
    double value = 0.0;

    bool operator==(const SharpnessEntry &) const = default;
};

struct ProductRuleEntry {
    std::string first;
    std::string second;
    /// "post-selected" or "pre-selected".
    std::string ensemble;
    SharpnessEntry a;
    SharpnessEntry b;
    SharpnessEntry product;
    /// "holds" or "fails".
    std::string verdict;

    bool operator==(const ProductRuleEntry &) const = default;
};

struct DeltaNReport {
    std::string unitary;
    double minus_one = 0.0;
    double zero = 0.0;
    double plus_one = 0.0;

    bool operator==(const DeltaNReport &) const = default;
};

struct ConstraintEntry {
    std::string tag;
    std::vector<double> coeffs;
    double rhs = 0.0;

    bool operator==(const ConstraintEntry &) const = default;
};

struct CertificateReport {
    std::vector<std::string> tags;
    std::string pivot_tag;
    std::vector<double> pivot_coeffs;
    double required = 0.0;
    double implied_min = 0.0;
    double implied_max = 0.0;
    std::vector<std::vector<std::string>> alternatives;

    bool operator==(const CertificateReport &) const = default;
};

struct FeasibilityReport {
    std::vector<std::string> variables;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<ConstraintEntry> constraints;
    bool feasible = false;
    std::vector<double> witness;
    std::optional<CertificateReport> certificate;
    int rank = 0;
    bool equalities_consistent = true;

    bool operator==(const FeasibilityReport &) const = default;
};

struct ScenarioReport {
    std::string name;
    std::size_t dim = 0;
    std::vector<Complex> initial;
    std::vector<std::string> finals;
    std::string postselect;
    /// <z|n><n|i> for the post-selected z, one per basis state n.
    std::vector<Complex> path_amplitudes;
    std::vector<ContextReport> contexts;
    std::vector<ProductRuleEntry> product_rules;
    std::optional<DeltaNReport> deltan;
    std::optional<FeasibilityReport> feasibility;

    bool operator==(const ScenarioReport &) const = default;
};

struct NetworkEntry {
    std::string context;
    std::vector<double> source;
    /// boxes by finals.
    std::vector<std::vector<double>> branching;

    bool operator==(const NetworkEntry &) const = default;
};

struct SimulatedContext {
    std::string context;
    /// Expected and observed joint frequencies p0[k] p(k, z), boxes by finals.
    std::vector<std::vector<double>> expected;
    std::vector<std::vector<double>> observed;
    double max_sigma = 0.0;

    bool operator==(const SimulatedContext &) const = default;
};

struct SimulationReport {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    std::vector<SimulatedContext> contexts;
    double max_sigma = 0.0;

    bool operator==(const SimulationReport &) const = default;
};

struct ClassicalReport {
    std::string final_state;
    FeasibilityReport noninvasive;
    FeasibilityReport lid_local;
    std::vector<NetworkEntry> model;
    double reproduction_error = 0.0;
    std::optional<SimulationReport> simulation;

    bool operator==(const ClassicalReport &) const = default;
};

/// Route tables, conditionals, sharpness, product-rule verdicts and the
/// optional jump and feasibility analyses of a validated scenario.
ScenarioReport build_scenario_report(const ScenarioConfig &config);

FeasibilityReport build_feasibility_report(const FeasibilityProblem &problem);

/// The three-box analysis post-selected in f. `trials == 0` skips the
/// simulation.
ClassicalReport build_classical_report(std::uint64_t trials, std::uint64_t seed, unsigned workers = 0);

enum class Format { table, structured };

std::string emit(const ScenarioReport &report, Format format);
std::string emit(const ClassicalReport &report, Format format);

/// Inverses of emit(..., Format::structured). Throw std::invalid_argument on
/// malformed input.
ScenarioReport parse_scenario_report(const std::string &text);
ClassicalReport parse_classical_report(const std::string &text);

/// `x` to 12 significant digits, followed by `(p/q)` when x lies within
/// 1e-9 of a fraction with 1 < q <= 100.
std::string format_probability(double x);

}  // namespace feynroute::cli

#endif  // FEYNROUTE_CLI_REPORT_HPP
