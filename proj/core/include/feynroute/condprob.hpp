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

#ifndef FEYNROUTE_CONDPROB_HPP
#define FEYNROUTE_CONDPROB_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "feynroute/hilbert.hpp"
#include "feynroute/meter.hpp"

namespace feynroute {

/// A conditional probability counts as certain when within this distance
/// of one.
inline constexpr double kSharpnessTolerance = 1e-9;

/// Final-state probabilities below this are treated as "never arrives" when
/// deciding whether a conditional exists.
inline constexpr double kArrivalFloor = 1e-15;

struct Route {
    std::size_t final_index;
    std::size_t class_index;
    double eigenvalue;
    double probability;
};

/// Routes (final, class) with their Feynman-rule probabilities w^{z<-i}_m,
/// and the conditionals P^{z<-i}_m for every final that is reached.
struct RouteTable {
    std::string scenario;
    std::vector<double> eigenvalues;
    std::size_t finals = 0;
    std::vector<Route> routes;
    std::vector<Route> conditionals;

    double weight(std::size_t z, std::size_t m) const;
    double marginal(std::size_t z) const;
    double total() const;
    /// Conditionals at final z, one per class; empty if z is never reached.
    std::vector<double> conditionals_at(std::size_t z) const;
};

RouteTable route_probabilities(const State &initial, std::span<const State> finals, const ProjectorFamily &family,
                               std::string scenario = {});

struct ClassConditionals {
    std::vector<double> eigenvalues;
    std::vector<double> probabilities;
};

/// ABL form: |<f|P_m|i>|^2 / sum_m' |<f|P_m'|i>|^2, built from projector
/// matrices. Throws ConditioningError if every class has zero amplitude.
ClassConditionals abl_conditional(const State &initial, const State &final_state, const ProjectorFamily &family);

/// Frequency-ratio form: w^{f<-i}_m / sum_m' w^{f<-i}_m', built from
/// summed path amplitudes.
ClassConditionals feynman_conditional(const State &initial, const State &final_state,
                                      const ProjectorFamily &family);

/// Outcome probabilities of the two-kick measurement of the jump
/// Delta n = n_after - n_before across a two-level transition S.
struct DeltaNProbabilities {
    double minus_one = 0.0;
    double zero = 0.0;
    double plus_one = 0.0;

    double at(int delta) const;
    double sum() const {
        return minus_one + zero + plus_one;
    }
};

/// Path amplitudes are Phi_{j'j} = <f|j'> S_{j'j} <j|i>. Throws
/// DimensionError unless dim == 2, UnitarityError for non-unitary S, and
/// ConditioningError when no path reaches f.
DeltaNProbabilities delta_n_probabilities(const Operator &s, const State &initial, const State &final_state);

/// sum_z sum_m F_m |<z|P_m|i>|^2 over a complete orthonormal basis.
double preselected_average(const State &initial, const ProjectorFamily &family, std::span<const State> finals);

/// sum_n F(n) |<n|i>|^2.
double preselected_average_direct(const State &initial, const ProjectorFamily &family);

struct Sharpness {
    bool sharp = false;
    double value = 0.0;
};

/// Sharp iff exactly one class has probability within kSharpnessTolerance
/// of one.
Sharpness sharpness(const ClassConditionals &conditionals);

enum class ProductRule { holds, fails };

struct SharpnessReport {
    Sharpness a;
    Sharpness b;
    Sharpness product;
    ProductRule verdict = ProductRule::holds;
};

/// Sharpness of A, B and A*B in the ensemble pre-selected in `initial` and
/// post-selected in `final_state`. Fails iff all three are sharp and the
/// product value differs from a*b.
SharpnessReport product_rule_report(const State &initial, const State &final_state, const ProjectorFamily &fam_a,
                                    const ProjectorFamily &fam_b);

/// Same verdict for the pre-selected-only ensemble, where class m occurs
/// with probability <i|P_m|i>.
SharpnessReport preselected_product_rule_report(const State &initial, const ProjectorFamily &fam_a,
                                                const ProjectorFamily &fam_b);

}  // namespace feynroute

#endif  // FEYNROUTE_CONDPROB_HPP
