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

#include "feynroute/condprob.hpp"

#include <cmath>
#include <numeric>

#include "feynroute/pathsum.hpp"

namespace feynroute {

double RouteTable::weight(std::size_t z, std::size_t m) const {
    return routes.at(z * eigenvalues.size() + m).probability;
}

double RouteTable::marginal(std::size_t z) const {
    double sum = 0.0;
    for (std::size_t m = 0; m < eigenvalues.size(); ++m) {
        sum += weight(z, m);
    }
    return sum;
}

double RouteTable::total() const {
    double sum = 0.0;
    for (const auto &r : routes) {
        sum += r.probability;
    }
    return sum;
}

std::vector<double> RouteTable::conditionals_at(std::size_t z) const {
    std::vector<double> out;
    for (const auto &c : conditionals) {
        if (c.final_index == z) {
            out.push_back(c.probability);
        }
    }
    return out;
}

RouteTable route_probabilities(const State &initial, std::span<const State> finals, const ProjectorFamily &family,
                               std::string scenario) {
    MeteredTable table = metered_probabilities(initial, finals, family);
    RouteTable out;
    out.scenario = std::move(scenario);
    out.eigenvalues = table.eigenvalues();
    out.finals = table.finals();
    for (std::size_t z = 0; z < table.finals(); ++z) {
        for (std::size_t m = 0; m < table.classes(); ++m) {
            out.routes.push_back(Route{z, m, table.eigenvalues()[m], table.weight(z, m)});
        }
    }
    for (std::size_t z = 0; z < table.finals(); ++z) {
        double arrivals = table.marginal(z);
        if (arrivals <= kArrivalFloor) {
            continue;
        }
        for (std::size_t m = 0; m < table.classes(); ++m) {
            out.conditionals.push_back(Route{z, m, table.eigenvalues()[m], table.weight(z, m) / arrivals});
        }
    }
    return out;
}

namespace {

ClassConditionals normalize(std::vector<double> eigenvalues, std::vector<double> weights) {
    double denominator = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(denominator > kArrivalFloor)) {
        throw ConditioningError("post-selected state is never reached under this measurement");
    }
    for (double &w : weights) {
        w /= denominator;
    }
    return ClassConditionals{std::move(eigenvalues), std::move(weights)};
}

void check_dims(const State &initial, const State &final_state, const ProjectorFamily &family) {
    if (initial.dim() != family.dim() || final_state.dim() != family.dim()) {
        throw DimensionError("states and family have different dimensions");
    }
}

}  // namespace

ClassConditionals abl_conditional(const State &initial, const State &final_state, const ProjectorFamily &family) {
    check_dims(initial, final_state, family);
    std::vector<double> weights;
    weights.reserve(family.class_count());
    for (std::size_t m = 0; m < family.class_count(); ++m) {
        weights.push_back(std::norm(family.projector(m).matrix_element(final_state, initial)));
    }
    return normalize(family.eigenvalues(), std::move(weights));
}

ClassConditionals feynman_conditional(const State &initial, const State &final_state,
                                      const ProjectorFamily &family) {
    check_dims(initial, final_state, family);
    // Constant paths of a single impulsive kick, merged by the value the
    // pointer records.
    PathEnsemble ensemble = enumerate(initial, final_state, SlicedEvolution::free(family.dim(), 1));
    std::vector<double> kick{1.0};
    ClassAmplitudes routes = functional_classes(with_functionals(std::move(ensemble), kick, family));
    std::vector<double> weights;
    weights.reserve(routes.amplitudes.size());
    for (Complex a : routes.amplitudes) {
        weights.push_back(std::norm(a));
    }
    return normalize(std::move(routes.eigenvalues), std::move(weights));
}

double DeltaNProbabilities::at(int delta) const {
    switch (delta) {
        case -1:
            return minus_one;
        case 0:
            return zero;
        case 1:
            return plus_one;
        default:
            return 0.0;
    }
}

DeltaNProbabilities delta_n_probabilities(const Operator &s, const State &initial, const State &final_state) {
    if (s.dim() != 2 || initial.dim() != 2 || final_state.dim() != 2) {
        throw DimensionError("the Delta n measurement is defined for two-level systems");
    }
    if (!s.is_unitary()) {
        throw UnitarityError("transition matrix S is not unitary");
    }
    // Kick -n just before S and +n just after; the pointer ends displaced by
    // n_after - n_before.
    SlicedEvolution evo({Operator::identity(2), s}, {-1.0, 1.0});
    ProjectorFamily level = ProjectorFamily::from_labels({1.0, 2.0});
    PathEnsemble paths = with_functionals(enumerate(initial, final_state, evo), evo.weights(), level);
    ClassAmplitudes outcomes = functional_classes(paths);

    std::vector<double> weights;
    for (Complex a : outcomes.amplitudes) {
        weights.push_back(std::norm(a));
    }
    ClassConditionals p = normalize(outcomes.eigenvalues, std::move(weights));
    DeltaNProbabilities out;
    for (std::size_t c = 0; c < p.eigenvalues.size(); ++c) {
        int delta = static_cast<int>(std::lround(p.eigenvalues[c]));
        if (delta == -1) {
            out.minus_one = p.probabilities[c];
        } else if (delta == 0) {
            out.zero = p.probabilities[c];
        } else {
            out.plus_one = p.probabilities[c];
        }
    }
    return out;
}

double preselected_average(const State &initial, const ProjectorFamily &family, std::span<const State> finals) {
    if (initial.dim() != family.dim()) {
        throw DimensionError("state and family have different dimensions");
    }
    require_orthonormal_basis(finals, family.dim());
    double sum = 0.0;
    for (std::size_t m = 0; m < family.class_count(); ++m) {
        Operator projector = family.projector(m);
        for (const auto &z : finals) {
            sum += family.eigenvalue(m) * std::norm(projector.matrix_element(z, initial));
        }
    }
    return sum;
}

double preselected_average_direct(const State &initial, const ProjectorFamily &family) {
    if (initial.dim() != family.dim()) {
        throw DimensionError("state and family have different dimensions");
    }
    double sum = 0.0;
    for (std::size_t n = 0; n < family.dim(); ++n) {
        sum += family.label(n) * std::norm(initial[n]);
    }
    return sum;
}

Sharpness sharpness(const ClassConditionals &conditionals) {
    Sharpness out;
    int certain = 0;
    for (std::size_t m = 0; m < conditionals.probabilities.size(); ++m) {
        if (std::abs(conditionals.probabilities[m] - 1.0) <= kSharpnessTolerance) {
            ++certain;
            out.value = conditionals.eigenvalues[m];
        }
    }
    out.sharp = certain == 1;
    if (!out.sharp) {
        out.value = 0.0;
    }
    return out;
}

namespace {

SharpnessReport verdict(Sharpness a, Sharpness b, Sharpness c) {
    SharpnessReport report{a, b, c, ProductRule::holds};
    if (a.sharp && b.sharp && c.sharp && std::abs(c.value - a.value * b.value) > kSharpnessTolerance) {
        report.verdict = ProductRule::fails;
    }
    return report;
}

ClassConditionals preselected_distribution(const State &initial, const ProjectorFamily &family) {
    std::vector<double> weights(family.class_count(), 0.0);
    for (std::size_t n = 0; n < family.dim(); ++n) {
        weights[family.class_of(n)] += std::norm(initial[n]);
    }
    return ClassConditionals{family.eigenvalues(), std::move(weights)};
}

}  // namespace

SharpnessReport product_rule_report(const State &initial, const State &final_state, const ProjectorFamily &fam_a,
                                    const ProjectorFamily &fam_b) {
    ProjectorFamily fam_c = product_family(fam_a, fam_b);
    return verdict(sharpness(abl_conditional(initial, final_state, fam_a)),
                   sharpness(abl_conditional(initial, final_state, fam_b)),
                   sharpness(abl_conditional(initial, final_state, fam_c)));
}

SharpnessReport preselected_product_rule_report(const State &initial, const ProjectorFamily &fam_a,
                                                const ProjectorFamily &fam_b) {
    if (initial.dim() != fam_a.dim()) {
        throw DimensionError("state and family have different dimensions");
    }
    ProjectorFamily fam_c = product_family(fam_a, fam_b);
    return verdict(sharpness(preselected_distribution(initial, fam_a)),
                   sharpness(preselected_distribution(initial, fam_b)),
                   sharpness(preselected_distribution(initial, fam_c)));
}

}  // namespace feynroute
