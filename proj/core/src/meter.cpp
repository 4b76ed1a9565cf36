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

#include "feynroute/meter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

namespace feynroute {

PointerState::PointerState(double alpha, double center) : alpha_(alpha), center_(center) {
    if (!(alpha > 0.0) || !std::isfinite(alpha) || !std::isfinite(center)) {
        throw OperatorError("pointer width alpha must be positive and finite");
    }
}

double PointerState::sigma() const {
    return 1.0 / std::sqrt(2.0 * alpha_);
}

double PointerState::amplitude(double x) const {
    // Normalized so that the integral of |G|^2 is one.
    double d = x - center_;
    return std::pow(2.0 * alpha_ / std::numbers::pi, 0.25) * std::exp(-alpha_ * d * d);
}

Complex ClassAmplitudes::total() const {
    return std::accumulate(amplitudes.begin(), amplitudes.end(), Complex(0.0, 0.0));
}

ClassAmplitudes class_amplitudes(const State &initial, const State &final_state, const ProjectorFamily &family) {
    if (initial.dim() != family.dim() || final_state.dim() != family.dim()) {
        throw DimensionError("class_amplitudes: states and family have different dimensions");
    }
    ClassAmplitudes out;
    out.eigenvalues = family.eigenvalues();
    out.amplitudes.assign(family.class_count(), Complex(0.0, 0.0));
    for (std::size_t m = 0; m < family.class_count(); ++m) {
        for (std::size_t n : family.members(m)) {
            out.amplitudes[m] += std::conj(final_state[n]) * initial[n];
        }
    }
    return out;
}

MeteredTable::MeteredTable(std::vector<double> eigenvalues, std::vector<std::vector<double>> weights)
    : eigenvalues_(std::move(eigenvalues)), weights_(std::move(weights)) {
    for (const auto &row : weights_) {
        if (row.size() != eigenvalues_.size()) {
            throw DimensionError("metered table row has the wrong number of classes");
        }
    }
}

double MeteredTable::marginal(std::size_t z) const {
    return std::accumulate(weights_[z].begin(), weights_[z].end(), 0.0);
}

double MeteredTable::total() const {
    double sum = 0.0;
    for (std::size_t z = 0; z < weights_.size(); ++z) {
        sum += marginal(z);
    }
    return sum;
}

void require_orthonormal_basis(std::span<const State> finals, std::size_t dim) {
    for (std::size_t z = 0; z < finals.size(); ++z) {
        if (finals[z].dim() != dim) {
            throw DimensionError("final state " + std::to_string(z) + " has dimension " +
                                 std::to_string(finals[z].dim()) + ", expected " + std::to_string(dim));
        }
    }
    if (finals.size() != dim) {
        throw BasisError("expected " + std::to_string(dim) + " final states for a complete basis, got " +
                         std::to_string(finals.size()));
    }
    if (auto bad = find_orthonormality_violation(finals)) {
        throw BasisError("final states " + std::to_string(bad->first) + " and " + std::to_string(bad->second) +
                         " are not orthonormal");
    }
}

MeteredTable metered_probabilities(const State &initial, std::span<const State> finals,
                                   const ProjectorFamily &family) {
    require_orthonormal_basis(finals, family.dim());
    std::vector<std::vector<double>> weights;
    weights.reserve(finals.size());
    for (const auto &z : finals) {
        ClassAmplitudes amps = class_amplitudes(initial, z, family);
        std::vector<double> row;
        row.reserve(amps.amplitudes.size());
        for (Complex a : amps.amplitudes) {
            row.push_back(std::norm(a));
        }
        weights.push_back(std::move(row));
    }
    return MeteredTable(family.eigenvalues(), std::move(weights));
}

ClassAmplitudes functional_classes(const PathEnsemble &ensemble) {
    if (!ensemble.has_functionals()) {
        throw FunctionalError("path ensemble has no functional values attached");
    }
    std::map<double, Complex> merged;
    for (const auto &term : ensemble.terms) {
        merged[*term.functional] += term.amplitude;
    }
    ClassAmplitudes out;
    for (const auto &[value, amp] : merged) {
        out.eigenvalues.push_back(value);
        out.amplitudes.push_back(amp);
    }
    return out;
}

std::vector<double> default_pointer_grid(const PathEnsemble &ensemble, const PointerState &pointer,
                                         std::size_t points) {
    ClassAmplitudes classes = functional_classes(ensemble);
    if (points < 2) {
        throw DimensionError("pointer grid needs at least two points");
    }
    double lo = pointer.center();
    double hi = pointer.center();
    if (!classes.eigenvalues.empty()) {
        lo += classes.eigenvalues.front();
        hi += classes.eigenvalues.back();
    }
    lo -= 5.0 * pointer.sigma();
    hi += 5.0 * pointer.sigma();
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return grid;
}

PointerDensity pointer_distribution(const PathEnsemble &ensemble, const PointerState &pointer,
                                    std::span<const double> grid) {
    ClassAmplitudes classes = functional_classes(ensemble);
    PointerDensity out;
    out.x.assign(grid.begin(), grid.end());
    out.density.reserve(grid.size());
    for (double x : grid) {
        Complex amp = 0.0;
        for (std::size_t c = 0; c < classes.amplitudes.size(); ++c) {
            amp += pointer.amplitude(x - classes.eigenvalues[c]) * classes.amplitudes[c];
        }
        out.density.push_back(std::norm(amp));
    }
    return out;
}

double pointer_window_probability(const PathEnsemble &ensemble, const PointerState &pointer, double lo,
                                  double hi) {
    ClassAmplitudes classes = functional_classes(ensemble);
    const double alpha = pointer.alpha();
    const double root = std::sqrt(2.0 * alpha);
    double total = 0.0;
    for (std::size_t a = 0; a < classes.amplitudes.size(); ++a) {
        for (std::size_t b = 0; b < classes.amplitudes.size(); ++b) {
            double p = pointer.center() + classes.eigenvalues[a];
            double q = pointer.center() + classes.eigenvalues[b];
            double mid = 0.5 * (p + q);
            double overlap = std::exp(-0.5 * alpha * (p - q) * (p - q));
            double window = 0.5 * (std::erf(root * (hi - mid)) - std::erf(root * (lo - mid)));
            total += (classes.amplitudes[a] * std::conj(classes.amplitudes[b])).real() * overlap * window;
        }
    }
    return total;
}

}  // namespace feynroute
