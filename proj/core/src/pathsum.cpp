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

#include "feynroute/pathsum.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace feynroute {

bool Path::is_constant() const {
    return std::adjacent_find(indices.begin(), indices.end(), std::not_equal_to<>()) == indices.end();
}

SlicedEvolution::SlicedEvolution(std::vector<Operator> propagators, std::vector<double> weights)
    : propagators_(std::move(propagators)), weights_(std::move(weights)) {
    if (propagators_.empty()) {
        throw DimensionError("sliced evolution needs at least one slice");
    }
    std::size_t n = propagators_.front().dim();
    for (std::size_t j = 0; j < propagators_.size(); ++j) {
        if (propagators_[j].dim() != n) {
            throw DimensionError("slice " + std::to_string(j) + " has dimension " +
                                 std::to_string(propagators_[j].dim()) + ", expected " + std::to_string(n));
        }
        if (!propagators_[j].is_unitary()) {
            throw UnitarityError("slice propagator " + std::to_string(j) + " is not unitary");
        }
    }
    if (weights_.empty()) {
        weights_.assign(propagators_.size(), 0.0);
    }
    if (weights_.size() != propagators_.size()) {
        throw DimensionError("expected " + std::to_string(propagators_.size()) + " boundary weights, got " +
                             std::to_string(weights_.size()));
    }
}

SlicedEvolution SlicedEvolution::free(std::size_t dim, std::size_t slices, std::vector<double> weights) {
    return SlicedEvolution(std::vector<Operator>(slices, Operator::identity(dim)), std::move(weights));
}

SlicedEvolution SlicedEvolution::from_hamiltonian(const Operator &h, double total_time, std::size_t slices) {
    if (slices == 0) {
        throw DimensionError("need at least one slice");
    }
    Operator slice = pade_slice(h, total_time / static_cast<double>(slices));
    return SlicedEvolution(std::vector<Operator>(slices, slice));
}

Operator SlicedEvolution::total_propagator() const {
    ComplexMatrix u = propagators_.front().matrix();
    for (std::size_t j = 1; j < propagators_.size(); ++j) {
        u = propagators_[j].matrix() * u;
    }
    return Operator::from_matrix(std::move(u));
}

Operator pade_slice(const Operator &h, double dt) {
    if (!h.is_hermitian()) {
        throw OperatorError("slice generator must be Hermitian");
    }
    auto n = static_cast<Eigen::Index>(h.dim());
    ComplexMatrix x = Complex(0.0, -dt) * h.matrix();
    ComplexMatrix x2 = x * x;
    ComplexMatrix id = ComplexMatrix::Identity(n, n);
    ComplexMatrix numerator = id + 0.5 * x + x2 / 12.0;
    ComplexMatrix denominator = id - 0.5 * x + x2 / 12.0;
    return Operator::from_matrix(denominator.partialPivLu().solve(numerator));
}

Complex PathEnsemble::total() const {
    Complex sum = 0.0;
    for (const auto &term : terms) {
        sum += term.amplitude;
    }
    return sum;
}

bool PathEnsemble::has_functionals() const {
    return std::all_of(terms.begin(), terms.end(), [](const PathTerm &t) { return t.functional.has_value(); });
}

namespace {

void check_endpoints(const State &initial, const State &final_state, const SlicedEvolution &evo) {
    if (initial.dim() != evo.dim() || final_state.dim() != evo.dim()) {
        throw DimensionError("states of dimension " + std::to_string(initial.dim()) + "/" +
                             std::to_string(final_state.dim()) + " do not match evolution of dimension " +
                             std::to_string(evo.dim()));
    }
}

}  // namespace

Complex path_amplitude(const State &initial, const State &final_state, const Path &path,
                       const SlicedEvolution &evo) {
    check_endpoints(initial, final_state, evo);
    if (path.length() != evo.slices()) {
        throw DimensionError("path length " + std::to_string(path.length()) + " does not match " +
                             std::to_string(evo.slices()) + " slices");
    }
    for (std::size_t n : path.indices) {
        if (n >= evo.dim()) {
            throw DimensionError("path index " + std::to_string(n) + " out of range");
        }
    }
    // <n_1|U_1|i>
    const auto &first = path.indices.front();
    Complex amp = (evo.propagator(0).matrix().row(static_cast<Eigen::Index>(first)) * initial.coeffs())(0);
    for (std::size_t j = 1; j < path.length(); ++j) {
        amp *= evo.propagator(j)(path.indices[j], path.indices[j - 1]);
    }
    return amp * std::conj(final_state[path.indices.back()]);
}

PathEnsemble enumerate(const State &initial, const State &final_state, const SlicedEvolution &evo,
                       const EnumerateOptions &options) {
    check_endpoints(initial, final_state, evo);
    const std::size_t n = evo.dim();
    const std::size_t k = evo.slices();

    std::uint64_t count = 1;
    for (std::size_t j = 0; j < k; ++j) {
        if (count > options.cap / n) {
            throw PathExplosionError(std::to_string(n) + "^" + std::to_string(k) + " paths exceed the cap of " +
                                     std::to_string(options.cap));
        }
        count *= n;
    }

    // Entry amplitudes <m|U_1|i>, reused for every path.
    ComplexVector entry = evo.propagator(0).matrix() * initial.coeffs();

    PathEnsemble out;
    out.dim = n;
    out.slices = k;
    out.terms.reserve(options.prune ? 0 : static_cast<std::size_t>(count));

    // Odometer over index sequences in lexicographic order; prefix[j] holds
    // the amplitude accumulated through boundary j.
    std::vector<std::size_t> idx(k, 0);
    std::vector<Complex> prefix(k);
    auto refresh_from = [&](std::size_t start) {
        for (std::size_t j = start; j < k; ++j) {
            prefix[j] = j == 0 ? entry[static_cast<Eigen::Index>(idx[0])]
                               : prefix[j - 1] * evo.propagator(j)(idx[j], idx[j - 1]);
        }
    };
    refresh_from(0);
    while (true) {
        Complex amp = prefix[k - 1] * std::conj(final_state[idx[k - 1]]);
        if (!options.prune || amp != Complex(0.0, 0.0)) {
            out.terms.push_back(PathTerm{Path{idx}, amp, std::nullopt});
        }
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] + 1 == n) {
            idx[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) {
            break;
        }
        ++idx[pos - 1];
        refresh_from(pos - 1);
    }
    return out;
}

double path_functional(const Path &path, std::span<const double> weights, const ProjectorFamily &family) {
    if (weights.size() != path.length()) {
        throw DimensionError("weight list of length " + std::to_string(weights.size()) + " for path of length " +
                             std::to_string(path.length()));
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < path.length(); ++j) {
        if (path.indices[j] >= family.dim()) {
            throw DimensionError("path index " + std::to_string(path.indices[j]) + " outside family");
        }
        sum += weights[j] * family.label(path.indices[j]);
    }
    return sum;
}

PathEnsemble with_functionals(PathEnsemble ensemble, std::span<const double> weights,
                              const ProjectorFamily &family) {
    if (family.dim() != ensemble.dim) {
        throw DimensionError("family dimension does not match ensemble");
    }
    for (auto &term : ensemble.terms) {
        term.functional = path_functional(term.path, weights, family);
    }
    return ensemble;
}

Complex total_amplitude(const State &initial, const State &final_state, const Operator &h, double total_time,
                        std::size_t slices) {
    if (slices == 0) {
        throw DimensionError("need at least one slice");
    }
    if (initial.dim() != h.dim() || final_state.dim() != h.dim()) {
        throw DimensionError("state and Hamiltonian dimensions differ");
    }
    Operator slice = pade_slice(h, total_time / static_cast<double>(slices));
    ComplexVector psi = initial.coeffs();
    for (std::size_t j = 0; j < slices; ++j) {
        psi = slice.matrix() * psi;
    }
    return final_state.coeffs().dot(psi);
}

}  // namespace feynroute
