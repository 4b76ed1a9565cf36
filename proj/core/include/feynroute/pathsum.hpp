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

#ifndef FEYNROUTE_PATHSUM_HPP
#define FEYNROUTE_PATHSUM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "feynroute/hilbert.hpp"

namespace feynroute {

/// A virtual path: one basis index per slice boundary. Boundary j sits
/// immediately after slice propagator j.
struct Path {
    std::vector<std::size_t> indices;

    std::size_t length() const {
        return indices.size();
    }
    bool is_constant() const;
    bool operator==(const Path &) const = default;
    auto operator<=>(const Path &) const = default;
};

/// K slice propagators U_1..U_K and the coupling weight beta_j accumulated
/// at each boundary.
class SlicedEvolution {
   public:
    /// Every propagator must be unitary within kInputTolerance and share one
    /// dimension. An empty weight list means "no coupling" (all zero).
    explicit SlicedEvolution(std::vector<Operator> propagators, std::vector<double> weights = {});

    /// K identity slices: the zero-Hamiltonian case.
    static SlicedEvolution free(std::size_t dim, std::size_t slices, std::vector<double> weights = {});

    /// K slices of exp(-i H T / K), each approximated by the [2/2] diagonal
    /// Pade form, which is exactly unitary for Hermitian H.
    static SlicedEvolution from_hamiltonian(const Operator &h, double total_time, std::size_t slices);

    std::size_t dim() const {
        return propagators_.front().dim();
    }
    std::size_t slices() const {
        return propagators_.size();
    }
    const Operator &propagator(std::size_t j) const {
        return propagators_[j];
    }
    const std::vector<Operator> &propagators() const {
        return propagators_;
    }
    const std::vector<double> &weights() const {
        return weights_;
    }

    /// U_K ... U_1.
    Operator total_propagator() const;

   private:
    std::vector<Operator> propagators_;
    std::vector<double> weights_;
};

/// [2/2] Pade approximant of exp(-i H dt).
Operator pade_slice(const Operator &h, double dt);

struct PathTerm {
    Path path;
    Complex amplitude;
    /// F[n(t)] = sum_j beta_j F(n_j), when attached.
    std::optional<double> functional;
};

/// All virtual paths from `initial` to `final_state` with their amplitudes,
/// in lexicographic path order.
struct PathEnsemble {
    std::size_t dim = 0;
    std::size_t slices = 0;
    std::vector<PathTerm> terms;

    /// Sum of all amplitudes.
    Complex total() const;
    bool has_functionals() const;
};

struct EnumerateOptions {
    std::uint64_t cap = 10'000'000;
    /// Drop paths whose amplitude is exactly zero.
    bool prune = false;
};

/// <z|n_K> <n_K|U_K|n_{K-1}> ... <n_2|U_2|n_1> <n_1|U_1|i>.
Complex path_amplitude(const State &initial, const State &final_state, const Path &path,
                       const SlicedEvolution &evo);

/// Throws PathExplosionError when N^K exceeds the cap.
PathEnsemble enumerate(const State &initial, const State &final_state, const SlicedEvolution &evo,
                       const EnumerateOptions &options = {});

/// sum_j beta_j F(n_j).
double path_functional(const Path &path, std::span<const double> weights, const ProjectorFamily &family);

/// Copy of `ensemble` with F[n] attached to every term.
PathEnsemble with_functionals(PathEnsemble ensemble, std::span<const double> weights,
                              const ProjectorFamily &family);

/// <z| (U_slice)^K |i> with U_slice = pade_slice(H, T/K); identical to
/// enumerate(...).total() for the same slices.
Complex total_amplitude(const State &initial, const State &final_state, const Operator &h, double total_time,
                        std::size_t slices);

}  // namespace feynroute

#endif  // FEYNROUTE_PATHSUM_HPP
