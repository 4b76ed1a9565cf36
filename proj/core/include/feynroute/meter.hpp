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

#ifndef FEYNROUTE_METER_HPP
#define FEYNROUTE_METER_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "feynroute/hilbert.hpp"
#include "feynroute/pathsum.hpp"

namespace feynroute {

/// Gaussian pointer G(x) = (2 alpha/pi)^{1/4} exp(-alpha (x - center)^2).
class PointerState {
   public:
    explicit PointerState(double alpha, double center = 0.0);

    double alpha() const {
        return alpha_;
    }
    double center() const {
        return center_;
    }
    /// Width of |G|^2 in the convention sigma = (2 alpha)^{-1/2}.
    double sigma() const;
    double amplitude(double x) const;

   private:
    double alpha_;
    double center_;
};

/// Amplitude A_m = sum_{n in class m} <z|n><n|i> of each decohered route.
struct ClassAmplitudes {
    std::vector<double> eigenvalues;
    std::vector<Complex> amplitudes;

    /// sum_m A_m, which is the unmetered amplitude <z|i>.
    Complex total() const;
};

/// Impulsive measurement of `family` on a zero-Hamiltonian system.
ClassAmplitudes class_amplitudes(const State &initial, const State &final_state, const ProjectorFamily &family);

/// w^{z<-i}_m over a complete orthonormal basis of finals.
class MeteredTable {
   public:
    MeteredTable(std::vector<double> eigenvalues, std::vector<std::vector<double>> weights);

    std::size_t finals() const {
        return weights_.size();
    }
    std::size_t classes() const {
        return eigenvalues_.size();
    }
    const std::vector<double> &eigenvalues() const {
        return eigenvalues_;
    }
    double weight(std::size_t z, std::size_t m) const {
        return weights_[z][m];
    }
    const std::vector<double> &row(std::size_t z) const {
        return weights_[z];
    }
    double marginal(std::size_t z) const;
    double total() const;

   private:
    std::vector<double> eigenvalues_;
    std::vector<std::vector<double>> weights_;
};

/// Throws BasisError naming the first offending pair unless `finals` is a
/// complete orthonormal basis of C^dim.
void require_orthonormal_basis(std::span<const State> finals, std::size_t dim);

MeteredTable metered_probabilities(const State &initial, std::span<const State> finals,
                                   const ProjectorFamily &family);

/// Paths of an ensemble merged by functional value (exact equality),
/// ascending. Indistinguishable alternatives add coherently.
ClassAmplitudes functional_classes(const PathEnsemble &ensemble);

struct PointerDensity {
    std::vector<double> x;
    std::vector<double> density;
};

/// 1024 points spanning [min F - 5 sigma, max F + 5 sigma].
std::vector<double> default_pointer_grid(const PathEnsemble &ensemble, const PointerState &pointer,
                                         std::size_t points = 1024);

/// |sum_paths G(x - F[n]) Phi_n|^2 on `grid`. Its integral over x is the
/// finite-alpha probability of reaching the ensemble's final state.
PointerDensity pointer_distribution(const PathEnsemble &ensemble, const PointerState &pointer,
                                    std::span<const double> grid);

/// Integral of the pointer density over [lo, hi], evaluated analytically
/// from Gaussian overlaps including cross-class terms.
double pointer_window_probability(const PathEnsemble &ensemble, const PointerState &pointer, double lo,
                                  double hi);

}  // namespace feynroute

#endif  // FEYNROUTE_METER_HPP
