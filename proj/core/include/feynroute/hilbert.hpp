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

#ifndef FEYNROUTE_HILBERT_HPP
#define FEYNROUTE_HILBERT_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "feynroute/errors.hpp"

namespace feynroute {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Global comparison tolerance for quantities that are exact small
/// rationals in exact arithmetic.
inline constexpr double kTolerance = 1e-12;

/// Tolerance for unitarity and orthonormality checks on user input.
inline constexpr double kInputTolerance = 1e-10;

/// A normalized vector in C^N, expressed in the fixed computational basis
/// {|n>}. Basis indices are zero-based throughout the library.
class State {
   public:
    /// Normalizes `coeffs`. Throws NormalizationError for an empty or zero
    /// vector.
    static State from_coeffs(std::span<const Complex> coeffs);
    static State from_coeffs(std::initializer_list<Complex> coeffs);
    static State from_vector(const ComplexVector &coeffs);

    /// The basis state |n> of a `dim`-dimensional space.
    static State basis(std::size_t dim, std::size_t n);

    std::size_t dim() const {
        return static_cast<std::size_t>(coeffs_.size());
    }
    const ComplexVector &coeffs() const {
        return coeffs_;
    }
    Complex operator[](std::size_t n) const {
        return coeffs_[static_cast<Eigen::Index>(n)];
    }

    bool operator==(const State &other) const {
        return coeffs_ == other.coeffs_;
    }

   private:
    explicit State(ComplexVector coeffs) : coeffs_(std::move(coeffs)) {
    }
    ComplexVector coeffs_;
};

/// Normalizing constructor; same as State::from_coeffs.
State state_new(std::span<const Complex> coeffs);

/// <a|b> = sum_n conj(a[n]) b[n]. Throws DimensionError on mismatch.
Complex inner(const State &a, const State &b);

/// A square complex matrix acting on C^N.
class Operator {
   public:
    /// Throws OperatorError if `m` is empty, not square or has non-finite
    /// entries.
    static Operator from_matrix(ComplexMatrix m);
    /// As from_matrix, and additionally requires Hermiticity within
    /// kTolerance (scaled by the matrix norm).
    static Operator hermitian(ComplexMatrix m);
    static Operator identity(std::size_t dim);
    static Operator diagonal(std::span<const double> entries);

    std::size_t dim() const {
        return static_cast<std::size_t>(m_.rows());
    }
    const ComplexMatrix &matrix() const {
        return m_;
    }
    Complex operator()(std::size_t row, std::size_t col) const {
        return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    bool is_hermitian(double tol = kTolerance) const;
    bool is_unitary(double tol = kInputTolerance) const;

    /// <z|A|i>.
    Complex matrix_element(const State &z, const State &i) const;

   private:
    explicit Operator(ComplexMatrix m) : m_(std::move(m)) {
    }
    ComplexMatrix m_;
};

/// exp(-i H t) for Hermitian H, by diagonalization.
Operator expm_hermitian(const Operator &h, double t);

/// An eigenvalue-labeled family of orthogonal projectors, one per distinct
/// value of F(n). Classes are ordered by ascending eigenvalue; labels are
/// grouped by exact equality.
class ProjectorFamily {
   public:
    /// Throws DimensionError for an empty label list and OperatorError for
    /// non-finite labels.
    static ProjectorFamily from_labels(std::span<const double> labels);
    static ProjectorFamily from_labels(std::initializer_list<double> labels);

    /// The single-class family with every label equal to `value`.
    static ProjectorFamily trivial(std::size_t dim, double value = 0.0);

    std::size_t dim() const {
        return labels_.size();
    }
    const std::vector<double> &labels() const {
        return labels_;
    }
    double label(std::size_t n) const {
        return labels_[n];
    }

    std::size_t class_count() const {
        return eigenvalues_.size();
    }
    const std::vector<double> &eigenvalues() const {
        return eigenvalues_;
    }
    double eigenvalue(std::size_t m) const {
        return eigenvalues_[m];
    }
    /// Basis indices belonging to class m, ascending.
    const std::vector<std::size_t> &members(std::size_t m) const {
        return members_[m];
    }
    /// Class index of basis index n.
    std::size_t class_of(std::size_t n) const {
        return class_of_[n];
    }
    /// Class index of the eigenvalue `value`, if present.
    std::optional<std::size_t> find_class(double value) const;

    /// P_m = sum_{n : F(n) = F_m} |n><n|.
    Operator projector(std::size_t m) const;
    /// F(n^) = sum_n F(n) |n><n|.
    Operator as_operator() const;

    bool operator==(const ProjectorFamily &other) const {
        return labels_ == other.labels_;
    }

   private:
    ProjectorFamily() = default;
    std::vector<double> labels_;
    std::vector<double> eigenvalues_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::size_t> class_of_;
};

ProjectorFamily projector_family(std::span<const double> labels);

/// The family with labels F_a(n) * F_b(n).
ProjectorFamily product_family(const ProjectorFamily &a, const ProjectorFamily &b);

/// Returns the first pair (j, k), j <= k, violating <s_j|s_k> = delta_jk
/// within `tol`, or nothing if the list is orthonormal.
std::optional<std::pair<std::size_t, std::size_t>> find_orthonormality_violation(
    std::span<const State> states, double tol = kInputTolerance);

}  // namespace feynroute

#endif  // FEYNROUTE_HILBERT_HPP
