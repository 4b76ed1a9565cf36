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

#include "feynroute/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>

namespace feynroute {

namespace {

bool all_finite(const ComplexMatrix &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

State State::from_vector(const ComplexVector &coeffs) {
    if (coeffs.size() == 0) {
        throw NormalizationError("state has no coefficients");
    }
    if (!all_finite(coeffs)) {
        throw NormalizationError("state has non-finite coefficients");
    }
    double norm = coeffs.norm();
    if (norm == 0.0) {
        throw NormalizationError("cannot normalize the zero vector");
    }
    return State(coeffs / norm);
}

State State::from_coeffs(std::span<const Complex> coeffs) {
    ComplexVector v(static_cast<Eigen::Index>(coeffs.size()));
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        v[static_cast<Eigen::Index>(n)] = coeffs[n];
    }
    return from_vector(v);
}

State State::from_coeffs(std::initializer_list<Complex> coeffs) {
    return from_coeffs(std::span<const Complex>(coeffs.begin(), coeffs.size()));
}

State State::basis(std::size_t dim, std::size_t n) {
    if (dim == 0 || n >= dim) {
        throw DimensionError("basis index " + std::to_string(n) + " out of range for dimension " +
                             std::to_string(dim));
    }
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(n)] = 1.0;
    return State(std::move(v));
}

State state_new(std::span<const Complex> coeffs) {
    return State::from_coeffs(coeffs);
}

Complex inner(const State &a, const State &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("inner product of states with dimensions " + std::to_string(a.dim()) + " and " +
                             std::to_string(b.dim()));
    }
    return a.coeffs().dot(b.coeffs());
}

Operator Operator::from_matrix(ComplexMatrix m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw OperatorError("operator matrix must be square and non-empty");
    }
    if (!all_finite(m)) {
        throw OperatorError("operator matrix has non-finite entries");
    }
    return Operator(std::move(m));
}

Operator Operator::hermitian(ComplexMatrix m) {
    Operator op = from_matrix(std::move(m));
    if (!op.is_hermitian()) {
        throw OperatorError("operator is not Hermitian");
    }
    return op;
}

Operator Operator::identity(std::size_t dim) {
    if (dim == 0) {
        throw DimensionError("identity of dimension 0");
    }
    auto n = static_cast<Eigen::Index>(dim);
    return Operator(ComplexMatrix::Identity(n, n));
}

Operator Operator::diagonal(std::span<const double> entries) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(entries.size()),
                                          static_cast<Eigen::Index>(entries.size()));
    for (std::size_t n = 0; n < entries.size(); ++n) {
        m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = entries[n];
    }
    return from_matrix(std::move(m));
}

bool Operator::is_hermitian(double tol) const {
    double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool Operator::is_unitary(double tol) const {
    auto n = m_.rows();
    return (m_.adjoint() * m_ - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= tol;
}

Complex Operator::matrix_element(const State &z, const State &i) const {
    if (z.dim() != dim() || i.dim() != dim()) {
        throw DimensionError("matrix element dimension mismatch");
    }
    return z.coeffs().dot(m_ * i.coeffs());
}

Operator expm_hermitian(const Operator &h, double t) {
    if (!h.is_hermitian()) {
        throw OperatorError("expm_hermitian requires a Hermitian generator");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw OperatorError("eigendecomposition failed");
    }
    const ComplexMatrix &v = solver.eigenvectors();
    ComplexVector phases(v.cols());
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        phases[k] = std::exp(Complex(0.0, -solver.eigenvalues()[k] * t));
    }
    return Operator::from_matrix(v * phases.asDiagonal() * v.adjoint());
}

ProjectorFamily ProjectorFamily::from_labels(std::span<const double> labels) {
    if (labels.empty()) {
        throw DimensionError("projector family needs at least one label");
    }
    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t n = 0; n < labels.size(); ++n) {
        if (!std::isfinite(labels[n])) {
            throw OperatorError("projector family label " + std::to_string(n) + " is not finite");
        }
        groups[labels[n]].push_back(n);
    }
    ProjectorFamily family;
    family.labels_.assign(labels.begin(), labels.end());
    family.class_of_.resize(labels.size());
    for (auto &[value, members] : groups) {
        for (std::size_t n : members) {
            family.class_of_[n] = family.eigenvalues_.size();
        }
        family.eigenvalues_.push_back(value);
        family.members_.push_back(std::move(members));
    }
    return family;
}

ProjectorFamily ProjectorFamily::from_labels(std::initializer_list<double> labels) {
    return from_labels(std::span<const double>(labels.begin(), labels.size()));
}

ProjectorFamily ProjectorFamily::trivial(std::size_t dim, double value) {
    std::vector<double> labels(dim, value);
    return from_labels(labels);
}

std::optional<std::size_t> ProjectorFamily::find_class(double value) const {
    auto it = std::find(eigenvalues_.begin(), eigenvalues_.end(), value);
    if (it == eigenvalues_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - eigenvalues_.begin());
}

Operator ProjectorFamily::projector(std::size_t m) const {
    std::vector<double> diag(dim(), 0.0);
    for (std::size_t n : members_.at(m)) {
        diag[n] = 1.0;
    }
    return Operator::diagonal(diag);
}

Operator ProjectorFamily::as_operator() const {
    return Operator::diagonal(labels_);
}

ProjectorFamily projector_family(std::span<const double> labels) {
    return ProjectorFamily::from_labels(labels);
}

ProjectorFamily product_family(const ProjectorFamily &a, const ProjectorFamily &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("product of families with different dimensions");
    }
    std::vector<double> labels(a.dim());
    for (std::size_t n = 0; n < a.dim(); ++n) {
        labels[n] = a.label(n) * b.label(n);
    }
    return ProjectorFamily::from_labels(labels);
}

std::optional<std::pair<std::size_t, std::size_t>> find_orthonormality_violation(std::span<const State> states,
                                                                                  double tol) {
    for (std::size_t j = 0; j < states.size(); ++j) {
        for (std::size_t k = j; k < states.size(); ++k) {
            Complex overlap = inner(states[j], states[k]);
            double expected = j == k ? 1.0 : 0.0;
            if (std::abs(overlap - expected) > tol) {
                return std::make_pair(j, k);
            }
        }
    }
    return std::nullopt;
}

}  // namespace feynroute
