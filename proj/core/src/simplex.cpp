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

#include "simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace feynroute::detail {

namespace {

// Sum of artificial values above which phase 1 declares infeasibility.
constexpr double kFeasibilityTolerance = 1e-10;
constexpr int kMaxIterations = 100000;

class Tableau {
   public:
    Tableau(Eigen::MatrixXd t, std::vector<int> basis, int artificial_begin)
        : t_(std::move(t)), basis_(std::move(basis)), artificial_begin_(artificial_begin) {
    }

    int rows() const {
        return static_cast<int>(t_.rows());
    }
    int cols() const {
        return static_cast<int>(t_.cols()) - 1;
    }
    double rhs(int r) const {
        return t_(r, cols());
    }
    int basic(int r) const {
        return basis_[static_cast<std::size_t>(r)];
    }
    bool is_artificial(int j) const {
        return j >= artificial_begin_;
    }

    double objective(const Eigen::VectorXd &cost) const {
        double v = 0.0;
        for (int r = 0; r < rows(); ++r) {
            v += cost[basic(r)] * rhs(r);
        }
        return v;
    }

    // Minimizes cost over the current feasible basis; artificial columns may
    // only enter when `allow_artificial`.
    void optimize(const Eigen::VectorXd &cost, bool allow_artificial) {
        for (int iter = 0; iter < kMaxIterations; ++iter) {
            int entering = -1;
            for (int j = 0; j < cols(); ++j) {
                if (!allow_artificial && is_artificial(j)) {
                    continue;
                }
                double reduced = cost[j];
                for (int r = 0; r < rows(); ++r) {
                    reduced -= cost[basic(r)] * t_(r, j);
                }
                if (reduced < -kPivotTolerance) {
                    entering = j;
                    break;
                }
            }
            if (entering < 0) {
                return;
            }
            int leaving = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < rows(); ++r) {
                double coef = t_(r, entering);
                if (coef <= kPivotTolerance) {
                    continue;
                }
                double ratio = rhs(r) / coef;
                if (leaving < 0 || ratio < best - kPivotTolerance ||
                    (std::abs(ratio - best) <= kPivotTolerance && basic(r) < basic(leaving))) {
                    best = ratio;
                    leaving = r;
                }
            }
            if (leaving < 0) {
                // Cannot happen with finite bounds on every variable.
                throw std::logic_error("unbounded boxed LP");
            }
            pivot(leaving, entering);
        }
        throw std::runtime_error("simplex iteration limit reached");
    }

    void pivot(int r, int j) {
        t_.row(r) /= t_(r, j);
        for (int k = 0; k < rows(); ++k) {
            const double factor = t_(k, j);
            if (k != r && factor != 0.0) {
                t_.row(k) -= factor * t_.row(r);
            }
        }
        basis_[static_cast<std::size_t>(r)] = j;
    }

    // Pivots basic artificials out where a structural column allows it.
    void expel_artificials() {
        for (int r = 0; r < rows(); ++r) {
            if (!is_artificial(basic(r))) {
                continue;
            }
            for (int j = 0; j < artificial_begin_; ++j) {
                if (std::abs(t_(r, j)) > kPivotTolerance) {
                    pivot(r, j);
                    break;
                }
            }
        }
    }

    Eigen::VectorXd values() const {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(cols());
        for (int r = 0; r < rows(); ++r) {
            v[basic(r)] = rhs(r);
        }
        return v;
    }

   private:
    Eigen::MatrixXd t_;
    std::vector<int> basis_;
    int artificial_begin_;
};

}  // namespace

std::optional<LpSolution> solve_boxed_lp(const BoxedLp &lp, const Eigen::VectorXd &cost) {
    const int m = static_cast<int>(lp.a.rows());
    const int n = static_cast<int>(lp.a.cols());
    for (int j = 0; j < n; ++j) {
        if (lp.upper[j] < lp.lower[j]) {
            return std::nullopt;
        }
    }

    // Columns: shifted variables y = x - lower (n), bound slacks (n),
    // artificials for the equality rows (m). Rows: equalities then bounds.
    const int cols = 2 * n + m;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + n, cols + 1);
    std::vector<int> basis(static_cast<std::size_t>(m + n));
    Eigen::VectorXd shifted_rhs = lp.b - lp.a * lp.lower;
    for (int i = 0; i < m; ++i) {
        double sign = shifted_rhs[i] < 0.0 ? -1.0 : 1.0;
        t.row(i).head(n) = sign * lp.a.row(i);
        t(i, 2 * n + i) = 1.0;
        t(i, cols) = sign * shifted_rhs[i];
        basis[static_cast<std::size_t>(i)] = 2 * n + i;
    }
    for (int j = 0; j < n; ++j) {
        t(m + j, j) = 1.0;
        t(m + j, n + j) = 1.0;
        t(m + j, cols) = lp.upper[j] - lp.lower[j];
        basis[static_cast<std::size_t>(m + j)] = n + j;
    }
    Tableau tableau(std::move(t), std::move(basis), 2 * n);

    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
    phase1.tail(m).setOnes();
    tableau.optimize(phase1, true);
    if (tableau.objective(phase1) > kFeasibilityTolerance) {
        return std::nullopt;
    }
    tableau.expel_artificials();

    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols);
    phase2.head(n) = cost;
    tableau.optimize(phase2, false);

    LpSolution out;
    out.x = tableau.values().head(n) + lp.lower;
    out.objective = cost.dot(out.x);
    return out;
}

EliminationResult eliminate(const Eigen::MatrixXd &a, const Eigen::VectorXd &b) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    Eigen::MatrixXd aug(m, n + 1);
    aug << a, b;
    EliminationResult out;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < n && row < m; ++col) {
        Eigen::Index pivot = row;
        for (Eigen::Index r = row + 1; r < m; ++r) {
            if (std::abs(aug(r, col)) > std::abs(aug(pivot, col))) {
                pivot = r;
            }
        }
        if (std::abs(aug(pivot, col)) <= kPivotTolerance) {
            continue;
        }
        aug.row(row).swap(aug.row(pivot));
        aug.row(row) /= aug(row, col);
        for (Eigen::Index r = 0; r < m; ++r) {
            const double factor = aug(r, col);
            if (r != row && factor != 0.0) {
                aug.row(r) -= factor * aug.row(row);
            }
        }
        ++row;
    }
    out.rank = static_cast<int>(row);
    for (Eigen::Index r = row; r < m; ++r) {
        if (std::abs(aug(r, n)) > kPivotTolerance) {
            out.consistent = false;
        }
    }
    return out;
}

}  // namespace feynroute::detail
