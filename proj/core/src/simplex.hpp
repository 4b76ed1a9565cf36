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

#ifndef FEYNROUTE_SRC_SIMPLEX_HPP
#define FEYNROUTE_SRC_SIMPLEX_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace feynroute::detail {

inline constexpr double kPivotTolerance = 1e-10;

/// Dense two-phase simplex with Bland's rule for
///   minimize c.x  subject to  A x = b,  lower <= x <= upper
/// with finite bounds. Desk-scale only. Returns nothing when infeasible.
struct BoxedLp {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

struct LpSolution {
    Eigen::VectorXd x;
    double objective = 0.0;
};

std::optional<LpSolution> solve_boxed_lp(const BoxedLp &lp, const Eigen::VectorXd &cost);

/// Rank and consistency of A x = b by Gauss-Jordan elimination with partial
/// pivoting.
struct EliminationResult {
    bool consistent = true;
    int rank = 0;
};

EliminationResult eliminate(const Eigen::MatrixXd &a, const Eigen::VectorXd &b);

}  // namespace feynroute::detail

#endif  // FEYNROUTE_SRC_SIMPLEX_HPP
