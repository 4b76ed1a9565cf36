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

#ifndef FEYNROUTE_CLASSICAL_HPP
#define FEYNROUTE_CLASSICAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "feynroute/condprob.hpp"

namespace feynroute {

/// A ball enters box k with probability p0[k] and then rolls to final z with
/// probability p(k, z).
class ClassicalNetwork {
   public:
    /// Throws ConstraintError unless p0 is a distribution and every
    /// branching row is one (within kTolerance).
    ClassicalNetwork(std::vector<double> source, Eigen::MatrixXd branching);

    std::size_t boxes() const {
        return source_.size();
    }
    std::size_t finals() const {
        return static_cast<std::size_t>(branching_.cols());
    }
    const std::vector<double> &source() const {
        return source_;
    }
    const Eigen::MatrixXd &branching() const {
        return branching_;
    }
    double branching(std::size_t k, std::size_t z) const {
        return branching_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(z));
    }

   private:
    std::vector<double> source_;
    Eigen::MatrixXd branching_;
};

/// p^{z<-i}_[k] = p0[k] p(k, z), boxes by finals.
Eigen::MatrixXd pathway_probabilities(const ClassicalNetwork &net);

struct LinearConstraint {
    std::vector<double> coeffs;
    double rhs = 0.0;
    /// Unique provenance tag, e.g. "A2".
    std::string tag;
    /// Human-readable origin of the constraint.
    std::string note;
};

/// Equality constraints over named pathway probabilities with box bounds
/// (default 0 <= x <= 1).
class FeasibilityProblem {
   public:
    static constexpr std::size_t kMaxVariables = 32;

    explicit FeasibilityProblem(std::vector<std::string> variables);

    FeasibilityProblem &add(std::string tag, std::vector<double> coeffs, double rhs, std::string note = {});
    FeasibilityProblem &set_bounds(std::size_t variable, double lower, double upper);

    const std::vector<std::string> &variables() const {
        return variables_;
    }
    const std::vector<LinearConstraint> &constraints() const {
        return constraints_;
    }
    const std::vector<double> &lower() const {
        return lower_;
    }
    const std::vector<double> &upper() const {
        return upper_;
    }
    const LinearConstraint &constraint(const std::string &tag) const;

    /// Same variables and bounds, keeping only the listed constraints.
    FeasibilityProblem subset(std::span<const std::size_t> indices) const;
    FeasibilityProblem without(const std::string &tag) const;

    /// Throws ConstraintError on wrong lengths, non-finite values, empty or
    /// duplicate tags, inverted bounds or too many variables.
    void validate() const;

   private:
    std::vector<std::string> variables_;
    std::vector<LinearConstraint> constraints_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// A minimal unsatisfiable subset of constraints. The first member (the
/// pivot) requires pivot_coeffs . x = required, while the remaining members
/// together with the bounds force that expression into
/// [implied_min, implied_max].
struct Certificate {
    std::vector<std::string> tags;
    std::string pivot_tag;
    std::vector<double> pivot_coeffs;
    double required = 0.0;
    double implied_min = 0.0;
    double implied_max = 0.0;
    /// Every other minimal subset of the same size, in search order.
    std::vector<std::vector<std::string>> alternatives;

    bool contains(const std::string &tag) const;
};

struct FeasibilityVerdict {
    bool feasible = false;
    /// Satisfies every constraint within 1e-10 when feasible.
    std::vector<double> witness;
    std::optional<Certificate> certificate;
    /// Rank of the equality system and whether it is consistent before
    /// bounds are considered.
    int rank = 0;
    bool equalities_consistent = true;
};

bool is_feasible(const FeasibilityProblem &problem);

FeasibilityVerdict solve_feasibility(const FeasibilityProblem &problem);

/// Equates a non-invasive network's pathway probabilities p_[k] for final
/// `final_index` with the quantum route weights:
///   A1  sum_k p_[k]            = w (no box opened)
///   A2  p_[first]              = w (first box opened, found)
///   A3  p_[second]             = w (second box opened, found)
///   A4  sum_{k != first} p_[k] = w (first box opened, not found)
///   A5  sum_{k != second} p_[k]= w (second box opened, not found)
/// `open_first` and `open_second` must come from single-box families with
/// eigenvalue 1 on the opened box.
FeasibilityProblem build_threebox_constraints(const RouteTable &unobserved, const RouteTable &open_first,
                                              const RouteTable &open_second, std::size_t final_index,
                                              std::size_t first_box = 0, std::size_t second_box = 1);

/// The model in which opening a lid alters only that box. Variables are the
/// lid-down probabilities t_k and lid-up probabilities p_k; the constraints
/// are A6 (sum t = unobserved arrival), the not-found conditions with the
/// unopened boxes lid-down, the found conditions lid-up, and their
/// consequence A7 (sum t = 0).
FeasibilityProblem lid_local_problem(const RouteTable &unobserved, const RouteTable &open_first,
                                     const RouteTable &open_second, std::size_t final_index,
                                     std::size_t first_box = 0, std::size_t second_box = 1);

/// lid_local_problem for the three-box scenario post-selected in f.
FeasibilityProblem lid_local_problem();

/// Which box, if any, is opened.
struct ObservationContext {
    std::optional<std::size_t> opened;

    static ObservationContext none() {
        return {};
    }
    static ObservationContext open(std::size_t box) {
        return {box};
    }
    std::string name() const;
    bool operator==(const ObservationContext &) const = default;
};

/// One classical network per observation context.
class InvasiveModel {
   public:
    void add(ObservationContext context, ClassicalNetwork network);

    const std::vector<ObservationContext> &contexts() const {
        return contexts_;
    }
    const ClassicalNetwork &network(const ObservationContext &context) const;
    const std::vector<ClassicalNetwork> &networks() const {
        return networks_;
    }

   private:
    std::vector<ObservationContext> contexts_;
    std::vector<ClassicalNetwork> networks_;
};

/// Branchings reproducing the quantum joint tables: with box j open,
/// p(j, z) = w^z_found / p0[j] and each unopened box gets
/// p(k, z) = w^z_not-found / (1 - p0[j]). Without observation every row
/// equals the unobserved marginals. p0[j] is read off the tables as the
/// total probability of finding the ball in box j. Rows that are never
/// entered are uniform. `open[j]` must open box j.
InvasiveModel synthesize_invasive_model(const RouteTable &unobserved, std::span<const RouteTable> open);

/// Classes by finals: a single row of final probabilities without
/// observation, or rows (not found, found) with box j open.
Eigen::MatrixXd observed_joint(const ClassicalNetwork &net, const ObservationContext &context);

/// Classes by finals from a route table.
Eigen::MatrixXd quantum_joint(const RouteTable &table);

/// Largest absolute deviation between observed_joint and quantum_joint over
/// all contexts of the model.
double reproduction_error(const InvasiveModel &model, const RouteTable &unobserved,
                          std::span<const RouteTable> open);

struct SimulationCounts {
    std::size_t boxes = 0;
    std::size_t finals = 0;
    std::uint64_t trials = 0;
    /// Row-major boxes by finals.
    std::vector<std::uint64_t> counts;

    std::uint64_t count(std::size_t k, std::size_t z) const {
        return counts[k * finals + z];
    }
    double frequency(std::size_t k, std::size_t z) const;
};

/// Rolls `trials` balls through `net`. Trial t draws its box from counter
/// 2t and its final from counter 2t+1 of CounterRng(seed), so the result is
/// independent of `workers`.
SimulationCounts simulate(const ClassicalNetwork &net, std::uint64_t trials, std::uint64_t seed,
                          unsigned workers = 1);

SimulationCounts simulate(const InvasiveModel &model, const ObservationContext &context, std::uint64_t trials,
                          std::uint64_t seed, unsigned workers = 1);

}  // namespace feynroute

#endif  // FEYNROUTE_CLASSICAL_HPP
