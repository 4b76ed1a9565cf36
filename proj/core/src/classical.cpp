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

#include "feynroute/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "feynroute/rng.hpp"
#include "feynroute/threebox.hpp"
#include "simplex.hpp"

namespace feynroute {

namespace {

constexpr double kWitnessTolerance = 1e-10;

void check_distribution(std::span<const double> p, const std::string &what) {
    double sum = 0.0;
    for (double v : p) {
        if (!std::isfinite(v) || v < -kTolerance) {
            throw ConstraintError(what + " has a negative or non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kTolerance) {
        throw ConstraintError(what + " sums to " + std::to_string(sum) + ", not 1");
    }
}

}  // namespace

ClassicalNetwork::ClassicalNetwork(std::vector<double> source, Eigen::MatrixXd branching)
    : source_(std::move(source)), branching_(std::move(branching)) {
    if (source_.empty() || static_cast<std::size_t>(branching_.rows()) != source_.size() || branching_.cols() == 0) {
        throw ConstraintError("branching matrix must have one row per box");
    }
    check_distribution(source_, "source distribution");
    for (Eigen::Index k = 0; k < branching_.rows(); ++k) {
        std::vector<double> row(static_cast<std::size_t>(branching_.cols()));
        for (Eigen::Index z = 0; z < branching_.cols(); ++z) {
            row[static_cast<std::size_t>(z)] = branching_(k, z);
        }
        check_distribution(row, "branching row " + std::to_string(k));
    }
}

Eigen::MatrixXd pathway_probabilities(const ClassicalNetwork &net) {
    Eigen::MatrixXd out = net.branching();
    for (std::size_t k = 0; k < net.boxes(); ++k) {
        out.row(static_cast<Eigen::Index>(k)) *= net.source()[k];
    }
    return out;
}

FeasibilityProblem::FeasibilityProblem(std::vector<std::string> variables)
    : variables_(std::move(variables)), lower_(variables_.size(), 0.0), upper_(variables_.size(), 1.0) {
}

FeasibilityProblem &FeasibilityProblem::add(std::string tag, std::vector<double> coeffs, double rhs,
                                            std::string note) {
    constraints_.push_back(LinearConstraint{std::move(coeffs), rhs, std::move(tag), std::move(note)});
    return *this;
}

FeasibilityProblem &FeasibilityProblem::set_bounds(std::size_t variable, double lower, double upper) {
    lower_.at(variable) = lower;
    upper_.at(variable) = upper;
    return *this;
}

const LinearConstraint &FeasibilityProblem::constraint(const std::string &tag) const {
    for (const auto &c : constraints_) {
        if (c.tag == tag) {
            return c;
        }
    }
    throw ConstraintError("no constraint tagged " + tag);
}

FeasibilityProblem FeasibilityProblem::subset(std::span<const std::size_t> indices) const {
    FeasibilityProblem out(variables_);
    out.lower_ = lower_;
    out.upper_ = upper_;
    for (std::size_t i : indices) {
        out.constraints_.push_back(constraints_.at(i));
    }
    return out;
}

FeasibilityProblem FeasibilityProblem::without(const std::string &tag) const {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        if (constraints_[i].tag != tag) {
            keep.push_back(i);
        }
    }
    return subset(keep);
}

void FeasibilityProblem::validate() const {
    if (variables_.empty()) {
        throw ConstraintError("feasibility problem has no variables");
    }
    if (variables_.size() > kMaxVariables) {
        throw ConstraintError("feasibility problem has " + std::to_string(variables_.size()) +
                              " variables; at most " + std::to_string(kMaxVariables) + " are supported");
    }
    for (std::size_t j = 0; j < variables_.size(); ++j) {
        if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]) || lower_[j] > upper_[j]) {
            throw ConstraintError("invalid bounds on variable " + variables_[j]);
        }
    }
    std::set<std::string> tags;
    for (const auto &c : constraints_) {
        if (c.tag.empty()) {
            throw ConstraintError("constraint without a provenance tag");
        }
        if (!tags.insert(c.tag).second) {
            throw ConstraintError("duplicate constraint tag " + c.tag);
        }
        if (c.coeffs.size() != variables_.size()) {
            throw ConstraintError("constraint " + c.tag + " has " + std::to_string(c.coeffs.size()) +
                                  " coefficients for " + std::to_string(variables_.size()) + " variables");
        }
        if (!std::isfinite(c.rhs) ||
            !std::all_of(c.coeffs.begin(), c.coeffs.end(), [](double v) { return std::isfinite(v); })) {
            throw ConstraintError("constraint " + c.tag + " has non-finite entries");
        }
    }
}

bool Certificate::contains(const std::string &tag) const {
    return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

namespace {

detail::BoxedLp to_lp(const FeasibilityProblem &problem) {
    const auto m = static_cast<Eigen::Index>(problem.constraints().size());
    const auto n = static_cast<Eigen::Index>(problem.variables().size());
    detail::BoxedLp lp{Eigen::MatrixXd(m, n), Eigen::VectorXd(m), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto &c = problem.constraints()[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            lp.a(i, j) = c.coeffs[static_cast<std::size_t>(j)];
        }
        lp.b[i] = c.rhs;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        lp.lower[j] = problem.lower()[static_cast<std::size_t>(j)];
        lp.upper[j] = problem.upper()[static_cast<std::size_t>(j)];
    }
    return lp;
}

std::optional<detail::LpSolution> find_point(const FeasibilityProblem &problem, const Eigen::VectorXd &cost) {
    detail::BoxedLp lp = to_lp(problem);
    if (!detail::eliminate(lp.a, lp.b).consistent) {
        return std::nullopt;
    }
    return detail::solve_boxed_lp(lp, cost);
}

Eigen::VectorXd zero_cost(const FeasibilityProblem &problem) {
    return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.variables().size()));
}

// Advances `combo` to the next k-subset of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t> &combo, std::size_t n) {
    const std::size_t k = combo.size();
    for (std::size_t pos = k; pos-- > 0;) {
        if (combo[pos] < n - k + pos) {
            ++combo[pos];
            for (std::size_t q = pos + 1; q < k; ++q) {
                combo[q] = combo[q - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

Certificate build_certificate(const FeasibilityProblem &problem, const std::vector<std::size_t> &members) {
    Certificate cert;
    for (std::size_t i : members) {
        cert.tags.push_back(problem.constraints()[i].tag);
    }
    const LinearConstraint &pivot = problem.constraints()[members.front()];
    cert.pivot_tag = pivot.tag;
    cert.pivot_coeffs = pivot.coeffs;
    cert.required = pivot.rhs;

    std::vector<std::size_t> rest(members.begin() + 1, members.end());
    FeasibilityProblem others = problem.subset(rest);
    Eigen::VectorXd cost(static_cast<Eigen::Index>(pivot.coeffs.size()));
    for (std::size_t j = 0; j < pivot.coeffs.size(); ++j) {
        cost[static_cast<Eigen::Index>(j)] = pivot.coeffs[j];
    }
    // Feasible by minimality of the subset.
    auto lo = find_point(others, cost);
    auto hi = find_point(others, -cost);
    if (lo && hi) {
        cert.implied_min = lo->objective;
        cert.implied_max = -hi->objective;
    }
    return cert;
}

}  // namespace

bool is_feasible(const FeasibilityProblem &problem) {
    problem.validate();
    return find_point(problem, zero_cost(problem)).has_value();
}

FeasibilityVerdict solve_feasibility(const FeasibilityProblem &problem) {
    problem.validate();
    FeasibilityVerdict verdict;
    detail::BoxedLp lp = to_lp(problem);
    detail::EliminationResult elim = detail::eliminate(lp.a, lp.b);
    verdict.rank = elim.rank;
    verdict.equalities_consistent = elim.consistent;

    if (elim.consistent) {
        if (auto point = detail::solve_boxed_lp(lp, zero_cost(problem))) {
            for (Eigen::Index i = 0; i < lp.a.rows(); ++i) {
                if (std::abs(lp.a.row(i).dot(point->x) - lp.b[i]) > kWitnessTolerance) {
                    throw std::logic_error("simplex witness violates constraint " +
                                           problem.constraints()[static_cast<std::size_t>(i)].tag);
                }
            }
            verdict.feasible = true;
            verdict.witness.assign(point->x.data(), point->x.data() + point->x.size());
            return verdict;
        }
    }

    // Smallest unsatisfiable subsets, searched by size then lexicographically.
    const std::size_t m = problem.constraints().size();
    std::vector<std::vector<std::size_t>> minimal;
    for (std::size_t size = 1; size <= m && minimal.empty(); ++size) {
        std::vector<std::size_t> combo(size);
        std::iota(combo.begin(), combo.end(), std::size_t{0});
        do {
            FeasibilityProblem sub = problem.subset(combo);
            if (!find_point(sub, zero_cost(sub))) {
                minimal.push_back(combo);
            }
        } while (next_combination(combo, m));
    }
    if (minimal.empty()) {
        // validate() guarantees non-empty boxes, so the full set is always
        // a candidate.
        throw std::logic_error("infeasible problem without an infeasible constraint subset");
    }
    Certificate cert = build_certificate(problem, minimal.front());
    for (std::size_t k = 1; k < minimal.size(); ++k) {
        std::vector<std::string> tags;
        for (std::size_t i : minimal[k]) {
            tags.push_back(problem.constraints()[i].tag);
        }
        cert.alternatives.push_back(std::move(tags));
    }
    verdict.certificate = std::move(cert);
    return verdict;
}

namespace {

double found_weight(const RouteTable &table, std::size_t z, bool found) {
    auto it = std::find(table.eigenvalues.begin(), table.eigenvalues.end(), found ? 1.0 : 0.0);
    if (it == table.eigenvalues.end()) {
        if (table.eigenvalues.size() == 1) {
            return 0.0;
        }
        throw ConstraintError("route table " + table.scenario + " is not from a single-box family");
    }
    return table.weight(z, static_cast<std::size_t>(it - table.eigenvalues.begin()));
}

void check_tables(const RouteTable &unobserved, const RouteTable &open_first, const RouteTable &open_second,
                  std::size_t final_index, std::size_t first_box, std::size_t second_box) {
    const std::size_t boxes = unobserved.finals;
    if (open_first.finals != boxes || open_second.finals != boxes) {
        throw ConstraintError("route tables cover different final bases");
    }
    if (final_index >= boxes || first_box >= boxes || second_box >= boxes || first_box == second_box) {
        throw ConstraintError("final or box index out of range");
    }
}

}  // namespace

FeasibilityProblem build_threebox_constraints(const RouteTable &unobserved, const RouteTable &open_first,
                                              const RouteTable &open_second, std::size_t final_index,
                                              std::size_t first_box, std::size_t second_box) {
    check_tables(unobserved, open_first, open_second, final_index, first_box, second_box);
    const std::size_t boxes = unobserved.finals;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < boxes; ++k) {
        names.push_back("p[" + std::to_string(k + 1) + "]");
    }
    auto unit = [&](std::size_t k) {
        std::vector<double> c(boxes, 0.0);
        c[k] = 1.0;
        return c;
    };
    auto all_but = [&](std::size_t k) {
        std::vector<double> c(boxes, 1.0);
        c[k] = 0.0;
        return c;
    };
    const std::string first = std::to_string(first_box + 1);
    const std::string second = std::to_string(second_box + 1);

    FeasibilityProblem problem(names);
    problem.add("A1", std::vector<double>(boxes, 1.0), unobserved.marginal(final_index), "no box opened");
    problem.add("A2", unit(first_box), found_weight(open_first, final_index, true),
                "box " + first + " opened; ball found");
    problem.add("A3", unit(second_box), found_weight(open_second, final_index, true),
                "box " + second + " opened; ball found");
    problem.add("A4", all_but(first_box), found_weight(open_first, final_index, false),
                "box " + first + " opened; ball not found");
    problem.add("A5", all_but(second_box), found_weight(open_second, final_index, false),
                "box " + second + " opened; ball not found");
    return problem;
}

FeasibilityProblem lid_local_problem(const RouteTable &unobserved, const RouteTable &open_first,
                                     const RouteTable &open_second, std::size_t final_index, std::size_t first_box,
                                     std::size_t second_box) {
    check_tables(unobserved, open_first, open_second, final_index, first_box, second_box);
    const std::size_t boxes = unobserved.finals;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < boxes; ++k) {
        names.push_back("t[" + std::to_string(k + 1) + "]");
    }
    for (std::size_t k = 0; k < boxes; ++k) {
        names.push_back("p[" + std::to_string(k + 1) + "]");
    }
    // Coefficients over (t, p): lid-down boxes use t, the opened box uses p.
    auto lid_down_sum = [&](std::optional<std::size_t> skip) {
        std::vector<double> c(2 * boxes, 0.0);
        for (std::size_t k = 0; k < boxes; ++k) {
            if (k != skip) {
                c[k] = 1.0;
            }
        }
        return c;
    };
    auto lid_up = [&](std::size_t k) {
        std::vector<double> c(2 * boxes, 0.0);
        c[boxes + k] = 1.0;
        return c;
    };
    const std::string first = std::to_string(first_box + 1);
    const std::string second = std::to_string(second_box + 1);

    FeasibilityProblem problem(names);
    problem.add("A6", lid_down_sum(std::nullopt), unobserved.marginal(final_index), "no box opened, all lids down");
    problem.add("A4-lid", lid_down_sum(first_box), found_weight(open_first, final_index, false),
                "box " + first + " opened; ball not found; other lids down");
    problem.add("A5-lid", lid_down_sum(second_box), found_weight(open_second, final_index, false),
                "box " + second + " opened; ball not found; other lids down");
    problem.add("A2-lid", lid_up(first_box), found_weight(open_first, final_index, true),
                "box " + first + " opened; ball found; lid up");
    problem.add("A3-lid", lid_up(second_box), found_weight(open_second, final_index, true),
                "box " + second + " opened; ball found; lid up");

    // With nothing reaching the final through the unopened boxes, and the
    // two not-found conditions jointly covering every box, all lid-down
    // probabilities vanish.
    if (boxes == 3 && found_weight(open_first, final_index, false) == 0.0 &&
        found_weight(open_second, final_index, false) == 0.0) {
        problem.add("A7", lid_down_sum(std::nullopt), 0.0, "consequence of A4-lid and A5-lid with t >= 0");
    }
    return problem;
}

FeasibilityProblem lid_local_problem() {
    auto finals = threebox::finals();
    State i = threebox::initial();
    RouteTable none = route_probabilities(i, finals, threebox::unobserved(), "none");
    RouteTable open1 = route_probabilities(i, finals, threebox::open_box(0), "open-1");
    RouteTable open2 = route_probabilities(i, finals, threebox::open_box(1), "open-2");
    return lid_local_problem(none, open1, open2, 0);
}

std::string ObservationContext::name() const {
    return opened ? "open-" + std::to_string(*opened + 1) : "none";
}

void InvasiveModel::add(ObservationContext context, ClassicalNetwork network) {
    if (std::find(contexts_.begin(), contexts_.end(), context) != contexts_.end()) {
        throw ConstraintError("context " + context.name() + " already present");
    }
    contexts_.push_back(context);
    networks_.push_back(std::move(network));
}

const ClassicalNetwork &InvasiveModel::network(const ObservationContext &context) const {
    auto it = std::find(contexts_.begin(), contexts_.end(), context);
    if (it == contexts_.end()) {
        throw ConstraintError("model has no context " + context.name());
    }
    return networks_[static_cast<std::size_t>(it - contexts_.begin())];
}

InvasiveModel synthesize_invasive_model(const RouteTable &unobserved, std::span<const RouteTable> open) {
    const std::size_t boxes = open.size();
    const std::size_t finals = unobserved.finals;
    if (boxes == 0) {
        throw ConstraintError("need at least one open-box table");
    }
    for (const auto &t : open) {
        if (t.finals != finals) {
            throw ConstraintError("route tables cover different final bases");
        }
    }
    const auto rows = static_cast<Eigen::Index>(boxes);
    const auto cols = static_cast<Eigen::Index>(finals);
    const double uniform = 1.0 / static_cast<double>(finals);

    std::vector<double> p0(boxes, 0.0);
    for (std::size_t j = 0; j < boxes; ++j) {
        for (std::size_t z = 0; z < finals; ++z) {
            p0[j] += found_weight(open[j], z, true);
        }
    }

    InvasiveModel model;
    Eigen::MatrixXd passive(rows, cols);
    for (Eigen::Index k = 0; k < rows; ++k) {
        for (std::size_t z = 0; z < finals; ++z) {
            passive(k, static_cast<Eigen::Index>(z)) = unobserved.marginal(z);
        }
    }
    model.add(ObservationContext::none(), ClassicalNetwork(p0, passive));

    for (std::size_t j = 0; j < boxes; ++j) {
        Eigen::MatrixXd branching(rows, cols);
        const double rest = 1.0 - p0[j];
        for (std::size_t z = 0; z < finals; ++z) {
            const auto zi = static_cast<Eigen::Index>(z);
            double found = found_weight(open[j], z, true);
            double missed = found_weight(open[j], z, false);
            for (std::size_t k = 0; k < boxes; ++k) {
                const auto ki = static_cast<Eigen::Index>(k);
                if (k == j) {
                    branching(ki, zi) = p0[j] > 0.0 ? found / p0[j] : uniform;
                } else {
                    branching(ki, zi) = rest > 0.0 ? missed / rest : uniform;
                }
            }
        }
        model.add(ObservationContext::open(j), ClassicalNetwork(p0, branching));
    }
    return model;
}

Eigen::MatrixXd observed_joint(const ClassicalNetwork &net, const ObservationContext &context) {
    Eigen::MatrixXd paths = pathway_probabilities(net);
    if (!context.opened) {
        return paths.colwise().sum();
    }
    const auto j = static_cast<Eigen::Index>(*context.opened);
    if (j >= paths.rows()) {
        throw ConstraintError("context opens a box the network does not have");
    }
    Eigen::MatrixXd out(2, paths.cols());
    out.row(1) = paths.row(j);
    out.row(0) = paths.colwise().sum() - paths.row(j);
    return out;
}

Eigen::MatrixXd quantum_joint(const RouteTable &table) {
    const auto classes = static_cast<Eigen::Index>(table.eigenvalues.size());
    Eigen::MatrixXd out(classes, static_cast<Eigen::Index>(table.finals));
    for (std::size_t z = 0; z < table.finals; ++z) {
        for (std::size_t m = 0; m < table.eigenvalues.size(); ++m) {
            out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(z)) = table.weight(z, m);
        }
    }
    return out;
}

double reproduction_error(const InvasiveModel &model, const RouteTable &unobserved,
                          std::span<const RouteTable> open) {
    double worst = 0.0;
    auto compare = [&](const ObservationContext &context, const RouteTable &table) {
        Eigen::MatrixXd classical = observed_joint(model.network(context), context);
        Eigen::MatrixXd quantum = quantum_joint(table);
        if (classical.rows() != quantum.rows() || classical.cols() != quantum.cols()) {
            throw ConstraintError("joint tables of context " + context.name() + " have different shapes");
        }
        worst = std::max(worst, (classical - quantum).cwiseAbs().maxCoeff());
    };
    compare(ObservationContext::none(), unobserved);
    for (std::size_t j = 0; j < open.size(); ++j) {
        compare(ObservationContext::open(j), open[j]);
    }
    return worst;
}

double SimulationCounts::frequency(std::size_t k, std::size_t z) const {
    return trials == 0 ? 0.0 : static_cast<double>(count(k, z)) / static_cast<double>(trials);
}

namespace {

std::size_t sample(std::span<const double> cumulative, double u) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {
        // u beyond the rounded total: take the last entry with mass.
        std::size_t k = cumulative.size() - 1;
        while (k > 0 && cumulative[k] == cumulative[k - 1]) {
            --k;
        }
        return k;
    }
    return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace

SimulationCounts simulate(const ClassicalNetwork &net, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    const std::size_t boxes = net.boxes();
    const std::size_t finals = net.finals();
    std::vector<double> source_cdf(boxes);
    std::partial_sum(net.source().begin(), net.source().end(), source_cdf.begin());
    std::vector<std::vector<double>> branch_cdf(boxes, std::vector<double>(finals));
    for (std::size_t k = 0; k < boxes; ++k) {
        double acc = 0.0;
        for (std::size_t z = 0; z < finals; ++z) {
            acc += net.branching(k, z);
            branch_cdf[k][z] = acc;
        }
    }

    const CounterRng rng(seed);
    auto run = [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t> &counts) {
        for (std::uint64_t t = begin; t < end; ++t) {
            std::size_t k = sample(source_cdf, rng.uniform(2 * t));
            std::size_t z = sample(branch_cdf[k], rng.uniform(2 * t + 1));
            ++counts[k * finals + z];
        }
    };

    workers = std::max(1u, workers);
    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(boxes * finals, 0));
    if (workers == 1) {
        run(0, trials, partial[0]);
    } else {
        std::vector<std::thread> threads;
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t begin = std::min<std::uint64_t>(trials, chunk * w);
            std::uint64_t end = std::min<std::uint64_t>(trials, begin + chunk);
            threads.emplace_back([&, begin, end, w] { run(begin, end, partial[w]); });
        }
        for (auto &t : threads) {
            t.join();
        }
    }

    SimulationCounts out{boxes, finals, trials, std::vector<std::uint64_t>(boxes * finals, 0)};
    for (const auto &p : partial) {
        for (std::size_t c = 0; c < p.size(); ++c) {
            out.counts[c] += p[c];
        }
    }
    return out;
}

SimulationCounts simulate(const InvasiveModel &model, const ObservationContext &context, std::uint64_t trials,
                          std::uint64_t seed, unsigned workers) {
    return simulate(model.network(context), trials, seed, workers);
}

}  // namespace feynroute
