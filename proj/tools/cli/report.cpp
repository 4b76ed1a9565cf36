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

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "feynroute/condprob.hpp"
#include "feynroute/meter.hpp"
#include "feynroute/rng.hpp"
#include "feynroute/threebox.hpp"
#include "json.hpp"

namespace nlohmann {

template <typename T>
struct adl_serializer<std::optional<T>> {
    static void to_json(json &j, const std::optional<T> &v) {
        if (v) {
            j = *v;
        } else {
            j = nullptr;
        }
    }
    static void from_json(const json &j, std::optional<T> &v) {
        if (j.is_null()) {
            v.reset();
        } else {
            v = j.get<T>();
        }
    }
};

// [re, im]
template <>
struct adl_serializer<std::complex<double>> {
    static void to_json(json &j, const std::complex<double> &z) {
        j = json::array({z.real(), z.imag()});
    }
    static void from_json(const json &j, std::complex<double> &z) {
        if (!j.is_array() || j.size() != 2) {
            throw std::invalid_argument("complex number must be [re, im]");
        }
        z = {j[0].get<double>(), j[1].get<double>()};
    }
};

}  // namespace nlohmann

namespace feynroute::cli {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ContextReport, name, eigenvalues, weights, marginals, total, conditionals, sharp,
                                   sharp_value)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SharpnessEntry, sharp, value)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ProductRuleEntry, first, second, ensemble, a, b, product, verdict)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DeltaNReport, unitary, minus_one, zero, plus_one)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConstraintEntry, tag, coeffs, rhs)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CertificateReport, tags, pivot_tag, pivot_coeffs, required, implied_min,
                                   implied_max, alternatives)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FeasibilityReport, variables, lower, upper, constraints, feasible, witness,
                                   certificate, rank, equalities_consistent)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ScenarioReport, name, dim, initial, finals, postselect, path_amplitudes, contexts,
                                   product_rules, deltan, feasibility)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NetworkEntry, context, source, branching)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SimulatedContext, context, expected, observed, max_sigma)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SimulationReport, trials, seed, algorithm, contexts, max_sigma)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClassicalReport, final_state, noninvasive, lid_local, model, reproduction_error,
                                   simulation)

namespace {

constexpr int kFormatVersion = 1;

SharpnessEntry to_entry(const Sharpness &s) {
    return {s.sharp, s.value};
}

ProductRuleEntry to_entry(const SharpnessReport &r, std::string first, std::string second, std::string ensemble) {
    return {std::move(first),
            std::move(second),
            std::move(ensemble),
            to_entry(r.a),
            to_entry(r.b),
            to_entry(r.product),
            r.verdict == ProductRule::holds ? "holds" : "fails"};
}

std::vector<std::vector<double>> rows_of(const Eigen::MatrixXd &m) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out[static_cast<std::size_t>(r)].push_back(m(r, c));
        }
    }
    return out;
}

ContextReport context_report(const std::string &name, const State &initial, std::span<const State> finals,
                             std::size_t postselect, const ProjectorFamily &family) {
    RouteTable table = route_probabilities(initial, finals, family, name);
    ContextReport out;
    out.name = name;
    out.eigenvalues = table.eigenvalues;
    for (std::size_t z = 0; z < finals.size(); ++z) {
        std::vector<double> row;
        for (std::size_t m = 0; m < table.eigenvalues.size(); ++m) {
            row.push_back(table.weight(z, m));
        }
        out.weights.push_back(std::move(row));
        out.marginals.push_back(table.marginal(z));
    }
    out.total = table.total();
    ClassConditionals abl = abl_conditional(initial, finals[postselect], family);
    out.conditionals = abl.probabilities;
    Sharpness s = sharpness(abl);
    out.sharp = s.sharp;
    out.sharp_value = s.value;
    return out;
}

unsigned default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 8u);
}

}  // namespace

FeasibilityReport build_feasibility_report(const FeasibilityProblem &problem) {
    FeasibilityVerdict verdict = solve_feasibility(problem);
    FeasibilityReport out;
    out.variables = problem.variables();
    out.lower = problem.lower();
    out.upper = problem.upper();
    for (const auto &c : problem.constraints()) {
        out.constraints.push_back({c.tag, c.coeffs, c.rhs});
    }
    out.feasible = verdict.feasible;
    out.witness = verdict.witness;
    if (verdict.certificate) {
        const Certificate &c = *verdict.certificate;
        out.certificate = CertificateReport{c.tags,     c.pivot_tag,   c.pivot_coeffs, c.required,
                                            c.implied_min, c.implied_max, c.alternatives};
    }
    out.rank = verdict.rank;
    out.equalities_consistent = verdict.equalities_consistent;
    return out;
}

ScenarioReport build_scenario_report(const ScenarioConfig &config) {
    ScenarioReport out;
    out.name = config.name;
    out.dim = config.dim;
    for (Eigen::Index n = 0; n < config.initial.coeffs().size(); ++n) {
        out.initial.push_back(config.initial.coeffs()(n));
    }
    std::vector<State> finals;
    for (const auto &f : config.finals) {
        out.finals.push_back(f.name);
        finals.push_back(f.state);
    }
    const std::size_t z = config.postselect;
    out.postselect = config.finals[z].name;

    // Distinct labels resolve every basis state into its own class.
    std::vector<double> finest(config.dim);
    for (std::size_t n = 0; n < config.dim; ++n) {
        finest[n] = static_cast<double>(n);
    }
    out.path_amplitudes = class_amplitudes(config.initial, finals[z], ProjectorFamily::from_labels(finest)).amplitudes;

    for (const auto &c : config.contexts) {
        switch (c.kind) {
            case ContextSpec::Kind::none:
                out.contexts.push_back(
                    context_report(c.name, config.initial, finals, z, ProjectorFamily::trivial(config.dim)));
                break;
            case ContextSpec::Kind::family:
                out.contexts.push_back(context_report(c.name, config.initial, finals, z, config.family(c.first)));
                break;
            case ContextSpec::Kind::product: {
                const ProjectorFamily &a = config.family(c.first);
                const ProjectorFamily &b = config.family(c.second);
                out.contexts.push_back(context_report(c.name, config.initial, finals, z, product_family(a, b)));
                out.product_rules.push_back(
                    to_entry(product_rule_report(config.initial, finals[z], a, b), c.first, c.second, "post-selected"));
                out.product_rules.push_back(
                    to_entry(preselected_product_rule_report(config.initial, a, b), c.first, c.second, "pre-selected"));
                break;
            }
        }
    }

    if (config.deltan) {
        DeltaNProbabilities p = delta_n_probabilities(config.unitary(*config.deltan), config.initial, finals[z]);
        out.deltan = DeltaNReport{*config.deltan, p.minus_one, p.zero, p.plus_one};
    }

    if (!config.constraints.empty()) {
        FeasibilityProblem problem(config.variables);
        for (const auto &b : config.bounds) {
            auto it = std::find(config.variables.begin(), config.variables.end(), b.variable);
            problem.set_bounds(static_cast<std::size_t>(it - config.variables.begin()), b.lower, b.upper);
        }
        for (const auto &c : config.constraints) {
            problem.add(c.tag, c.coeffs, c.rhs);
        }
        problem.validate();
        out.feasibility = build_feasibility_report(problem);
    }
    return out;
}

ClassicalReport build_classical_report(std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    const State i = threebox::initial();
    const std::vector<State> finals = threebox::finals();
    const RouteTable none = route_probabilities(i, finals, threebox::unobserved(), "none");
    std::vector<RouteTable> open;
    for (std::size_t box = 0; box < threebox::kBoxes; ++box) {
        open.push_back(route_probabilities(i, finals, threebox::open_box(box), ObservationContext::open(box).name()));
    }

    ClassicalReport out;
    out.final_state = "f";
    out.noninvasive = build_feasibility_report(build_threebox_constraints(none, open[0], open[1], 0));
    out.lid_local = build_feasibility_report(lid_local_problem(none, open[0], open[1], 0));

    InvasiveModel model = synthesize_invasive_model(none, open);
    for (std::size_t k = 0; k < model.contexts().size(); ++k) {
        const ClassicalNetwork &net = model.networks()[k];
        out.model.push_back({model.contexts()[k].name(), net.source(), rows_of(net.branching())});
    }
    out.reproduction_error = reproduction_error(model, none, open);

    if (trials > 0) {
        SimulationReport sim;
        sim.trials = trials;
        sim.seed = seed;
        sim.algorithm = CounterRng::kAlgorithm;
        const unsigned w = workers == 0 ? default_workers() : workers;
        for (const auto &ctx : model.contexts()) {
            const ClassicalNetwork &net = model.network(ctx);
            SimulationCounts counts = simulate(model, ctx, trials, seed, w);
            Eigen::MatrixXd expected = pathway_probabilities(net);
            SimulatedContext sc;
            sc.context = ctx.name();
            sc.expected = rows_of(expected);
            sc.observed.assign(counts.boxes, std::vector<double>(counts.finals));
            for (std::size_t k = 0; k < counts.boxes; ++k) {
                for (std::size_t zz = 0; zz < counts.finals; ++zz) {
                    double p = expected(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(zz));
                    double f = counts.frequency(k, zz);
                    sc.observed[k][zz] = f;
                    if (p > 0.0 && p < 1.0) {
                        double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
                        sc.max_sigma = std::max(sc.max_sigma, std::abs(f - p) / sigma);
                    }
                }
            }
            sim.max_sigma = std::max(sim.max_sigma, sc.max_sigma);
            sim.contexts.push_back(std::move(sc));
        }
        out.simulation = std::move(sim);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text output.

namespace {

double clean(double x) {
    return std::abs(x) < 1e-13 ? 0.0 : x;
}

std::string number(double x) {
    return fmt::format("{:.12g}", clean(x));
}

std::string complex_number(Complex z) {
    return fmt::format("{:.12g}{:+.12g}i", clean(z.real()), clean(z.imag()));
}

std::string joined(const std::vector<std::string> &items, std::string_view sep = ", ") {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (k > 0) {
            out += sep;
        }
        out += items[k];
    }
    return out;
}

std::string expression(const std::vector<double> &coeffs, const std::vector<std::string> &variables) {
    std::string out;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        double c = coeffs[j];
        if (c == 0.0) {
            continue;
        }
        std::string mag = std::abs(c) == 1.0 ? variables[j] : number(std::abs(c)) + "*" + variables[j];
        if (out.empty()) {
            out = c < 0 ? "-" + mag : mag;
        } else {
            out += (c < 0 ? " - " : " + ") + mag;
        }
    }
    return out.empty() ? "0" : out;
}

std::string padded(const std::string &s, std::size_t width) {
    return s.size() >= width ? s + "  " : s + std::string(width - s.size(), ' ');
}

void emit_feasibility(std::string &out, const FeasibilityReport &r) {
    out += fmt::format("  variables: {}\n", joined(r.variables));
    for (std::size_t j = 0; j < r.variables.size(); ++j) {
        if (r.lower[j] != 0.0 || r.upper[j] != 1.0) {
            out += fmt::format("  bounds: {} <= {} <= {}\n", number(r.lower[j]), r.variables[j], number(r.upper[j]));
        }
    }
    for (const auto &c : r.constraints) {
        out += fmt::format("  {:<8} {} = {}\n", c.tag + ":", expression(c.coeffs, r.variables),
                           format_probability(c.rhs));
    }
    out += fmt::format("  rank {}, equalities {}\n", r.rank, r.equalities_consistent ? "consistent" : "inconsistent");
    if (r.feasible) {
        std::vector<std::string> w;
        for (std::size_t j = 0; j < r.witness.size(); ++j) {
            w.push_back(r.variables[j] + " = " + format_probability(r.witness[j]));
        }
        out += fmt::format("  verdict: feasible, witness {}\n", joined(w));
        return;
    }
    out += "  verdict: infeasible\n";
    if (r.certificate) {
        const CertificateReport &c = *r.certificate;
        out += fmt::format("  certificate: {{{}}}\n", joined(c.tags));
        out += fmt::format("    {} requires {} = {}\n", c.pivot_tag, expression(c.pivot_coeffs, r.variables),
                           format_probability(c.required));
        out += fmt::format("    the others force it into [{}, {}]\n", format_probability(c.implied_min),
                           format_probability(c.implied_max));
        for (const auto &alt : c.alternatives) {
            if (alt != c.tags) {
                out += fmt::format("    also minimal: {{{}}}\n", joined(alt));
            }
        }
    }
}

std::string sharp_text(const SharpnessEntry &s) {
    return s.sharp ? "sharp at " + number(s.value) : "not sharp";
}

}  // namespace

std::string format_probability(double x) {
    x = clean(x);
    std::string out = number(x);
    for (int q = 2; q <= 100; ++q) {
        double p = std::round(x * q);
        if (std::abs(x - p / q) <= 1e-9) {
            if (std::abs(x - std::round(x)) > 1e-9) {
                out += fmt::format(" ({}/{})", static_cast<long long>(p), q);
            }
            break;
        }
    }
    return out;
}

std::string emit(const ScenarioReport &r, Format format) {
    if (format == Format::structured) {
        nlohmann::json j = r;
        j["kind"] = "scenario";
        j["format_version"] = kFormatVersion;
        return j.dump(2) + "\n";
    }
    std::string out;
    out += fmt::format("scenario {}\n", r.name);
    std::vector<std::string> init;
    for (Complex c : r.initial) {
        init.push_back(complex_number(c));
    }
    out += fmt::format("dim {}, initial ({}), finals {}, post-selected in {}\n", r.dim, joined(init), joined(r.finals),
                       r.postselect);

    out += fmt::format("\npath amplitudes <{}|n><n|i>\n", r.postselect);
    for (std::size_t n = 0; n < r.path_amplitudes.size(); ++n) {
        out += fmt::format("  n={}  {}\n", n + 1, complex_number(r.path_amplitudes[n]));
    }

    constexpr std::size_t kColumn = 26;
    for (const auto &c : r.contexts) {
        out += fmt::format("\ncontext {}\n", c.name);
        std::string header = "  " + padded("final", 8);
        for (double e : c.eigenvalues) {
            header += padded("F=" + number(e), kColumn);
        }
        header += "arrival";
        out += header + "\n";
        for (std::size_t z = 0; z < c.weights.size(); ++z) {
            std::string line = "  " + padded(r.finals[z], 8);
            for (double w : c.weights[z]) {
                line += padded(format_probability(w), kColumn);
            }
            line += format_probability(c.marginals[z]);
            out += line + "\n";
        }
        out += fmt::format("  total {}\n", format_probability(c.total));
        std::vector<std::string> cond;
        for (std::size_t m = 0; m < c.conditionals.size(); ++m) {
            cond.push_back(fmt::format("P(F={} | {}) = {}", number(c.eigenvalues[m]), r.postselect,
                                       format_probability(c.conditionals[m])));
        }
        out += fmt::format("  {}\n", joined(cond));
        out += fmt::format("  {}\n", c.sharp ? "sharp at F=" + number(c.sharp_value) : "not sharp");
    }

    if (!r.product_rules.empty()) {
        out += "\nproduct rule\n";
        for (const auto &p : r.product_rules) {
            out += fmt::format("  {} * {}, {}: {}; {}; product {}; rule {}\n", p.first, p.second, p.ensemble,
                               sharp_text(p.a), sharp_text(p.b), sharp_text(p.product), p.verdict);
        }
    }

    if (r.deltan) {
        const DeltaNReport &d = *r.deltan;
        out += fmt::format("\njump across {}, post-selected in {}\n", d.unitary, r.postselect);
        out += fmt::format("  P(dn=-1) = {}\n", format_probability(d.minus_one));
        out += fmt::format("  P(dn=0)  = {}\n", format_probability(d.zero));
        out += fmt::format("  P(dn=+1) = {}\n", format_probability(d.plus_one));
    }

    if (r.feasibility) {
        out += "\nclassical constraints\n";
        emit_feasibility(out, *r.feasibility);
    }
    return out;
}

std::string emit(const ClassicalReport &r, Format format) {
    if (format == Format::structured) {
        nlohmann::json j = r;
        j["kind"] = "classical";
        j["format_version"] = kFormatVersion;
        return j.dump(2) + "\n";
    }
    std::string out;
    out += fmt::format("three-box model, post-selected in {}\n", r.final_state);
    out += "\nnon-invasive pathways\n";
    emit_feasibility(out, r.noninvasive);
    out += "\nlid-local disturbance\n";
    emit_feasibility(out, r.lid_local);

    out += "\ninvasive model\n";
    for (const auto &n : r.model) {
        std::vector<std::string> src;
        for (double s : n.source) {
            src.push_back(format_probability(s));
        }
        out += fmt::format("  context {}, source ({})\n", n.context, joined(src));
        for (std::size_t k = 0; k < n.branching.size(); ++k) {
            std::vector<std::string> row;
            for (double p : n.branching[k]) {
                row.push_back(format_probability(p));
            }
            out += fmt::format("    box {}: ({})\n", k + 1, joined(row));
        }
    }
    out += fmt::format("  max deviation from the quantum joints: {}\n", number(r.reproduction_error));

    if (r.simulation) {
        const SimulationReport &s = *r.simulation;
        out += fmt::format("\nsimulation: {} trials, seed {}, {}\n", s.trials, s.seed, s.algorithm);
        for (const auto &c : s.contexts) {
            out += fmt::format("  context {}: max deviation {:.3f} sigma\n", c.context, c.max_sigma);
            for (std::size_t k = 0; k < c.observed.size(); ++k) {
                std::vector<std::string> row;
                for (std::size_t z = 0; z < c.observed[k].size(); ++z) {
                    row.push_back(fmt::format("{:.6f}/{:.6f}", c.observed[k][z], c.expected[k][z]));
                }
                out += fmt::format("    box {} observed/expected: {}\n", k + 1, joined(row));
            }
        }
        out += fmt::format("  worst deviation {:.3f} sigma\n", s.max_sigma);
    } else {
        out += "\nsimulation skipped\n";
    }
    return out;
}

namespace {

template <typename Report>
Report parse_report(const std::string &text, const char *kind) {
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        if (j.value("kind", std::string()) != kind) {
            throw std::invalid_argument(std::string("not a ") + kind + " report");
        }
        if (j.value("format_version", 0) != kFormatVersion) {
            throw std::invalid_argument("unsupported format_version");
        }
        return j.get<Report>();
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
}

}  // namespace

ScenarioReport parse_scenario_report(const std::string &text) {
    return parse_report<ScenarioReport>(text, "scenario");
}

ClassicalReport parse_classical_report(const std::string &text) {
    return parse_report<ClassicalReport>(text, "classical");
}

}  // namespace feynroute::cli
