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


#include "app.hpp"

#include <map>

#include "CLI11.hpp"
#include "feynroute/errors.hpp"
#include "threebox_scenario.hpp"

namespace feynroute::cli {

const char *threebox_scenario_text() {
    return kThreeboxScenario;
}

std::string run_threebox(Format format) {
    return emit(build_scenario_report(parse_scenario(kThreeboxScenario, "threebox.scn")), format);
}

std::string run_classical(std::uint64_t trials, std::uint64_t seed, Format format) {
    return emit(build_classical_report(trials, seed), format);
}

std::string run_scenario(const std::string &path, Format format) {
    return emit(build_scenario_report(load_scenario(path)), format);
}

int exit_code_for(const std::exception &e) {
    if (dynamic_cast<const ConfigError *>(&e) || dynamic_cast<const NormalizationError *>(&e) ||
        dynamic_cast<const DimensionError *>(&e) || dynamic_cast<const OperatorError *>(&e) ||
        dynamic_cast<const UnitarityError *>(&e) || dynamic_cast<const BasisError *>(&e) ||
        dynamic_cast<const ConstraintError *>(&e)) {
        return kExitValidation;
    }
    return kExitComputation;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Path-sum analysis of pre- and post-selected quantum scenarios", "feynroute"};
    app.require_subcommand(1);

    const std::map<std::string, Format> formats{{"table", Format::table}, {"structured", Format::structured}};
    Format format = Format::table;
    auto add_format = [&](CLI::App *sub) {
        sub->add_option("--format", format, "table or structured (JSON)")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    };

    CLI::App *threebox = app.add_subcommand("threebox", "Built-in three-box report");
    add_format(threebox);

    std::uint64_t trials = kDefaultTrials;
    std::uint64_t seed = kDefaultSeed;
    CLI::App *classical = app.add_subcommand("classical", "Classical pathway models of the three-box scenario");
    classical->add_option("--trials", trials, "Monte Carlo trials per context; 0 skips the simulation")
        ->capture_default_str();
    classical->add_option("--seed", seed, "Seed of the counter-based generator")->capture_default_str();
    add_format(classical);

    std::string path;
    CLI::App *scenario = app.add_subcommand("scenario", "Analyse a scenario file");
    scenario->add_option("path", path, "Scenario file")->required();
    add_format(scenario);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*threebox) {
            out << run_threebox(format);
        } else if (*classical) {
            out << run_classical(trials, seed, format);
        } else {
            out << run_scenario(path, format);
        }
        return kExitOk;
    } catch (const std::exception &e) {
        int code = exit_code_for(e);
        err << (code == kExitValidation ? "invalid input: " : "computation failed: ") << e.what() << "\n";
        return code;
    }
}

}  // namespace feynroute::cli
