/*
 * Copyright 2026 the dkh authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dkh/harness.hpp"
#include "dkh/proof.hpp"
#include "dkh/semantics.hpp"

namespace {

using namespace dkh;

Group parse_group_flag(const std::string& text) {
    std::vector<int> members;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        if (!item.empty()) {
            std::size_t used = 0;
            int agent = std::stoi(item, &used);
            if (used != item.size() || agent < 0)
                throw ValidationError("bad agent index '" + item + "' in group flag");
            members.push_back(agent);
        } else if (comma != std::string::npos) {
            throw ValidationError("empty item in group flag '" + text + "'");
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return Group(std::move(members));
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings)
        std::cerr << "warning: " << w << "\n";
}

std::string class_to_string(const Model& m, const EquivClass& cls) {
    std::string out = "{";
    for (std::size_t i = 0; i < cls.states.size(); ++i) {
        if (i > 0)
            out += ',';
        out += m.state_name(cls.states[i]);
    }
    out += '}';
    return out;
}

int run_check(const std::string& model_path, const std::string& formula_text,
              const std::string& state) {
    Model model = Model::load_file(model_path);
    Formula f = parse_formula(formula_text);
    std::vector<std::string> warnings;
    StateSet truth = eval(model, f, &warnings);
    print_warnings(warnings);
    if (!state.empty()) {
        bool holds = state_set_contains(truth, model.state_index(state));
        std::cout << (holds ? "true" : "false") << "\n";
        return holds ? 0 : 1;
    }
    for (int s = 0; s < model.state_count(); ++s)
        std::cout << model.state_name(s) << ": "
                  << (state_set_contains(truth, s) ? "true" : "false") << "\n";
    return truth == model.all_states() ? 0 : 1;
}

int run_closure(const std::string& model_path, const std::string& group_flag, bool nested) {
    Model model = Model::load_file(model_path);
    Group g = parse_group_flag(group_flag);
    if (nested) {
        for (const NestedAction& d : closure_nested(model, g))
            std::cout << d.to_string() << "\n";
    } else {
        for (const JointAction& j : canonical_actions(model, g))
            std::cout << j.to_string() << "\n";
    }
    return 0;
}

int run_synth(const std::string& model_path, const std::string& state,
              const std::string& group_flag, const std::string& goal_text,
              const std::string& out_path) {
    Model model = Model::load_file(model_path);
    Group g = parse_group_flag(group_flag);
    Formula goal = parse_formula(goal_text);
    std::optional<Strategy> strat = synthesize_strategy(model, model.state_index(state), g, goal);
    if (!strat) {
        std::cout << "no strategy\n";
        return 1;
    }
    std::string text = strat->to_json(model).dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw ValidationError("cannot write strategy file '" + out_path + "'");
        out << text;
    }
    return 0;
}

int run_verify(const std::string& model_path, const std::string& group_flag,
               const std::string& strategy_path, const std::string& state,
               const std::string& goal_text) {
    Model model = Model::load_file(model_path);
    Group g = parse_group_flag(group_flag);
    Strategy strat = Strategy::load_file(model, strategy_path);
    Formula goal = parse_formula(goal_text);
    std::vector<std::string> warnings;
    StateSet goal_states = eval(model, goal, &warnings);
    print_warnings(warnings);

    StrategyVerdict verdict =
        verify_strategy(model, g, strat, model.state_index(state), goal_states);

    auto class_list = [&](const std::vector<EquivClass>& classes) {
        std::string out;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            if (i > 0)
                out += ' ';
            out += class_to_string(model, classes[i]);
        }
        return out.empty() ? "-" : out;
    };
    std::cout << "terminating: " << (verdict.terminating ? "true" : "false") << "\n";
    std::cout << "leaves: " << class_list(verdict.leaves) << "\n";
    std::cout << "inners: " << class_list(verdict.inners) << "\n";
    std::cout << "bad_leaf: "
              << (verdict.bad_leaf ? class_to_string(model, *verdict.bad_leaf) : "-") << "\n";
    std::cout << "cycle: " << (verdict.cycle_witness ? class_list(*verdict.cycle_witness) : "-")
              << "\n";
    std::cout << "success: " << (verdict.success() ? "true" : "false") << "\n";
    return verdict.success() ? 0 : 1;
}

int run_prove(const std::string& path) {
    Derivation derivation = Derivation::load_file(path);
    bool all_ok = true;
    for (const LineVerdict& v : check_derivation(derivation)) {
        if (v.ok) {
            std::cout << v.index << ": OK\n";
        } else {
            std::cout << v.index << ": FAIL (" << v.message << ")\n";
            all_ok = false;
        }
    }
    return all_ok ? 0 : 1;
}

int run_fuzz(std::uint64_t seed, int models, int instances, bool serial) {
    GenParams params;
    params.seed = seed;
    SweepReport report = soundness_sweep(params, models, instances,
                                         serial ? Execution::Serial : Execution::Parallel);
    std::cout << report.to_json().dump(2) << "\n";
    return report.passed() ? 0 : 1;
}

int run_counter(const std::string& schema, std::uint64_t seed, int budget, bool serial) {
    Formula tpl = named_template(schema);
    GenParams params;
    params.seed = seed;
    std::optional<CounterExample> hit = find_countermodel(
        tpl, params, budget, serial ? Execution::Serial : Execution::Parallel);
    if (!hit) {
        std::cerr << "no countermodel found within budget " << budget << "\n";
        return 1;
    }
    std::cout << hit->to_json().dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dkh: model checking, strategy synthesis and proof checking for "
                 "distributed knowledge-how"};
    app.require_subcommand(1);

    std::string model_path, formula_text, state, group_flag, out_path, strategy_path;
    std::string derivation_path, schema;
    bool nested = false, serial = false;
    std::uint64_t seed = 1;
    int models = 100, instances = 3, budget = 10000;

    CLI::App* check = app.add_subcommand("check", "evaluate a formula on a model");
    check->add_option("-m,--model", model_path, "model file")->required();
    check->add_option("-f,--formula", formula_text, "formula text")->required();
    check->add_option("-s,--state", state, "evaluate at this state only");

    CLI::App* closure = app.add_subcommand("closure", "print the distributed actions of a group");
    closure->add_option("-m,--model", model_path, "model file")->required();
    closure->add_option("-g,--group", group_flag, "comma-separated agent indices")->required();
    closure->add_flag("--nested", nested, "print the nested tuple forms");

    CLI::App* synth = app.add_subcommand("synth", "synthesize a witness strategy for Kh");
    synth->add_option("-m,--model", model_path, "model file")->required();
    synth->add_option("-s,--state", state, "start state")->required();
    synth->add_option("-g,--group", group_flag, "comma-separated agent indices")->required();
    synth->add_option("-f,--formula", formula_text, "goal formula")->required();
    synth->add_option("-o,--output", out_path, "strategy file to write");

    CLI::App* verify = app.add_subcommand("verify", "verify a strategy against a goal");
    verify->add_option("-m,--model", model_path, "model file")->required();
    verify->add_option("-g,--group", group_flag, "comma-separated agent indices")->required();
    verify->add_option("--strategy", strategy_path, "strategy file")->required();
    verify->add_option("-s,--state", state, "start state")->required();
    verify->add_option("-f,--formula", formula_text, "goal formula")->required();

    CLI::App* prove = app.add_subcommand("prove", "check a Hilbert-style derivation");
    prove->add_option("file", derivation_path, "derivation file")->required();

    CLI::App* fuzz = app.add_subcommand("fuzz", "run the axiom soundness sweep");
    fuzz->add_option("--seed", seed, "sweep seed");
    fuzz->add_option("--models", models, "number of random models");
    fuzz->add_option("--instances", instances, "instantiations per schema per model");
    fuzz->add_flag("--serial", serial, "use the serial reference loop");

    CLI::App* counter = app.add_subcommand("counter", "search for a countermodel to a schema");
    counter->add_option("--schema", schema, "coop, khconj, an axiom name, or template text")
        ->required();
    counter->add_option("--seed", seed, "search seed");
    counter->add_option("--budget", budget, "maximum number of samples");
    counter->add_flag("--serial", serial, "use the serial reference loop");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed())
            return run_check(model_path, formula_text, state);
        if (closure->parsed())
            return run_closure(model_path, group_flag, nested);
        if (synth->parsed())
            return run_synth(model_path, state, group_flag, formula_text, out_path);
        if (verify->parsed())
            return run_verify(model_path, group_flag, strategy_path, state, formula_text);
        if (prove->parsed())
            return run_prove(derivation_path);
        if (fuzz->parsed())
            return run_fuzz(seed, models, instances, serial);
        if (counter->parsed())
            return run_counter(schema, seed, budget, serial);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
