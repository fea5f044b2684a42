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

#include "dkh/harness.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace dkh {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Rng

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next() { return splitmix64(state_); }

int Rng::uniform(int lo, int hi) {
    if (lo > hi)
        throw std::invalid_argument("empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<int>(next() % span);
}

bool Rng::chance(double p) {
    if (p <= 0.0)
        return false;
    if (p >= 1.0)
        return true;
    return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t state = root ^ (stream * 0xd1342543de82ef95ULL) ^ (index + 1);
    std::uint64_t first = splitmix64(state);
    return first ^ splitmix64(state);
}

// ---------------------------------------------------------------------------
// GenParams

namespace {

void check_range(const IntRange& r, int floor, const char* what) {
    if (r.lo > r.hi)
        throw std::invalid_argument(std::string(what) + ": empty range");
    if (r.lo < floor)
        throw std::invalid_argument(std::string(what) + ": below " + std::to_string(floor));
}

json range_json(const IntRange& r) { return json::array({r.lo, r.hi}); }

}  // namespace

void GenParams::validate() const {
    check_range(state_count, 1, "state_count");
    check_range(agent_count, 1, "agent_count");
    check_range(atoms_per_group, 0, "atoms_per_group");
    check_range(props, 0, "props");
    check_range(formula_depth, 0, "formula_depth");
    if (transition_density < 0.0 || transition_density > 1.0)
        throw std::invalid_argument("transition_density must be within [0,1]");
    if (multi_owner_prob < 0.0 || multi_owner_prob > 1.0)
        throw std::invalid_argument("multi_owner_prob must be within [0,1]");
}

json GenParams::to_json() const {
    json doc;
    doc["seed"] = seed;
    doc["state_count"] = range_json(state_count);
    doc["agent_count"] = range_json(agent_count);
    doc["atoms_per_group"] = range_json(atoms_per_group);
    doc["props"] = range_json(props);
    doc["transition_density"] = transition_density;
    doc["formula_depth"] = range_json(formula_depth);
    doc["multi_owner_prob"] = multi_owner_prob;
    return doc;
}

// ---------------------------------------------------------------------------
// Random models and formulas

Model random_model(const GenParams& p) {
    p.validate();
    Rng rng(p.seed);

    const int agents = rng.uniform(p.agent_count.lo, p.agent_count.hi);
    const int states = rng.uniform(p.state_count.lo, p.state_count.hi);

    std::vector<std::string> names;
    names.reserve(states);
    for (int s = 0; s < states; ++s)
        names.push_back("s" + std::to_string(s));

    // Per-agent partitions by random block merging.
    std::map<int, std::vector<StateSet>> epistemic;
    for (int agent = 0; agent < agents; ++agent) {
        std::vector<StateSet> blocks;
        for (int s = 0; s < states; ++s)
            blocks.push_back({s});
        int merges = rng.uniform(0, states - 1);
        for (int k = 0; k < merges && blocks.size() >= 2; ++k) {
            int i = rng.uniform(0, static_cast<int>(blocks.size()) - 1);
            int j = rng.uniform(0, static_cast<int>(blocks.size()) - 2);
            if (j >= i)
                ++j;
            StateSet merged = state_set_union(blocks[i], blocks[j]);
            blocks[std::min(i, j)] = std::move(merged);
            blocks.erase(blocks.begin() + std::max(i, j));
        }
        epistemic[agent] = std::move(blocks);
    }

    std::map<std::string, StateSet> valuation;
    const int prop_count = rng.uniform(p.props.lo, p.props.hi);
    for (int k = 0; k < prop_count; ++k) {
        StateSet where;
        for (int s = 0; s < states; ++s)
            if (rng.chance(0.5))
                where.push_back(s);
        valuation["p" + std::to_string(k)] = std::move(where);
    }

    // Owner groups: every singleton, multi-agent subsets with low
    // probability. Masks ascend, so generation order is stable.
    std::vector<AtomicAction> atoms;
    int atom_counter = 0;
    for (unsigned mask = 1; mask < (1u << agents); ++mask) {
        bool multi = (mask & (mask - 1)) != 0;
        if (multi && !rng.chance(p.multi_owner_prob))
            continue;
        std::vector<int> members;
        for (int agent = 0; agent < agents; ++agent)
            if (mask & (1u << agent))
                members.push_back(agent);
        Group owner(members);
        int count = rng.uniform(p.atoms_per_group.lo, p.atoms_per_group.hi);
        for (int k = 0; k < count; ++k) {
            AtomicAction atom;
            atom.name = "a" + std::to_string(atom_counter++);
            atom.owner = owner;
            for (int s = 0; s < states; ++s)
                for (int t = 0; t < states; ++t)
                    if (rng.chance(p.transition_density))
                        atom.moves.emplace_back(s, t);
            atoms.push_back(std::move(atom));
        }
    }

    return Model(agents, std::move(names), epistemic, std::move(atoms), std::move(valuation));
}

namespace {

Group random_group(Rng& rng, int agent_count) {
    std::vector<int> members;
    for (int agent = 0; agent < agent_count; ++agent)
        if (rng.chance(0.4))
            members.push_back(agent);
    return Group(std::move(members));
}

Group random_subgroup(Rng& rng, const Group& of) {
    std::vector<int> members;
    for (int agent : of.members())
        if (rng.chance(0.5))
            members.push_back(agent);
    return Group(std::move(members));
}

}  // namespace

Formula random_formula(Rng& rng, const std::vector<std::string>& props, int agent_count,
                       int depth) {
    auto leaf = [&]() {
        if (props.empty() || rng.chance(0.2))
            return Formula::top();
        return Formula::atom(props[rng.uniform(0, static_cast<int>(props.size()) - 1)]);
    };
    if (depth <= 0)
        return leaf();
    switch (rng.uniform(0, 9)) {
        case 0:
        case 1:
            return leaf();
        case 2:
        case 3:
            return Formula::negation(random_formula(rng, props, agent_count, depth - 1));
        case 4:
        case 5:
            return Formula::conjunction(random_formula(rng, props, agent_count, depth - 1),
                                        random_formula(rng, props, agent_count, depth - 1));
        case 6:
        case 7:
            return Formula::know(random_group(rng, agent_count),
                                 random_formula(rng, props, agent_count, depth - 1));
        default:
            return Formula::know_how(random_group(rng, agent_count),
                                     random_formula(rng, props, agent_count, depth - 1));
    }
}

// ---------------------------------------------------------------------------
// Axiom instances

const std::vector<Rule>& sdkh_axioms() {
    static const std::vector<Rule> axioms = {
        Rule::Taut,      Rule::DistK,      Rule::T,         Rule::Four,     Rule::Five,
        Rule::AxKMono,   Rule::AxKhMono,   Rule::AxKtoKh,   Rule::AxEmpKhtoK,
        Rule::AxKhtoKKh, Rule::AxEmpMono,  Rule::AxKhbot,   Rule::AxKhtoKhK, Rule::AxKhKh,
    };
    return axioms;
}

Formula axiom_instance(Rule axiom, const SchemaArgs& args) {
    const Formula& phi = args.phi;
    const Formula& psi = args.psi;
    const Group& g = args.g;
    const Group& h = args.h;
    const Group none = Group::empty();
    using F = Formula;
    switch (axiom) {
        case Rule::Taut:
            return F::implication(phi, F::implication(psi, phi));
        case Rule::DistK:
            return F::implication(
                F::conjunction(F::know(g, phi), F::know(g, F::implication(phi, psi))),
                F::know(g, psi));
        case Rule::T:
            return F::implication(F::know(g, phi), phi);
        case Rule::Four:
            return F::implication(F::know(g, phi), F::know(g, F::know(g, phi)));
        case Rule::Five:
            return F::implication(F::negation(F::know(g, phi)),
                                  F::know(g, F::negation(F::know(g, phi))));
        case Rule::AxKMono:
            return F::implication(F::know(g, phi), F::know(h, phi));
        case Rule::AxKhMono:
            return F::implication(F::know_how(g, phi), F::know_how(h, phi));
        case Rule::AxKtoKh:
            return F::implication(F::know(g, phi), F::know_how(g, phi));
        case Rule::AxEmpKhtoK:
            return F::implication(F::know_how(none, phi), F::know(none, phi));
        case Rule::AxKhtoKKh:
            return F::implication(F::know_how(g, phi), F::know(g, F::know_how(g, phi)));
        case Rule::AxEmpMono:
            return F::implication(
                F::know(none, F::implication(phi, psi)),
                F::know(none, F::implication(F::know_how(g, phi), F::know_how(g, psi))));
        case Rule::AxKhbot:
            return F::implication(F::know_how(g, F::falsum()), F::falsum());
        case Rule::AxKhtoKhK:
            return F::implication(F::know_how(g, phi), F::know_how(g, F::know(g, phi)));
        case Rule::AxKhKh:
            return F::implication(F::know_how(g, F::know_how(g, phi)), F::know_how(g, phi));
        default:
            throw std::invalid_argument("not an axiom schema: " + rule_name(axiom));
    }
}

// ---------------------------------------------------------------------------
// Soundness sweep

bool SweepViolation::operator<(const SweepViolation& other) const {
    if (seed != other.seed)
        return seed < other.seed;
    if (formula != other.formula)
        return formula < other.formula;
    return state < other.state;
}

json SweepReport::to_json() const {
    json doc;
    doc["params"] = params.to_json();
    doc["models_tested"] = models_tested;
    doc["models_skipped"] = models_skipped;
    doc["instances_tested"] = instances_tested;
    json arr = json::array();
    for (const SweepViolation& v : violations) {
        json row;
        row["seed"] = v.seed;
        row["state"] = v.state;
        row["formula"] = v.formula;
        arr.push_back(std::move(row));
    }
    doc["violations"] = std::move(arr);
    return doc;
}

namespace {

struct PerModelResult {
    bool skipped = false;
    std::int64_t instances = 0;
    std::vector<SweepViolation> violations;
};

// All checks for one random model. Self-contained and deterministic, so the
// parallel sweep can run model indices in any order.
PerModelResult sweep_one_model(const GenParams& root, int model_index, int instances_per_model) {
    PerModelResult result;
    const std::uint64_t model_seed = derive_seed(root.seed, 0x5eedd, model_index);
    GenParams local = root;
    local.seed = model_seed;

    try {
        Model model = random_model(local);
        Rng rng(derive_seed(root.seed, 0xf00d, model_index));
        const StateSet everything = model.all_states();

        std::vector<std::string> props;
        for (const auto& [prop, _] : model.valuation())
            props.push_back(prop);

        auto report = [&](const Formula& f, const StateSet& truth) {
            SweepViolation v;
            v.seed = model_seed;
            StateSet missing = state_set_difference(everything, truth);
            v.state = missing.empty() ? "" : model.state_name(missing.front());
            v.formula = print_formula(f);
            result.violations.push_back(std::move(v));
        };
        auto expect_valid = [&](const Formula& f) {
            StateSet truth = eval(model, f);
            ++result.instances;
            if (truth != everything)
                report(f, truth);
            return truth == everything;
        };

        auto fresh_args = [&]() {
            int depth = rng.uniform(root.formula_depth.lo, root.formula_depth.hi);
            SchemaArgs args{random_formula(rng, props, model.agent_count(), depth),
                            random_formula(rng, props, model.agent_count(), depth),
                            Group::empty(), Group::empty()};
            args.h = random_group(rng, model.agent_count());
            args.g = random_subgroup(rng, args.h);  // G subset-of H side condition
            return args;
        };

        // Axiom schemas.
        for (Rule axiom : sdkh_axioms())
            for (int k = 0; k < instances_per_model; ++k)
                expect_valid(axiom_instance(axiom, fresh_args()));

        // MP / NECK preserve validity: feed them known-valid premises.
        for (int k = 0; k < instances_per_model; ++k) {
            SchemaArgs args = fresh_args();
            Formula a = axiom_instance(Rule::T, args);
            Formula b = axiom_instance(Rule::AxKtoKh, args);
            if (expect_valid(a) && expect_valid(Formula::implication(a, b)))
                expect_valid(b);
            Formula k_a = Formula::know(random_group(rng, model.agent_count()), a);
            expect_valid(k_a);
        }

        // K_{} / Kh_{} collapse to the universal modality.
        for (int k = 0; k < instances_per_model; ++k) {
            int depth = rng.uniform(root.formula_depth.lo, root.formula_depth.hi);
            Formula f = random_formula(rng, props, model.agent_count(), depth);
            StateSet truth = eval(model, f);
            StateSet expected = (truth == everything) ? everything : StateSet{};
            Formula k_empty = Formula::know(Group::empty(), f);
            Formula kh_empty = Formula::know_how(Group::empty(), f);
            ++result.instances;
            if (eval(model, k_empty) != expected)
                report(k_empty, eval(model, k_empty));
            ++result.instances;
            if (eval(model, kh_empty) != expected)
                report(kh_empty, eval(model, kh_empty));
        }
    } catch (const LimitError&) {
        result = PerModelResult{};
        result.skipped = true;
    }
    return result;
}

}  // namespace

SweepReport soundness_sweep(const GenParams& p, int models, int instances_per_model,
                            Execution exec) {
    p.validate();
    if (models < 0 || instances_per_model < 0)
        throw std::invalid_argument("negative sweep sizes");

    std::vector<PerModelResult> results(models);
    if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < models; ++i)
            results[i] = sweep_one_model(p, i, instances_per_model);
    } else {
        for (int i = 0; i < models; ++i)
            results[i] = sweep_one_model(p, i, instances_per_model);
    }

    SweepReport report;
    report.params = p;
    for (PerModelResult& r : results) {
        if (r.skipped) {
            ++report.models_skipped;
            continue;
        }
        ++report.models_tested;
        report.instances_tested += r.instances;
        std::move(r.violations.begin(), r.violations.end(),
                  std::back_inserter(report.violations));
    }
    std::sort(report.violations.begin(), report.violations.end());
    return report;
}

// ---------------------------------------------------------------------------
// Countermodel search

json CounterExample::to_json() const {
    json doc;
    doc["sample_index"] = sample_index;
    doc["seed"] = seed;
    doc["state"] = state;
    doc["formula"] = print_formula(instance);
    doc["model"] = model.to_json();
    return doc;
}

Formula substitute_metavars(const Formula& tpl, const Formula& phi, const Formula& psi) {
    switch (tpl.kind()) {
        case Conn::Top:
            return tpl;
        case Conn::Atom:
            if (tpl.atom_name() == "phi")
                return phi;
            if (tpl.atom_name() == "psi")
                return psi;
            return tpl;
        case Conn::Not:
            return Formula::negation(substitute_metavars(tpl.child(), phi, psi));
        case Conn::And:
            return Formula::conjunction(substitute_metavars(tpl.lhs(), phi, psi),
                                        substitute_metavars(tpl.rhs(), phi, psi));
        case Conn::Know:
            return Formula::know(tpl.group(), substitute_metavars(tpl.child(), phi, psi));
        case Conn::KnowHow:
            return Formula::know_how(tpl.group(), substitute_metavars(tpl.child(), phi, psi));
    }
    throw std::logic_error("unreachable");
}

Formula named_template(const std::string& name) {
    if (name == "coop")
        return parse_formula("Kh{0}(phi -> psi) -> (Kh{1}phi -> Kh{0,1}psi)");
    if (name == "khconj")
        return parse_formula("Kh{0}phi & Kh{0}psi -> Kh{0}(phi & psi)");
    static const std::vector<Rule>& axioms = sdkh_axioms();
    for (Rule axiom : axioms)
        if (rule_name(axiom) == name)
            return axiom_instance(axiom, SchemaArgs{Formula::atom("phi"), Formula::atom("psi"),
                                                    Group({0}), Group({0, 1})});
    // Fall back to raw template text.
    return parse_formula(name);
}

namespace {

// Largest agent index mentioned by any group of f, or -1.
int max_agent_index(const Formula& f) {
    int best = -1;
    for (const Formula& sub : subformulas(f))
        if ((sub.kind() == Conn::Know || sub.kind() == Conn::KnowHow) && !sub.group().is_empty())
            best = std::max(best, sub.group().members().back());
    return best;
}

std::optional<CounterExample> counter_sample(const Formula& tpl, int needed_agents,
                                             const GenParams& root, std::uint64_t index) {
    const std::uint64_t sample_seed = derive_seed(root.seed, 0xc0de, index);
    GenParams local = root;
    local.seed = sample_seed;
    try {
        Model model = random_model(local);
        if (model.agent_count() < needed_agents)
            return std::nullopt;  // cannot host the template's groups
        Rng rng(derive_seed(root.seed, 0xc0df, index));
        std::vector<std::string> props;
        for (const auto& [prop, _] : model.valuation())
            props.push_back(prop);

        Formula phi = random_formula(rng, props, model.agent_count(), rng.uniform(0, 1));
        Formula psi = random_formula(rng, props, model.agent_count(), rng.uniform(0, 1));
        Formula instance = substitute_metavars(tpl, phi, psi);

        StateSet truth = eval(model, instance);
        StateSet missing = state_set_difference(model.all_states(), truth);
        if (missing.empty())
            return std::nullopt;

        CounterExample hit{index, sample_seed, std::move(model),
                           std::string(), std::move(instance)};
        hit.state = hit.model.state_name(missing.front());
        // Re-verify the hit before handing it out.
        StateSet again = eval(hit.model, hit.instance);
        if (again == hit.model.all_states() ||
            state_set_contains(again, hit.model.state_index(hit.state)))
            return std::nullopt;
        return hit;
    } catch (const LimitError&) {
        return std::nullopt;
    }
}

}  // namespace

std::optional<CounterExample> find_countermodel(const Formula& tpl, const GenParams& p,
                                                int budget, Execution exec) {
    p.validate();
    if (budget <= 0)
        throw std::invalid_argument("budget must be positive");

    // Samples whose models cannot host the template's groups are skipped,
    // so a hit always replays from the user's own parameters.
    const int needed_agents = max_agent_index(tpl) + 1;
    if (needed_agents > p.agent_count.hi)
        throw std::invalid_argument("template needs " + std::to_string(needed_agents) +
                                    " agents but agent_count tops out at " +
                                    std::to_string(p.agent_count.hi));

    const int chunk = 256;
    for (int start = 0; start < budget; start += chunk) {
        const int end = std::min(budget, start + chunk);
        std::vector<std::optional<CounterExample>> hits(end - start);
        if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
            for (int i = start; i < end; ++i)
                hits[i - start] =
                    counter_sample(tpl, needed_agents, p, static_cast<std::uint64_t>(i));
        } else {
            for (int i = start; i < end; ++i) {
                hits[i - start] =
                    counter_sample(tpl, needed_agents, p, static_cast<std::uint64_t>(i));
                if (hits[i - start])
                    break;  // serial path can stop at the first hit
            }
        }
        for (std::optional<CounterExample>& hit : hits)
            if (hit)
                return std::move(*hit);
    }
    return std::nullopt;
}

}  // namespace dkh
