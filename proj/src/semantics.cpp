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

#include "dkh/semantics.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace dkh {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Strategy

const JointAction* Strategy::action_for(StateId class_rep) const {
    for (const StrategyEntry& e : entries)
        if (e.class_rep == class_rep)
            return &e.action;
    return nullptr;
}

json Strategy::to_json(const Model& m) const {
    json doc;
    doc["group"] = group.members();
    // The file format names each class by its lexicographically least state
    // name; entries are emitted in that order.
    std::vector<std::pair<std::string, const JointAction*>> rows;
    for (const StrategyEntry& e : entries) {
        EquivClass cls = class_of(m, group, e.class_rep);
        std::string least = m.state_name(cls.states.front());
        for (StateId s : cls.states)
            least = std::min(least, m.state_name(s));
        rows.emplace_back(std::move(least), &e.action);
    }
    std::sort(rows.begin(), rows.end());
    json map = json::array();
    for (const auto& [rep, action] : rows) {
        json row;
        row["class_rep"] = rep;
        row["action"] = action->atoms;
        map.push_back(std::move(row));
    }
    doc["map"] = std::move(map);
    return doc;
}

Strategy Strategy::from_json(const Model& m, const json& doc) {
    if (!doc.is_object() || !doc.contains("group") || !doc.contains("map"))
        throw ValidationError("strategy document needs 'group' and 'map' fields");
    std::vector<int> members;
    for (const auto& a : doc["group"])
        members.push_back(a.get<int>());
    Strategy strat;
    try {
        strat.group = Group(std::move(members));
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("strategy group: ") + e.what());
    }
    for (const auto& row : doc["map"]) {
        if (!row.contains("class_rep") || !row.contains("action"))
            throw ValidationError("strategy map rows need 'class_rep' and 'action'");
        StateId rep = m.state_index(row["class_rep"].get<std::string>());
        EquivClass cls = class_of(m, strat.group, rep);
        JointAction action;
        for (const auto& name : row["action"])
            action.atoms.push_back(name.get<std::string>());
        std::sort(action.atoms.begin(), action.atoms.end());
        StrategyEntry entry{cls.states.front(), std::move(action)};
        for (const StrategyEntry& prev : strat.entries)
            if (prev.class_rep == entry.class_rep)
                throw ValidationError("strategy assigns the class of '" +
                                      m.state_name(entry.class_rep) + "' twice");
        strat.entries.push_back(std::move(entry));
    }
    std::sort(strat.entries.begin(), strat.entries.end(),
              [](const StrategyEntry& a, const StrategyEntry& b) {
                  return a.class_rep < b.class_rep;
              });
    return strat;
}

Strategy Strategy::load_file(const Model& m, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read strategy file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ValidationError("strategy file '" + path + "': " + e.what());
    }
    return from_json(m, doc);
}

bool KhWitness::contains(StateId s) const {
    for (const EquivClass& cls : winning)
        if (state_set_contains(cls.states, s))
            return true;
    return false;
}

// ---------------------------------------------------------------------------
// Know-how fixpoint

namespace {

struct Candidate {
    JointAction action;
    std::vector<Move> trans;
};

// Candidates in canonical (tie-break) order, with transitions precomputed.
// Actions with an empty transition relation are dropped: they are never
// executable on a nonempty class.
std::vector<Candidate> make_candidates(const Model& m, const Group& g, std::size_t cap) {
    std::vector<Candidate> out;
    for (JointAction& j : canonical_actions(m, g, cap)) {
        std::vector<Move> trans = transition(m, j);
        if (trans.empty())
            continue;
        out.push_back(Candidate{std::move(j), std::move(trans)});
    }
    return out;
}

struct FixpointResult {
    Quotient quotient;
    std::vector<int> rank;    // per class, -1 when not winning
    std::vector<int> chosen;  // per class, candidate index or -1
};

FixpointResult kh_fixpoint(const Model& m, const Group& g, const StateSet& goal,
                           const std::vector<Candidate>& candidates) {
    FixpointResult res;
    res.quotient = make_quotient(m, g);
    const std::size_t n = res.quotient.classes.size();
    res.rank.assign(n, -1);
    res.chosen.assign(n, -1);

    for (std::size_t i = 0; i < n; ++i)
        if (state_set_subset(res.quotient.classes[i], goal))
            res.rank[i] = 0;

    // Round r promotes classes to rank r using only classes settled at
    // rank <= r-1, so the rank strictly decreases along every chosen edge.
    for (int round = 1;; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (res.rank[i] != -1)
                continue;
            const StateSet& cls = res.quotient.classes[i];
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (!executable_on(candidates[c].trans, cls))
                    continue;
                bool all_settled = true;
                for (int succ : class_successor_indices(res.quotient, cls, candidates[c].trans)) {
                    if (res.rank[succ] == -1 || res.rank[succ] >= round) {
                        all_settled = false;
                        break;
                    }
                }
                if (all_settled) {
                    res.rank[i] = round;
                    res.chosen[i] = static_cast<int>(c);
                    changed = true;
                    break;
                }
            }
        }
        if (!changed)
            break;
    }
    return res;
}

KhWitness witness_from_fixpoint(const Group& g, const FixpointResult& fp,
                                const std::vector<Candidate>& candidates) {
    KhWitness w;
    w.strategy.group = g;
    for (std::size_t i = 0; i < fp.quotient.classes.size(); ++i) {
        if (fp.rank[i] == -1)
            continue;
        w.winning.push_back(EquivClass{g, fp.quotient.classes[i]});
        w.rank.push_back(fp.rank[i]);
        if (fp.chosen[i] != -1)
            w.strategy.entries.push_back(StrategyEntry{fp.quotient.classes[i].front(),
                                                       candidates[fp.chosen[i]].action});
    }
    return w;
}

}  // namespace

KhWitness kh_winning(const Model& m, const Group& g, const StateSet& goal, std::size_t cap) {
    std::vector<Candidate> candidates = make_candidates(m, g, cap);
    FixpointResult fp = kh_fixpoint(m, g, goal, candidates);
    return witness_from_fixpoint(g, fp, candidates);
}

// ---------------------------------------------------------------------------
// Evaluation

StateSet eval(const Model& m, const Formula& f, std::vector<std::string>* warnings,
              std::size_t cap) {
    const StateSet all = m.all_states();
    std::unordered_map<Formula, StateSet, FormulaHash> truth;
    std::unordered_set<std::string> warned;

    for (const Formula& sub : subformulas(f)) {
        StateSet value;
        switch (sub.kind()) {
            case Conn::Top:
                value = all;
                break;
            case Conn::Atom:
                if (!m.has_proposition(sub.atom_name()) && warnings &&
                    warned.insert(sub.atom_name()).second)
                    warnings->push_back("proposition '" + sub.atom_name() +
                                        "' is not in the valuation; treating it as false");
                value = m.valuation_of(sub.atom_name());
                break;
            case Conn::Not:
                value = state_set_difference(all, truth.at(sub.child()));
                break;
            case Conn::And:
                value = state_set_intersection(truth.at(sub.lhs()), truth.at(sub.rhs()));
                break;
            case Conn::Know: {
                const StateSet& inner = truth.at(sub.child());
                Quotient q = make_quotient(m, sub.group());
                for (const StateSet& cls : q.classes)
                    if (state_set_subset(cls, inner))
                        value = state_set_union(value, cls);
                break;
            }
            case Conn::KnowHow: {
                KhWitness w = kh_winning(m, sub.group(), truth.at(sub.child()), cap);
                for (const EquivClass& cls : w.winning)
                    value = state_set_union(value, cls.states);
                break;
            }
        }
        truth.emplace(sub, std::move(value));
    }
    return truth.at(f);
}

std::optional<Strategy> synthesize_strategy(const Model& m, StateId s, const Group& g,
                                            const Formula& goal, std::size_t cap) {
    StateSet goal_states = eval(m, goal, nullptr, cap);
    std::vector<Candidate> candidates = make_candidates(m, g, cap);
    FixpointResult fp = kh_fixpoint(m, g, goal_states, candidates);

    int start = fp.quotient.class_index[s];
    if (fp.rank[start] == -1)
        return std::nullopt;

    // Keep only the classes reachable from [s]_g under the witness itself.
    std::vector<bool> reachable(fp.quotient.classes.size(), false);
    std::vector<int> stack{start};
    reachable[start] = true;
    while (!stack.empty()) {
        int cls = stack.back();
        stack.pop_back();
        if (fp.chosen[cls] == -1)
            continue;
        const Candidate& cand = candidates[fp.chosen[cls]];
        for (int succ :
             class_successor_indices(fp.quotient, fp.quotient.classes[cls], cand.trans)) {
            if (!reachable[succ]) {
                reachable[succ] = true;
                stack.push_back(succ);
            }
        }
    }

    Strategy strat;
    strat.group = g;
    for (std::size_t i = 0; i < fp.quotient.classes.size(); ++i)
        if (reachable[i] && fp.chosen[i] != -1)
            strat.entries.push_back(StrategyEntry{fp.quotient.classes[i].front(),
                                                  candidates[fp.chosen[i]].action});
    return strat;
}

// ---------------------------------------------------------------------------
// Strategy verification

StrategyVerdict verify_strategy(const Model& m, const Group& g, const Strategy& strategy,
                                StateId start, const StateSet& goal) {
    if (strategy.group != g)
        throw ValidationError("strategy group " + strategy.group.to_string() +
                              " does not match " + g.to_string());
    Quotient q = make_quotient(m, g);

    // Re-check the strategy invariants: a partial function on classes, every
    // action canonical for g and executable on its class.
    std::vector<int> assigned(q.classes.size(), -1);
    std::vector<std::vector<Move>> trans_for(strategy.entries.size());
    for (std::size_t e = 0; e < strategy.entries.size(); ++e) {
        const StrategyEntry& entry = strategy.entries[e];
        if (entry.class_rep < 0 || entry.class_rep >= m.state_count())
            throw ValidationError("strategy entry names a state out of range");
        int cls = q.class_index[entry.class_rep];
        if (assigned[cls] != -1)
            throw ValidationError("strategy assigns the class of '" +
                                  m.state_name(entry.class_rep) + "' twice");
        std::string why;
        if (!joint_action_valid(m, g, entry.action, &why))
            throw ValidationError("strategy action " + entry.action.to_string() +
                                  " is outside the distributed actions of " + g.to_string() +
                                  ": " + why);
        trans_for[e] = transition(m, entry.action);
        if (!executable_on(trans_for[e], q.classes[cls]))
            throw ValidationError("strategy action " + entry.action.to_string() +
                                  " is not executable on the class of '" +
                                  m.state_name(entry.class_rep) + "'");
        assigned[cls] = static_cast<int>(e);
    }

    // Execution graph reachable from the start class. Only assigned classes
    // have out-edges, so every cycle runs through the strategy's domain.
    const int start_cls = q.class_index[start];
    std::vector<std::vector<int>> succs(q.classes.size());
    std::vector<bool> reachable(q.classes.size(), false);
    std::vector<int> stack{start_cls};
    reachable[start_cls] = true;
    while (!stack.empty()) {
        int cls = stack.back();
        stack.pop_back();
        if (assigned[cls] == -1)
            continue;
        succs[cls] = class_successor_indices(q, q.classes[cls], trans_for[assigned[cls]]);
        for (int nxt : succs[cls])
            if (!reachable[nxt]) {
                reachable[nxt] = true;
                stack.push_back(nxt);
            }
    }

    StrategyVerdict verdict;
    for (std::size_t i = 0; i < q.classes.size(); ++i) {
        if (!reachable[i])
            continue;
        EquivClass cls{g, q.classes[i]};
        if (assigned[i] == -1) {
            if (!verdict.bad_leaf && !state_set_subset(q.classes[i], goal))
                verdict.bad_leaf = cls;
            verdict.leaves.push_back(std::move(cls));
        } else {
            verdict.inners.push_back(std::move(cls));
        }
    }

    // Iterative coloring DFS; a back edge yields the pumped cycle.
    enum { White, Grey, Black };
    std::vector<int> color(q.classes.size(), White);
    std::vector<int> path;
    std::optional<std::vector<int>> cycle;

    struct Frame {
        int cls;
        std::size_t next;
    };
    std::vector<Frame> frames{{start_cls, 0}};
    color[start_cls] = Grey;
    path.push_back(start_cls);
    while (!frames.empty() && !cycle) {
        Frame& f = frames.back();
        const std::vector<int>& out = succs[f.cls];
        if (f.next < out.size()) {
            int nxt = out[f.next++];
            if (color[nxt] == Grey) {
                auto at = std::find(path.begin(), path.end(), nxt);
                cycle = std::vector<int>(at, path.end());
            } else if (color[nxt] == White) {
                color[nxt] = Grey;
                path.push_back(nxt);
                frames.push_back(Frame{nxt, 0});
            }
        } else {
            color[f.cls] = Black;
            path.pop_back();
            frames.pop_back();
        }
    }

    verdict.terminating = !cycle.has_value();
    if (cycle) {
        std::vector<EquivClass> witness;
        for (int cls : *cycle)
            witness.push_back(EquivClass{g, q.classes[cls]});
        verdict.cycle_witness = std::move(witness);
    }
    return verdict;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

bool kh_bruteforce(const Model& m, StateId s, const Group& g, const Formula& f,
                   std::size_t max_classes, std::size_t max_actions) {
    Quotient q = make_quotient(m, g);
    if (q.classes.size() > max_classes)
        throw LimitError("oracle guard: quotient has " + std::to_string(q.classes.size()) +
                         " classes, cap is " + std::to_string(max_classes));
    std::vector<JointAction> actions = canonical_actions(m, g);
    if (actions.size() > max_actions)
        throw LimitError("oracle guard: " + std::to_string(actions.size()) +
                         " joint actions, cap is " + std::to_string(max_actions));

    StateSet goal = eval(m, f);

    // Per class, the actions executable on it; assigning anything else can
    // never yield a strategy.
    std::vector<std::vector<const JointAction*>> choices(q.classes.size());
    for (const JointAction& j : actions) {
        std::vector<Move> trans = transition(m, j);
        if (trans.empty())
            continue;
        for (std::size_t i = 0; i < q.classes.size(); ++i)
            if (executable_on(trans, q.classes[i]))
                choices[i].push_back(&j);
    }

    // Odometer over (unassigned + each executable action) per class.
    std::vector<std::size_t> pick(q.classes.size(), 0);
    for (;;) {
        Strategy strat;
        strat.group = g;
        for (std::size_t i = 0; i < q.classes.size(); ++i)
            if (pick[i] > 0)
                strat.entries.push_back(
                    StrategyEntry{q.classes[i].front(), *choices[i][pick[i] - 1]});
        if (verify_strategy(m, g, strat, s, goal).success())
            return true;

        std::size_t k = 0;
        for (; k < pick.size(); ++k) {
            if (pick[k] < choices[k].size()) {
                ++pick[k];
                std::fill(pick.begin(), pick.begin() + k, 0);
                break;
            }
        }
        if (k == pick.size())
            return false;
    }
}

}  // namespace dkh
