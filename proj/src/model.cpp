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

#include "dkh/model.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

namespace dkh {

using nlohmann::json;

// ---------------------------------------------------------------------------
// StateSet helpers

bool state_set_contains(const StateSet& set, StateId s) {
    return std::binary_search(set.begin(), set.end(), s);
}

StateSet state_set_union(const StateSet& a, const StateSet& b) {
    StateSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

StateSet state_set_intersection(const StateSet& a, const StateSet& b) {
    StateSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

StateSet state_set_difference(const StateSet& a, const StateSet& b) {
    StateSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool state_set_subset(const StateSet& inner, const StateSet& outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

// ---------------------------------------------------------------------------
// Model

Model::Model(int agent_count, std::vector<std::string> state_names,
             const std::map<int, std::vector<StateSet>>& epistemic,
             std::vector<AtomicAction> atoms, std::map<std::string, StateSet> valuation)
    : agent_count_(agent_count),
      state_names_(std::move(state_names)),
      atoms_(std::move(atoms)),
      valuation_(std::move(valuation)) {
    if (agent_count_ < 1)
        throw ValidationError("agent count must be at least 1");
    const int n = state_count();
    if (n == 0)
        throw ValidationError("model needs at least one state");
    for (int s = 0; s < n; ++s) {
        if (state_names_[s].empty())
            throw ValidationError("empty state name");
        if (!state_index_.emplace(state_names_[s], s).second)
            throw ValidationError("duplicate state name '" + state_names_[s] + "'");
    }

    // Partitions: listed blocks first, then singletons for uncovered states.
    block_of_.assign(agent_count_, std::vector<int>(n, -1));
    for (const auto& [agent, blocks] : epistemic) {
        if (agent < 0 || agent >= agent_count_)
            throw ValidationError("agent index " + std::to_string(agent) + " out of range");
        auto& assignment = block_of_[agent];
        int next_block = 0;
        for (const StateSet& block : blocks) {
            if (block.empty())
                throw ValidationError("empty epistemic block for agent " + std::to_string(agent));
            for (StateId s : block) {
                if (s < 0 || s >= n)
                    throw ValidationError("epistemic block state out of range");
                if (assignment[s] != -1)
                    throw ValidationError("overlapping blocks for agent " + std::to_string(agent) +
                                          " at state '" + state_names_[s] + "'");
                assignment[s] = next_block;
            }
            ++next_block;
        }
    }
    for (auto& assignment : block_of_) {
        int next_block = 0;
        for (int s = 0; s < n; ++s)
            next_block = std::max(next_block, assignment[s] + 1);
        for (int s = 0; s < n; ++s)
            if (assignment[s] == -1)
                assignment[s] = next_block++;
    }

    for (auto& atom : atoms_) {
        if (atom.name.empty())
            throw ValidationError("empty action name");
        if (atom.owner.is_empty())
            throw ValidationError("empty owner group for action '" + atom.name + "'");
        for (int agent : atom.owner.members())
            if (agent >= agent_count_)
                throw ValidationError("owner agent index " + std::to_string(agent) +
                                      " out of range for action '" + atom.name + "'");
        for (const Move& mv : atom.moves)
            if (mv.first < 0 || mv.first >= n || mv.second < 0 || mv.second >= n)
                throw ValidationError("move endpoint out of range for action '" + atom.name + "'");
        std::sort(atom.moves.begin(), atom.moves.end());
        atom.moves.erase(std::unique(atom.moves.begin(), atom.moves.end()), atom.moves.end());
    }
    for (int i = 0; i < static_cast<int>(atoms_.size()); ++i)
        if (!atom_index_.emplace(atoms_[i].name, i).second)
            throw ValidationError("duplicate action name '" + atoms_[i].name + "'");

    for (auto& [prop, states] : valuation_) {
        if (prop.empty())
            throw ValidationError("empty proposition name");
        std::sort(states.begin(), states.end());
        states.erase(std::unique(states.begin(), states.end()), states.end());
        for (StateId s : states)
            if (s < 0 || s >= n)
                throw ValidationError("valuation of '" + prop + "' names a state out of range");
    }
}

StateId Model::state_index(const std::string& name) const {
    auto it = state_index_.find(name);
    if (it == state_index_.end())
        throw ValidationError("unknown state name '" + name + "'");
    return it->second;
}

StateSet Model::all_states() const {
    StateSet all(state_names_.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = static_cast<StateId>(i);
    return all;
}

int Model::atom_index(const std::string& name) const {
    auto it = atom_index_.find(name);
    return it == atom_index_.end() ? -1 : it->second;
}

bool Model::has_proposition(const std::string& prop) const {
    return valuation_.count(prop) != 0;
}

const StateSet& Model::valuation_of(const std::string& prop) const {
    static const StateSet empty;
    auto it = valuation_.find(prop);
    return it == valuation_.end() ? empty : it->second;
}

void Model::require_valid_group(const Group& g) const {
    if (!g.is_empty() && g.members().back() >= agent_count_)
        throw ValidationError("agent index " + std::to_string(g.members().back()) +
                              " out of range for a model with " + std::to_string(agent_count_) +
                              " agents");
}

bool Model::same_class(const Group& g, StateId s, StateId t) const {
    for (int agent : g.members())
        if (block_of_[agent][s] != block_of_[agent][t])
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// JSON ingestion / emission

namespace {

StateSet names_to_states(const json& arr,
                         const std::unordered_map<std::string, StateId>& index) {
    if (!arr.is_array())
        throw ValidationError("expected an array of state names");
    StateSet out;
    for (const auto& item : arr) {
        if (!item.is_string())
            throw ValidationError("expected a state name string");
        auto it = index.find(item.get<std::string>());
        if (it == index.end())
            throw ValidationError("unknown state name '" + item.get<std::string>() + "'");
        out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Model Model::from_json(const json& doc) {
    if (!doc.is_object())
        throw ValidationError("model document must be an object");
    if (!doc.contains("agents") || !doc["agents"].is_number_integer())
        throw ValidationError("model document needs an integer 'agents' field");
    if (!doc.contains("states") || !doc["states"].is_array())
        throw ValidationError("model document needs a 'states' array");

    int agents = doc["agents"].get<int>();
    std::vector<std::string> names;
    std::unordered_map<std::string, StateId> index;
    for (const auto& item : doc["states"]) {
        if (!item.is_string())
            throw ValidationError("state names must be strings");
        names.push_back(item.get<std::string>());
        index.emplace(names.back(), static_cast<StateId>(names.size() - 1));
    }

    std::map<std::string, StateSet> valuation;
    if (doc.contains("valuation")) {
        if (!doc["valuation"].is_object())
            throw ValidationError("'valuation' must map propositions to state arrays");
        for (const auto& [prop, arr] : doc["valuation"].items())
            valuation[prop] = names_to_states(arr, index);
    }

    std::map<int, std::vector<StateSet>> epistemic;
    if (doc.contains("epistemic")) {
        if (!doc["epistemic"].is_object())
            throw ValidationError("'epistemic' must map agent indices to block lists");
        for (const auto& [key, blocks] : doc["epistemic"].items()) {
            int agent;
            try {
                std::size_t used = 0;
                agent = std::stoi(key, &used);
                if (used != key.size())
                    throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw ValidationError("epistemic key '" + key + "' is not an agent index");
            }
            if (!blocks.is_array())
                throw ValidationError("epistemic blocks for agent " + key + " must be an array");
            std::vector<StateSet> parsed;
            for (const auto& block : blocks)
                parsed.push_back(names_to_states(block, index));
            epistemic[agent] = std::move(parsed);
        }
    }

    std::vector<AtomicAction> atoms;
    if (doc.contains("actions")) {
        for (const auto& entry : doc["actions"]) {
            AtomicAction atom;
            if (!entry.contains("name") || !entry["name"].is_string())
                throw ValidationError("action entry needs a 'name' string");
            atom.name = entry["name"].get<std::string>();
            if (!entry.contains("owner") || !entry["owner"].is_array())
                throw ValidationError("action '" + atom.name + "' needs an 'owner' array");
            std::vector<int> owner;
            for (const auto& a : entry["owner"])
                owner.push_back(a.get<int>());
            if (owner.empty())
                throw ValidationError("empty owner group for action '" + atom.name + "'");
            try {
                atom.owner = Group(std::move(owner));
            } catch (const std::invalid_argument& e) {
                throw ValidationError(std::string(e.what()) + " in owner of action '" + atom.name +
                                      "'");
            }
            if (entry.contains("moves")) {
                for (const auto& mv : entry["moves"]) {
                    if (!mv.is_array() || mv.size() != 2)
                        throw ValidationError("moves must be [from, to] pairs");
                    auto from = index.find(mv[0].get<std::string>());
                    auto to = index.find(mv[1].get<std::string>());
                    if (from == index.end() || to == index.end())
                        throw ValidationError("unknown state name in moves of action '" +
                                              atom.name + "'");
                    atom.moves.emplace_back(from->second, to->second);
                }
            }
            atoms.push_back(std::move(atom));
        }
    }

    return Model(agents, std::move(names), epistemic, std::move(atoms), std::move(valuation));
}

Model Model::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read model file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ValidationError("model file '" + path + "': " + e.what());
    }
    return from_json(doc);
}

json Model::to_json() const {
    json doc;
    doc["agents"] = agent_count_;
    doc["states"] = state_names_;

    json valuation = json::object();
    for (const auto& [prop, states] : valuation_) {
        json arr = json::array();
        for (StateId s : states)
            arr.push_back(state_names_[s]);
        valuation[prop] = std::move(arr);
    }
    doc["valuation"] = std::move(valuation);

    json epistemic = json::object();
    for (int agent = 0; agent < agent_count_; ++agent) {
        std::map<int, StateSet> blocks;
        for (int s = 0; s < state_count(); ++s)
            blocks[block_of_[agent][s]].push_back(s);
        json arr = json::array();
        bool all_singletons = true;
        for (const auto& [_, block] : blocks) {
            if (block.size() > 1)
                all_singletons = false;
            json b = json::array();
            for (StateId s : block)
                b.push_back(state_names_[s]);
            arr.push_back(std::move(b));
        }
        if (!all_singletons)
            epistemic[std::to_string(agent)] = std::move(arr);
    }
    doc["epistemic"] = std::move(epistemic);

    json actions = json::array();
    for (const AtomicAction& atom : atoms_) {
        json entry;
        entry["name"] = atom.name;
        entry["owner"] = atom.owner.members();
        json moves = json::array();
        for (const Move& mv : atom.moves)
            moves.push_back(json::array({state_names_[mv.first], state_names_[mv.second]}));
        entry["moves"] = std::move(moves);
        actions.push_back(std::move(entry));
    }
    doc["actions"] = std::move(actions);
    return doc;
}

Model validate_model(const std::string& document_text) {
    json doc;
    try {
        doc = json::parse(document_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("model document: ") + e.what());
    }
    return Model::from_json(doc);
}

// ---------------------------------------------------------------------------
// Distributed indistinguishability

EquivClass class_of(const Model& m, const Group& g, StateId s) {
    m.require_valid_group(g);
    EquivClass cls;
    cls.group = g;
    for (int t = 0; t < m.state_count(); ++t)
        if (m.same_class(g, s, t))
            cls.states.push_back(t);
    return cls;
}

Quotient make_quotient(const Model& m, const Group& g) {
    m.require_valid_group(g);
    Quotient q;
    q.group = g;
    q.class_index.assign(m.state_count(), -1);
    // Group states by their tuple of per-agent block ids.
    std::map<std::vector<int>, int> by_key;
    for (int s = 0; s < m.state_count(); ++s) {
        std::vector<int> key;
        key.reserve(g.size());
        for (int agent : g.members())
            key.push_back(m.epistemic_block(agent, s));
        auto [it, inserted] = by_key.try_emplace(std::move(key), -1);
        if (inserted) {
            it->second = static_cast<int>(q.classes.size());
            q.classes.emplace_back();
        }
        q.class_index[s] = it->second;
        q.classes[it->second].push_back(s);
    }
    // Classes are created in order of first occurrence while scanning states
    // ascending, so they are already ordered by least member.
    return q;
}

std::vector<EquivClass> quotient(const Model& m, const Group& g) {
    Quotient q = make_quotient(m, g);
    std::vector<EquivClass> out;
    out.reserve(q.classes.size());
    for (StateSet& states : q.classes)
        out.push_back(EquivClass{g, std::move(states)});
    return out;
}

}  // namespace dkh
