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

#include "dkh/actions.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace dkh {

// ---------------------------------------------------------------------------
// NestedAction

NestedAction NestedAction::atom(std::string name) {
    NestedAction a;
    a.name_ = std::move(name);
    return a;
}

NestedAction NestedAction::tuple(std::vector<NestedAction> components) {
    if (components.size() < 2)
        throw std::invalid_argument("tuple actions need at least two components");
    NestedAction a;
    a.components_ = std::move(components);
    return a;
}

std::size_t NestedAction::leaf_count() const {
    if (is_atom())
        return 1;
    std::size_t n = 0;
    for (const NestedAction& c : components_)
        n += c.leaf_count();
    return n;
}

std::string NestedAction::to_string() const {
    if (is_atom())
        return name_;
    std::string out = "<";
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i > 0)
            out += ',';
        out += components_[i].to_string();
    }
    out += '>';
    return out;
}

bool NestedAction::operator==(const NestedAction& other) const {
    return name_ == other.name_ && components_ == other.components_;
}

bool NestedAction::operator<(const NestedAction& other) const {
    if (is_atom() != other.is_atom())
        return is_atom();  // atoms before tuples
    if (is_atom())
        return name_ < other.name_;
    return std::lexicographical_compare(components_.begin(), components_.end(),
                                        other.components_.begin(), other.components_.end());
}

std::string JointAction::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0)
            out += ',';
        out += atoms[i];
    }
    out += '}';
    return out;
}

// ---------------------------------------------------------------------------
// Closure A*_G

namespace {

// Enumerates the non-trivial partial partitions of `agents` (>= 2 disjoint
// nonempty blocks covering some subset). Agents are consumed in ascending
// order and each block is numbered by its first member, so the emitted
// blocks are already in the least-agent order.
void enumerate_partial_partitions(const std::vector<int>& agents, std::size_t pos,
                                  std::vector<std::vector<int>>& blocks,
                                  const std::function<void(const std::vector<std::vector<int>>&)>& emit) {
    if (pos == agents.size()) {
        if (blocks.size() >= 2)
            emit(blocks);
        return;
    }
    int agent = agents[pos];
    // Leave this agent idle.
    enumerate_partial_partitions(agents, pos + 1, blocks, emit);
    // Put it into an existing block or open a new one.
    for (std::size_t b = 0; b <= blocks.size(); ++b) {
        if (b == blocks.size())
            blocks.emplace_back();
        blocks[b].push_back(agent);
        enumerate_partial_partitions(agents, pos + 1, blocks, emit);
        blocks[b].pop_back();
        if (blocks[b].empty())
            blocks.pop_back();
    }
}

class ClosureBuilder {
public:
    ClosureBuilder(const Model& m, std::size_t cap) : model_(m), cap_(cap) {}

    const std::set<NestedAction>& closure(const Group& g) {
        auto it = memo_.find(g);
        if (it != memo_.end())
            return it->second;

        std::set<NestedAction> result;
        for (const AtomicAction& atom : model_.atoms())
            if (atom.owner.subset_of(g))
                result.insert(NestedAction::atom(atom.name));

        if (g.size() >= 2) {
            std::vector<std::vector<int>> blocks;
            enumerate_partial_partitions(
                g.members(), 0, blocks, [&](const std::vector<std::vector<int>>& partition) {
                    std::vector<const std::set<NestedAction>*> pools;
                    pools.reserve(partition.size());
                    for (const std::vector<int>& block : partition) {
                        // Blocks are strictly smaller than g, so this recursion
                        // bottoms out.
                        const auto& sub = closure(Group(block));
                        if (sub.empty())
                            return;  // no action for this block, no tuples
                        pools.push_back(&sub);
                    }
                    emit_tuples(pools, result);
                });
        }

        check_cap(result.size());
        return memo_.emplace(g, std::move(result)).first->second;
    }

private:
    void emit_tuples(const std::vector<const std::set<NestedAction>*>& pools,
                     std::set<NestedAction>& out) {
        std::vector<NestedAction> current;
        current.reserve(pools.size());
        emit_rec(pools, 0, current, out);
    }

    void emit_rec(const std::vector<const std::set<NestedAction>*>& pools, std::size_t k,
                  std::vector<NestedAction>& current, std::set<NestedAction>& out) {
        if (k == pools.size()) {
            out.insert(NestedAction::tuple(current));
            check_cap(out.size());
            return;
        }
        for (const NestedAction& d : *pools[k]) {
            current.push_back(d);
            emit_rec(pools, k + 1, current, out);
            current.pop_back();
        }
    }

    void check_cap(std::size_t size) const {
        if (size > cap_)
            throw LimitError("action closure exceeds the enumeration cap of " +
                             std::to_string(cap_));
    }

    const Model& model_;
    std::size_t cap_;
    std::map<Group, std::set<NestedAction>> memo_;
};

}  // namespace

std::vector<NestedAction> closure_nested(const Model& m, const Group& g, std::size_t cap) {
    m.require_valid_group(g);
    ClosureBuilder builder(m, cap);
    const std::set<NestedAction>& result = builder.closure(g);
    std::vector<NestedAction> out(result.begin(), result.end());
    std::sort(out.begin(), out.end(), [](const NestedAction& a, const NestedAction& b) {
        if (a.leaf_count() != b.leaf_count())
            return a.leaf_count() < b.leaf_count();
        return a.to_string() < b.to_string();
    });
    return out;
}

JointAction flatten(const NestedAction& d) {
    JointAction j;
    std::vector<const NestedAction*> stack{&d};
    while (!stack.empty()) {
        const NestedAction* cur = stack.back();
        stack.pop_back();
        if (cur->is_atom()) {
            j.atoms.push_back(cur->name());
        } else {
            for (const NestedAction& c : cur->components())
                stack.push_back(&c);
        }
    }
    std::sort(j.atoms.begin(), j.atoms.end());
    j.atoms.erase(std::unique(j.atoms.begin(), j.atoms.end()), j.atoms.end());
    return j;
}

// ---------------------------------------------------------------------------
// Canonical flattened enumeration

namespace {

void enumerate_joint(const std::vector<const AtomicAction*>& pool, std::size_t pos,
                     std::vector<std::string>& chosen, std::vector<const Group*>& owners,
                     std::size_t cap, std::vector<JointAction>& out) {
    if (!chosen.empty()) {
        out.push_back(JointAction{chosen});
        if (out.size() > cap)
            throw LimitError("joint action enumeration exceeds the cap of " + std::to_string(cap));
    }
    for (std::size_t i = pos; i < pool.size(); ++i) {
        const AtomicAction* atom = pool[i];
        bool clash = false;
        for (const Group* owner : owners)
            if (!owner->disjoint_with(atom->owner)) {
                clash = true;
                break;
            }
        if (clash)
            continue;
        chosen.push_back(atom->name);
        owners.push_back(&atom->owner);
        enumerate_joint(pool, i + 1, chosen, owners, cap, out);
        owners.pop_back();
        chosen.pop_back();
    }
}

}  // namespace

std::vector<JointAction> canonical_actions(const Model& m, const Group& g, std::size_t cap) {
    m.require_valid_group(g);
    std::vector<const AtomicAction*> pool;
    for (const AtomicAction& atom : m.atoms())
        if (atom.owner.subset_of(g))
            pool.push_back(&atom);
    std::sort(pool.begin(), pool.end(),
              [](const AtomicAction* a, const AtomicAction* b) { return a->name < b->name; });

    std::vector<JointAction> out;
    std::vector<std::string> chosen;
    std::vector<const Group*> owners;
    enumerate_joint(pool, 0, chosen, owners, cap, out);
    std::sort(out.begin(), out.end());
    return out;
}

bool joint_action_valid(const Model& m, const Group& g, const JointAction& j, std::string* why) {
    auto fail = [&](const std::string& reason) {
        if (why)
            *why = reason;
        return false;
    };
    if (j.atoms.empty())
        return fail("joint action is empty");
    if (!std::is_sorted(j.atoms.begin(), j.atoms.end()) ||
        std::adjacent_find(j.atoms.begin(), j.atoms.end()) != j.atoms.end())
        return fail("joint action atoms must be sorted and distinct");
    std::vector<const Group*> owners;
    for (const std::string& name : j.atoms) {
        int idx = m.atom_index(name);
        if (idx < 0)
            return fail("unknown action '" + name + "'");
        const Group& owner = m.atoms()[idx].owner;
        if (!owner.subset_of(g))
            return fail("action '" + name + "' is not available to group " + g.to_string());
        for (const Group* prev : owners)
            if (!prev->disjoint_with(owner))
                return fail("owners of '" + name + "' overlap another member's owners");
        owners.push_back(&owner);
    }
    return true;
}

std::vector<Move> transition(const Model& m, const JointAction& j) {
    if (j.atoms.empty())
        throw std::invalid_argument("transition of an empty joint action");
    std::vector<Move> acc;
    bool first = true;
    for (const std::string& name : j.atoms) {
        int idx = m.atom_index(name);
        if (idx < 0)
            throw ValidationError("unknown action '" + name + "'");
        const std::vector<Move>& moves = m.atoms()[idx].moves;
        if (first) {
            acc = moves;
            first = false;
        } else {
            std::vector<Move> next;
            std::set_intersection(acc.begin(), acc.end(), moves.begin(), moves.end(),
                                  std::back_inserter(next));
            acc = std::move(next);
        }
        if (acc.empty())
            break;
    }
    return acc;
}

bool executable_on(const std::vector<Move>& trans, const StateSet& x) {
    for (StateId s : x) {
        auto it = std::lower_bound(trans.begin(), trans.end(), Move{s, 0});
        if (it == trans.end() || it->first != s)
            return false;
    }
    return true;
}

bool executable_on(const Model& m, const JointAction& j, const StateSet& x) {
    if (x.empty())
        throw std::invalid_argument("executability is defined on nonempty state sets");
    return executable_on(transition(m, j), x);
}

std::vector<int> class_successor_indices(const Quotient& q, const StateSet& x,
                                         const std::vector<Move>& trans) {
    std::set<int> seen;
    for (const Move& mv : trans)
        if (state_set_contains(x, mv.first))
            seen.insert(q.class_index[mv.second]);
    return std::vector<int>(seen.begin(), seen.end());
}

std::vector<EquivClass> class_successors(const Model& m, const Group& g, const EquivClass& x,
                                         const JointAction& j) {
    Quotient q = make_quotient(m, g);
    std::vector<EquivClass> out;
    for (int idx : class_successor_indices(q, x.states, transition(m, j)))
        out.push_back(EquivClass{g, q.classes[idx]});
    return out;
}

}  // namespace dkh
