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

#ifndef DKH_MODEL_HPP
#define DKH_MODEL_HPP

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dkh/formula.hpp"

namespace dkh {

/// A model document violated an invariant (overlapping blocks, unknown
/// state, empty owner group, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using StateId = int;

/// Sorted, duplicate-free set of state indices.
using StateSet = std::vector<StateId>;

bool state_set_contains(const StateSet& set, StateId s);
StateSet state_set_union(const StateSet& a, const StateSet& b);
StateSet state_set_intersection(const StateSet& a, const StateSet& b);
StateSet state_set_difference(const StateSet& a, const StateSet& b);
bool state_set_subset(const StateSet& inner, const StateSet& outer);

using Move = std::pair<StateId, StateId>;

/// An atomic group action: owned by one nonempty group, with a (possibly
/// nondeterministic, possibly empty) transition relation.
struct AtomicAction {
    std::string name;
    Group owner;
    std::vector<Move> moves;  // sorted, duplicate-free
};

/// One block of the ~_group partition.
struct EquivClass {
    Group group;
    StateSet states;

    bool operator==(const EquivClass& other) const {
        return group == other.group && states == other.states;
    }
};

/// A finite DKH model: states, one equivalence partition per agent, atomic
/// group actions, and a valuation. Immutable after construction; all
/// invariants hold once the constructor returns.
class Model {
public:
    /// Validates and normalizes. `epistemic[agent]` lists blocks of state
    /// ids; states missing from an agent's listing become singleton blocks,
    /// and agents beyond the listing get the all-singletons partition.
    Model(int agent_count, std::vector<std::string> state_names,
          const std::map<int, std::vector<StateSet>>& epistemic,
          std::vector<AtomicAction> atoms,
          std::map<std::string, StateSet> valuation);

    /// Parses and validates the model file format.
    static Model from_json(const nlohmann::json& doc);
    static Model load_file(const std::string& path);
    nlohmann::json to_json() const;

    int agent_count() const { return agent_count_; }
    int state_count() const { return static_cast<int>(state_names_.size()); }
    const std::vector<std::string>& state_names() const { return state_names_; }
    const std::string& state_name(StateId s) const { return state_names_[s]; }

    /// Throws ValidationError for unknown names.
    StateId state_index(const std::string& name) const;

    StateSet all_states() const;

    const std::vector<AtomicAction>& atoms() const { return atoms_; }
    /// -1 when no atom has that name.
    int atom_index(const std::string& name) const;

    bool has_proposition(const std::string& prop) const;
    /// Unknown propositions denote the empty set.
    const StateSet& valuation_of(const std::string& prop) const;
    const std::map<std::string, StateSet>& valuation() const { return valuation_; }

    /// Block id of state s under agent's partition.
    int epistemic_block(int agent, StateId s) const { return block_of_[agent][s]; }

    bool same_class(const Group& g, StateId s, StateId t) const;

    /// Throws ValidationError when g names an agent this model does not have.
    void require_valid_group(const Group& g) const;

private:
    int agent_count_ = 0;
    std::vector<std::string> state_names_;
    std::unordered_map<std::string, StateId> state_index_;
    std::vector<std::vector<int>> block_of_;  // [agent][state] -> block id
    std::vector<AtomicAction> atoms_;
    std::unordered_map<std::string, int> atom_index_;
    std::map<std::string, StateSet> valuation_;
};

/// Parses a raw model document (JSON text) and establishes all Model
/// invariants. Throws ValidationError / ParseError.
Model validate_model(const std::string& document_text);

/// [s]_g = { t | s ~_i t for every i in g }. For the empty group this is S.
EquivClass class_of(const Model& m, const Group& g, StateId s);

/// The ~_g quotient: pairwise-disjoint classes covering S, ordered by their
/// least state id.
std::vector<EquivClass> quotient(const Model& m, const Group& g);

/// Quotient with a state->class index, the workhorse form used by the
/// semantics.
struct Quotient {
    Group group;
    std::vector<StateSet> classes;
    std::vector<int> class_index;  // state -> position in classes

    const StateSet& class_of(StateId s) const { return classes[class_index[s]]; }
};

Quotient make_quotient(const Model& m, const Group& g);

}  // namespace dkh

#endif  // DKH_MODEL_HPP
