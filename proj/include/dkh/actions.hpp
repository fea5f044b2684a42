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

#ifndef DKH_ACTIONS_HPP
#define DKH_ACTIONS_HPP

#include <string>
#include <vector>

#include "dkh/model.hpp"

namespace dkh {

/// Cap on |A*_G| per group before closure enumeration bails out.
inline constexpr std::size_t kDefaultActionCap = 10000;

/// A distributed action in the nested form: an atomic action name, or a
/// tuple of >= 2 sub-actions whose blocks are ordered by least agent index.
class NestedAction {
public:
    static NestedAction atom(std::string name);
    static NestedAction tuple(std::vector<NestedAction> components);

    bool is_atom() const { return components_.empty(); }
    const std::string& name() const { return name_; }
    const std::vector<NestedAction>& components() const { return components_; }

    std::size_t leaf_count() const;
    std::string to_string() const;  // "a", "<a,c>", "<<a,c>,e>"

    bool operator==(const NestedAction& other) const;
    bool operator<(const NestedAction& other) const;

private:
    std::string name_;                        // set iff atom
    std::vector<NestedAction> components_;    // set iff tuple
};

/// The canonical flattened form of a distributed action: a nonempty set of
/// atomic action names with pairwise-disjoint owner groups. Ordered by
/// (cardinality, lexicographic names), the tie-break order used everywhere
/// actions are enumerated.
struct JointAction {
    std::vector<std::string> atoms;  // sorted, duplicate-free

    std::string to_string() const;  // "{a,c}"

    bool operator==(const JointAction& other) const { return atoms == other.atoms; }
    bool operator!=(const JointAction& other) const { return atoms != other.atoms; }
    bool operator<(const JointAction& other) const {
        if (atoms.size() != other.atoms.size())
            return atoms.size() < other.atoms.size();
        return atoms < other.atoms;
    }
};

/// The exact recursive closure A*_g: atoms with owner inside g plus tuples
/// over the non-trivial partial partitions of g. Sorted by (leaf count,
/// printed form). Throws LimitError past `cap` entries.
std::vector<NestedAction> closure_nested(const Model& m, const Group& g,
                                         std::size_t cap = kDefaultActionCap);

/// Leaf atoms of a nested action.
JointAction flatten(const NestedAction& d);

/// All nonempty sets of atoms with pairwise-disjoint owners contained in g,
/// enumerated directly (not via the nested closure). Sorted canonically.
std::vector<JointAction> canonical_actions(const Model& m, const Group& g,
                                           std::size_t cap = kDefaultActionCap);

/// Checks that j names existing atoms whose owners are inside g and pairwise
/// disjoint. On failure returns false and, if `why` is non-null, stores the
/// reason.
bool joint_action_valid(const Model& m, const Group& g, const JointAction& j,
                        std::string* why = nullptr);

/// Intersection of the member atoms' move relations; may be empty.
std::vector<Move> transition(const Model& m, const JointAction& j);

/// True iff every state of x has at least one successor. x must be nonempty.
bool executable_on(const Model& m, const JointAction& j, const StateSet& x);
bool executable_on(const std::vector<Move>& trans, const StateSet& x);

/// All g-classes Y with some s in x, t in Y, (s,t) in the transition of j.
std::vector<EquivClass> class_successors(const Model& m, const Group& g, const EquivClass& x,
                                         const JointAction& j);

/// Quotient-indexed form used by the fixpoint and the verifier.
std::vector<int> class_successor_indices(const Quotient& q, const StateSet& x,
                                         const std::vector<Move>& trans);

}  // namespace dkh

#endif  // DKH_ACTIONS_HPP
