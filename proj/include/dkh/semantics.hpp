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

#ifndef DKH_SEMANTICS_HPP
#define DKH_SEMANTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dkh/actions.hpp"
#include "dkh/formula.hpp"
#include "dkh/model.hpp"

namespace dkh {

/// A uniform partial function from ~_group classes to joint actions. A class
/// is identified by its least state id; the file format uses the
/// lexicographically least state name instead.
struct StrategyEntry {
    StateId class_rep;
    JointAction action;
};

struct Strategy {
    Group group;
    std::vector<StrategyEntry> entries;  // sorted by class_rep

    bool empty() const { return entries.empty(); }
    const JointAction* action_for(StateId class_rep) const;

    nlohmann::json to_json(const Model& m) const;
    static Strategy from_json(const Model& m, const nlohmann::json& doc);
    static Strategy load_file(const Model& m, const std::string& path);
};

/// Outcome of executing a strategy from a start class: the reachable
/// execution graph's leaves and inner nodes, plus termination evidence.
struct StrategyVerdict {
    bool terminating = false;
    std::vector<EquivClass> leaves;
    std::vector<EquivClass> inners;
    std::optional<EquivClass> bad_leaf;  // first leaf not inside the goal
    std::optional<std::vector<EquivClass>> cycle_witness;

    bool success() const { return terminating && !bad_leaf.has_value(); }
};

/// Winning region of the know-how fixpoint, with the rank certificate and
/// the synthesized strategy. rank[i] belongs to winning[i]; rank 0 classes
/// are goal classes and carry no assignment.
struct KhWitness {
    std::vector<EquivClass> winning;
    std::vector<int> rank;
    Strategy strategy;

    bool contains(StateId s) const;
};

/// Truth set of f, computed bottom-up. Unknown propositions denote the
/// empty set; when `warnings` is non-null a note is appended per unknown
/// name. Throws LimitError when an action enumeration blows its cap.
StateSet eval(const Model& m, const Formula& f, std::vector<std::string>* warnings = nullptr,
              std::size_t cap = kDefaultActionCap);

/// Least fixpoint over the ~_g quotient: a class wins at rank 0 when it sits
/// inside the goal, and at rank r+1 when some executable joint action sends
/// it only to classes already won at rank <= r. The strategy assigns to each
/// non-goal winning class the first such action in canonical order.
KhWitness kh_winning(const Model& m, const Group& g, const StateSet& goal,
                     std::size_t cap = kDefaultActionCap);

/// Witness strategy for Kh_g(goal) at s, restricted to the classes reachable
/// from [s]_g under it; nullopt when [s]_g is not winning.
std::optional<Strategy> synthesize_strategy(const Model& m, StateId s, const Group& g,
                                            const Formula& goal,
                                            std::size_t cap = kDefaultActionCap);

/// Checks the strategy invariants (throws ValidationError on violation),
/// then analyzes the execution graph reachable from [s]_g: terminating iff
/// no cycle through assigned classes is reachable, leaves are the reachable
/// unassigned classes.
StrategyVerdict verify_strategy(const Model& m, const Group& g, const Strategy& strategy,
                                StateId start, const StateSet& goal);

/// Independent oracle for the Kh clause: enumerates every partial assignment
/// of executable actions to classes and asks verify_strategy. Guarded to
/// small instances (quotient, candidate-action counts); throws LimitError
/// past the guard.
bool kh_bruteforce(const Model& m, StateId s, const Group& g, const Formula& f,
                   std::size_t max_classes = 6, std::size_t max_actions = 8);

}  // namespace dkh

#endif  // DKH_SEMANTICS_HPP
