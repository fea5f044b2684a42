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

#ifndef DKH_FORMULA_HPP
#define DKH_FORMULA_HPP

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dkh {

/// Error raised by the formula / derivation parsers. `position` is a byte
/// offset into the input text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// An enumeration exceeded its size guard (combinatorial blow-up) or an
/// oracle precondition failed.
class LimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A set of agent indices, kept sorted and duplicate-free. The empty group
/// is a legal value everywhere.
class Group {
public:
    Group() = default;
    explicit Group(std::vector<int> members);

    static Group empty() { return Group(); }

    bool is_empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    const std::vector<int>& members() const { return members_; }

    bool contains(int agent) const;
    bool subset_of(const Group& other) const;
    bool disjoint_with(const Group& other) const;
    Group union_with(const Group& other) const;

    // Least agent index; groups of pairwise-disjoint agents are strictly
    // ordered by this key.
    int min_agent() const;

    bool operator==(const Group& other) const { return members_ == other.members_; }
    bool operator!=(const Group& other) const { return members_ != other.members_; }
    bool operator<(const Group& other) const { return members_ < other.members_; }

    std::string to_string() const;  // "{0,1}", "{}" for the empty group

private:
    std::vector<int> members_;
};

enum class Conn {
    Top,
    Atom,
    Not,
    And,
    Know,     // K_G
    KnowHow,  // Kh_G
};

/// Immutable formula tree with shared subterms. Structural equality and
/// hashing; copies are cheap. bot, | and -> are surface sugar and are
/// desugared on construction, so every Formula is built from the six core
/// connectives only.
class Formula {
public:
    Formula() : Formula(top()) {}

    static Formula top();
    static Formula atom(std::string name);
    static Formula negation(Formula f);
    static Formula conjunction(Formula lhs, Formula rhs);
    static Formula know(Group g, Formula f);
    static Formula know_how(Group g, Formula f);

    // Sugar: bot == ~top, l | r == ~(~l & ~r), l -> r == ~(l & ~r).
    static Formula falsum();
    static Formula disjunction(Formula lhs, Formula rhs);
    static Formula implication(Formula lhs, Formula rhs);

    Conn kind() const;
    const std::string& atom_name() const;  // Atom only
    const Group& group() const;            // Know / KnowHow only
    Formula child() const;                 // Not / Know / KnowHow
    Formula lhs() const;                   // And
    Formula rhs() const;                   // And

    bool is_falsum() const;  // structurally ~top

    // If this formula is structurally an implication ~(l & ~r), extract the
    // two sides. Used by the proof checker.
    bool match_implication(Formula& out_lhs, Formula& out_rhs) const;

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

    std::size_t hash() const;
    std::string to_string() const;

private:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    explicit Formula(NodePtr node) : node_(std::move(node)) {}

    NodePtr node_;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Parses the surface syntax. Prefix operators (~, K{..}, Kh{..}) bind
/// tightest, then &, then |, then -> (right-associative). Throws ParseError.
Formula parse_formula(std::string_view text);

/// Emits core-connective surface syntax; parse_formula(print_formula(f)) is
/// structurally equal to f.
std::string print_formula(const Formula& f);

/// Distinct subformulas in post order: every subterm precedes the terms
/// containing it.
std::vector<Formula> subformulas(const Formula& f);

}  // namespace dkh

#endif  // DKH_FORMULA_HPP
