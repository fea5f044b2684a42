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

#ifndef DKH_PROOF_HPP
#define DKH_PROOF_HPP

#include <string>
#include <vector>

#include "dkh/formula.hpp"

namespace dkh {

/// Axiom schemas and rules of the SDKH system.
enum class Rule {
    Taut,
    DistK,
    T,
    Four,
    Five,
    AxKMono,
    AxKhMono,
    AxKtoKh,
    AxEmpKhtoK,
    AxKhtoKKh,
    AxEmpMono,
    AxKhbot,
    AxKhtoKhK,
    AxKhKh,
    MP,
    NecK,
};

bool rule_is_axiom(Rule r);
std::string rule_name(Rule r);

struct Justification {
    Rule rule;
    int premise1 = 0;  // MP: the minor premise line; NECK: the premise line
    int premise2 = 0;  // MP: the implication line
};

struct DerivationLine {
    int index;
    Formula formula;
    Justification justification;
};

/// A Hilbert-style derivation: numbered lines, no hypotheses.
struct Derivation {
    std::vector<DerivationLine> lines;

    /// Parses the one-step-per-line format
    ///   `<index>: <formula> ; <justification>`
    /// Blank lines and lines starting with '#' are skipped. Indices must
    /// start at 1 and increase strictly. Throws ParseError.
    static Derivation parse(const std::string& text);
    static Derivation load_file(const std::string& path);
};

struct LineVerdict {
    int index;
    bool ok;
    std::string message;  // empty when ok
};

/// Abstracts every maximal K-/Kh-headed subformula and every proposition
/// letter into a shared propositional variable, then decides validity by
/// truth table. Throws LimitError past `max_atoms` distinct variables.
bool is_tautology_instance(const Formula& f, std::size_t max_atoms = 12);

/// True iff f instantiates the axiom schema `axiom` (with G subset-of H
/// side conditions where the schema has them). `axiom` must not be MP/NECK;
/// Taut delegates to is_tautology_instance.
bool match_schema(const Formula& f, Rule axiom);

/// Checks every line. Axiom lines must match their schema; MP(i,j) needs
/// line j to equal (line i -> this line); NECK(i) needs this line to be
/// K_G(line i) for some G. Rule references must point at earlier lines.
std::vector<LineVerdict> check_derivation(const Derivation& d);

}  // namespace dkh

#endif  // DKH_PROOF_HPP
