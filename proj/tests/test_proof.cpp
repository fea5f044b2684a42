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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dkh/harness.hpp"
#include "dkh/proof.hpp"
#include "dkh/semantics.hpp"

using namespace dkh;

namespace {

Formula rename_atom(const Formula& f, const std::string& from, const std::string& to) {
    switch (f.kind()) {
        case Conn::Top:
            return f;
        case Conn::Atom:
            return f.atom_name() == from ? Formula::atom(to) : f;
        case Conn::Not:
            return Formula::negation(rename_atom(f.child(), from, to));
        case Conn::And:
            return Formula::conjunction(rename_atom(f.lhs(), from, to),
                                        rename_atom(f.rhs(), from, to));
        case Conn::Know:
            return Formula::know(f.group(), rename_atom(f.child(), from, to));
        case Conn::KnowHow:
            return Formula::know_how(f.group(), rename_atom(f.child(), from, to));
    }
    throw std::logic_error("unreachable");
}

bool all_ok(const std::vector<LineVerdict>& verdicts) {
    for (const LineVerdict& v : verdicts)
        if (!v.ok)
            return false;
    return true;
}

}  // namespace

TEST_CASE("tautology instances") {
    CHECK(is_tautology_instance(parse_formula("K{0}p -> K{0}p")));
    CHECK(is_tautology_instance(parse_formula("Kh{0}p | ~Kh{0}p")));
    CHECK_FALSE(is_tautology_instance(parse_formula("K{0}p -> K{0}q")));
    CHECK(is_tautology_instance(parse_formula("p & q -> p")));
    CHECK_FALSE(is_tautology_instance(parse_formula("p -> p & q")));
    CHECK(is_tautology_instance(parse_formula("bot -> p")));
    // K{0}p and p abstract to different letters.
    CHECK_FALSE(is_tautology_instance(parse_formula("K{0}p -> p")));

    std::string big = "a0";
    for (int i = 1; i <= 12; ++i)
        big += " & a" + std::to_string(i);
    CHECK_THROWS_AS(is_tautology_instance(parse_formula(big + " -> a0")), LimitError);
}

TEST_CASE("schema matching goldens") {
    CHECK(match_schema(parse_formula("Kh{0,1}bot -> bot"), Rule::AxKhbot));
    CHECK(match_schema(parse_formula("K{0}p -> K{0,1}p"), Rule::AxKMono));
    CHECK_FALSE(match_schema(parse_formula("K{0,1}p -> K{0}p"), Rule::AxKMono));

    CHECK(match_schema(parse_formula("K{1}(p & q) -> p & q"), Rule::T));
    CHECK(match_schema(parse_formula("~K{1}p -> K{1}~K{1}p"), Rule::Five));
    CHECK_FALSE(match_schema(parse_formula("~K{1}p -> K{0}~K{1}p"), Rule::Five));
    CHECK(match_schema(parse_formula("K{}(p -> q) -> K{}(Kh{0}p -> Kh{0}q)"), Rule::AxEmpMono));
    CHECK_FALSE(match_schema(parse_formula("K{}(p -> q) -> K{}(Kh{0}p -> Kh{1}q)"),
                             Rule::AxEmpMono));
    CHECK_FALSE(match_schema(parse_formula("K{0}(p -> q) -> K{}(Kh{0}p -> Kh{0}q)"),
                             Rule::AxEmpMono));
    CHECK(match_schema(parse_formula("Kh{2}Kh{2}p -> Kh{2}p"), Rule::AxKhKh));
    CHECK_FALSE(match_schema(parse_formula("Kh{2}Kh{1}p -> Kh{2}p"), Rule::AxKhKh));
    CHECK(match_schema(parse_formula("Kh{}p -> K{}p"), Rule::AxEmpKhtoK));
    CHECK_FALSE(match_schema(parse_formula("Kh{0}p -> K{0}p"), Rule::AxEmpKhtoK));
}

TEST_CASE("every generated schema instance matches its own schema") {
    Rng rng(99);
    std::vector<std::string> props = {"p", "q", "r"};
    for (Rule axiom : sdkh_axioms()) {
        for (int k = 0; k < 20; ++k) {
            Group h({0, 1, 2});
            std::vector<int> gs;
            for (int agent : h.members())
                if (rng.chance(0.5))
                    gs.push_back(agent);
            SchemaArgs args{random_formula(rng, props, 3, rng.uniform(0, 3)),
                            random_formula(rng, props, 3, rng.uniform(0, 3)), Group(gs), h};
            Formula instance = axiom_instance(axiom, args);
            CAPTURE(rule_name(axiom));
            CAPTURE(print_formula(instance));
            CHECK(match_schema(instance, axiom));
        }
    }
}

TEST_CASE("the MONOKh derivation checks out") {
    Derivation d = Derivation::load_file(std::string(DKH_DATA_DIR) + "/monokh.prf");
    REQUIRE(d.lines.size() == 6);
    auto verdicts = check_derivation(d);
    for (const LineVerdict& v : verdicts) {
        CAPTURE(v.index);
        CAPTURE(v.message);
        CHECK(v.ok);
    }
}

TEST_CASE("single-line axiom derivations") {
    auto verdicts = check_derivation(Derivation::parse("1: Kh{0}bot -> bot ; AxKhbot"));
    REQUIRE(verdicts.size() == 1);
    CHECK(verdicts[0].ok);
}

TEST_CASE("perturbations fail at the right line") {
    // Swapping one group index invalidates exactly that line.
    Derivation mutated = Derivation::parse(
        "1: p -> p ; TAUT\n"
        "2: K{}(p -> p) ; NECK 1\n"
        "3: K{}(p -> p) -> K{}(Kh{1}p -> Kh{0}p) ; AxEmpMono\n"
        "4: K{}(Kh{0}p -> Kh{0}p) ; MP 2 3\n"
        "5: K{}(Kh{0}p -> Kh{0}p) -> (Kh{0}p -> Kh{0}p) ; T\n"
        "6: Kh{0}p -> Kh{0}p ; MP 4 5\n");
    auto verdicts = check_derivation(mutated);
    CHECK_FALSE(verdicts[2].ok);   // the perturbed line
    CHECK_FALSE(verdicts[3].ok);   // and the MP that consumed it
    CHECK(verdicts[0].ok);
    CHECK(verdicts[1].ok);
    CHECK(verdicts[4].ok);
    CHECK(verdicts[5].ok);
}

TEST_CASE("rule applications check their references") {
    auto verdicts = check_derivation(Derivation::parse(
        "1: p -> p ; TAUT\n"
        "2: K{0}(p -> p) ; NECK 3\n"));  // forward reference
    CHECK(verdicts[0].ok);
    CHECK_FALSE(verdicts[1].ok);

    verdicts = check_derivation(Derivation::parse(
        "1: p -> p ; TAUT\n"
        "2: q ; MP 1 1\n"));
    CHECK_FALSE(verdicts[1].ok);

    verdicts = check_derivation(Derivation::parse(
        "1: p -> p ; TAUT\n"
        "2: Kh{0}(p -> p) ; NECK 1\n"));  // NECK yields K, not Kh
    CHECK_FALSE(verdicts[1].ok);
}

TEST_CASE("derivation parsing enforces the line format") {
    CHECK_THROWS_AS(Derivation::parse("1: p -> p\n"), ParseError);            // no justification
    CHECK_THROWS_AS(Derivation::parse("2: p -> p ; TAUT\n"), ParseError);     // must start at 1
    CHECK_THROWS_AS(Derivation::parse("1: p ; TAUT\n1: q ; TAUT\n"), ParseError);
    CHECK_THROWS_AS(Derivation::parse("1: p ; WHATEVER\n"), ParseError);
    CHECK_THROWS_AS(Derivation::parse("1: p ; MP 1\n"), ParseError);
    CHECK_THROWS_AS(Derivation::parse("1: p ( ; TAUT\n"), ParseError);
}

TEST_CASE("acceptance is stable under consistent renaming") {
    Derivation d = Derivation::load_file(std::string(DKH_DATA_DIR) + "/monokh.prf");
    Derivation renamed = d;
    for (DerivationLine& line : renamed.lines)
        line.formula = rename_atom(line.formula, "p", "weather");
    CHECK(all_ok(check_derivation(d)));
    CHECK(all_ok(check_derivation(renamed)));
}

TEST_CASE("axiom lines accepted by the matcher hold on random models") {
    Rng rng(4242);
    std::vector<std::string> props = {"p0", "p1"};
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        GenParams params;
        params.seed = seed;
        params.state_count = {2, 4};
        Model m = random_model(params);
        for (Rule axiom : sdkh_axioms()) {
            Group h = m.agent_count() >= 2 ? Group({0, 1}) : Group({0});
            SchemaArgs args{random_formula(rng, props, m.agent_count(), rng.uniform(0, 2)),
                            random_formula(rng, props, m.agent_count(), rng.uniform(0, 2)),
                            Group({0}), h};
            Formula instance = axiom_instance(axiom, args);
            REQUIRE(match_schema(instance, axiom));
            CAPTURE(rule_name(axiom));
            CAPTURE(print_formula(instance));
            CHECK(eval(m, instance) == m.all_states());
        }
    }
}
