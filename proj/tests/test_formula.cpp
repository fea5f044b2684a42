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

#include "dkh/formula.hpp"
#include "dkh/harness.hpp"

using namespace dkh;

TEST_CASE("parsing desugars to core connectives") {
    Formula p = Formula::atom("p");
    Formula q = Formula::atom("q");

    CHECK(parse_formula("Kh{0,1}(~p & ~q)") ==
          Formula::know_how(Group({0, 1}),
                            Formula::conjunction(Formula::negation(p), Formula::negation(q))));
    CHECK(parse_formula("K{} top") == Formula::know(Group::empty(), Formula::top()));
    CHECK(parse_formula("p -> q") == Formula::negation(Formula::conjunction(p, Formula::negation(q))));
    CHECK(parse_formula("bot") == Formula::negation(Formula::top()));
    CHECK(parse_formula("p | q") ==
          Formula::negation(
              Formula::conjunction(Formula::negation(p), Formula::negation(q))));
}

TEST_CASE("precedence and associativity") {
    CHECK(parse_formula("~p & q -> r") == parse_formula("((~p) & q) -> r"));
    CHECK(parse_formula("p & q & r") == parse_formula("(p & q) & r"));
    CHECK(parse_formula("p -> q -> r") == parse_formula("p -> (q -> r)"));
    CHECK(parse_formula("Kh{0}p & q") ==
          Formula::conjunction(Formula::know_how(Group({0}), Formula::atom("p")),
                               Formula::atom("q")));
}

TEST_CASE("groups are canonicalized") {
    CHECK(parse_formula("K{1,0}p") == parse_formula("K{0,1}p"));
}

TEST_CASE("printer emits core syntax") {
    Formula p = Formula::atom("p");
    Formula q = Formula::atom("q");
    CHECK(print_formula(Formula::know_how(
              Group({0, 1}),
              Formula::conjunction(Formula::negation(p), Formula::negation(q)))) ==
          "Kh{0,1}(~p & ~q)");
    CHECK(print_formula(Formula::know(Group::empty(), Formula::top())) == "K{} top");
    CHECK(print_formula(Formula::negation(Formula::top())) == "~top");
    // Right-nested conjunction keeps its parentheses.
    CHECK(print_formula(Formula::conjunction(p, Formula::conjunction(q, p))) == "p & (q & p)");
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_formula("K{0,0}p"), ParseError);
    CHECK_THROWS_AS(parse_formula("p &"), ParseError);
    CHECK_THROWS_AS(parse_formula("(p"), ParseError);
    CHECK_THROWS_AS(parse_formula("K{x}p"), ParseError);
    CHECK_THROWS_AS(parse_formula("p q"), ParseError);
    CHECK_THROWS_AS(parse_formula(""), ParseError);
    try {
        parse_formula("p & & q");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("subformulas are distinct and post-ordered") {
    Formula p = Formula::atom("p");

    auto subs = subformulas(Formula::conjunction(p, p));
    REQUIRE(subs.size() == 2);
    CHECK(subs[0] == p);
    CHECK(subs[1] == Formula::conjunction(p, p));

    subs = subformulas(Formula::top());
    REQUIRE(subs.size() == 1);
    CHECK(subs[0] == Formula::top());

    Formula f = Formula::know(Group({0}), Formula::negation(p));
    subs = subformulas(f);
    REQUIRE(subs.size() == 3);
    CHECK(subs[0] == p);
    CHECK(subs[1] == Formula::negation(p));
    CHECK(subs[2] == f);
}

TEST_CASE("parse . print round-trips on 1000 random formulas") {
    Rng rng(2024);
    std::vector<std::string> props = {"p", "q", "r", "aux_0"};
    for (int i = 0; i < 1000; ++i) {
        Formula f = random_formula(rng, props, 3, rng.uniform(0, 5));
        CAPTURE(print_formula(f));
        CHECK(parse_formula(print_formula(f)) == f);
    }
}
