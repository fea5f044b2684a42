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

#include "dkh/proof.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace dkh {

bool rule_is_axiom(Rule r) { return r != Rule::MP && r != Rule::NecK; }

std::string rule_name(Rule r) {
    switch (r) {
        case Rule::Taut: return "TAUT";
        case Rule::DistK: return "DISTK";
        case Rule::T: return "T";
        case Rule::Four: return "4";
        case Rule::Five: return "5";
        case Rule::AxKMono: return "AxKMono";
        case Rule::AxKhMono: return "AxKhMono";
        case Rule::AxKtoKh: return "AxKtoKh";
        case Rule::AxEmpKhtoK: return "AxEmpKhtoK";
        case Rule::AxKhtoKKh: return "AxKhtoKKh";
        case Rule::AxEmpMono: return "AxEmpMono";
        case Rule::AxKhbot: return "AxKhbot";
        case Rule::AxKhtoKhK: return "AxKhtoKhK";
        case Rule::AxKhKh: return "AxKhKh";
        case Rule::MP: return "MP";
        case Rule::NecK: return "NECK";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Tautology instances

namespace {

// Propositional skeleton: each maximal modal subformula and each atom is
// replaced by a shared variable id; Top stays a constant.
struct Skeleton {
    enum Kind { True, Var, Neg, Conj };
    Kind kind;
    int var = -1;
    int a = -1;  // child indices into the node pool
    int b = -1;
};

struct Abstraction {
    std::vector<Skeleton> nodes;
    std::unordered_map<Formula, int, FormulaHash> var_of;

    int abstract(const Formula& f) {
        switch (f.kind()) {
            case Conn::Top:
                nodes.push_back({Skeleton::True});
                break;
            case Conn::Atom:
            case Conn::Know:
            case Conn::KnowHow: {
                auto [it, inserted] = var_of.try_emplace(f, static_cast<int>(var_of.size()));
                nodes.push_back({Skeleton::Var, it->second});
                break;
            }
            case Conn::Not: {
                int child = abstract(f.child());
                nodes.push_back({Skeleton::Neg, -1, child});
                break;
            }
            case Conn::And: {
                int l = abstract(f.lhs());
                int r = abstract(f.rhs());
                nodes.push_back({Skeleton::Conj, -1, l, r});
                break;
            }
        }
        return static_cast<int>(nodes.size()) - 1;
    }

    bool truth(int node, unsigned assignment) const {
        const Skeleton& n = nodes[node];
        switch (n.kind) {
            case Skeleton::True: return true;
            case Skeleton::Var: return (assignment >> n.var) & 1u;
            case Skeleton::Neg: return !truth(n.a, assignment);
            case Skeleton::Conj: return truth(n.a, assignment) && truth(n.b, assignment);
        }
        return false;
    }
};

}  // namespace

bool is_tautology_instance(const Formula& f, std::size_t max_atoms) {
    Abstraction abs;
    int root = abs.abstract(f);
    std::size_t vars = abs.var_of.size();
    if (vars > max_atoms)
        throw LimitError("tautology check: abstraction has " + std::to_string(vars) +
                         " atoms, budget is " + std::to_string(max_atoms));
    const unsigned long long total = 1ull << vars;
    for (unsigned long long a = 0; a < total; ++a)
        if (!abs.truth(root, static_cast<unsigned>(a)))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Schema matching

namespace {

bool match_know(const Formula& f, Group& g, Formula& body) {
    if (f.kind() != Conn::Know)
        return false;
    g = f.group();
    body = f.child();
    return true;
}

bool match_know_how(const Formula& f, Group& g, Formula& body) {
    if (f.kind() != Conn::KnowHow)
        return false;
    g = f.group();
    body = f.child();
    return true;
}

}  // namespace

bool match_schema(const Formula& f, Rule axiom) {
    Formula lhs, rhs;
    if (axiom == Rule::Taut)
        return is_tautology_instance(f);
    if (!f.match_implication(lhs, rhs))
        return false;

    Group g, h;
    Formula a, b;
    switch (axiom) {
        case Rule::DistK: {
            // K_G p & K_G (p -> q)  ->  K_G q
            if (lhs.kind() != Conn::And)
                return false;
            Group g2, g3;
            Formula p, cond, q, p2, q2;
            if (!match_know(lhs.lhs(), g, p) || !match_know(lhs.rhs(), g2, cond) ||
                !match_know(rhs, g3, q))
                return false;
            if (g != g2 || g != g3)
                return false;
            return cond.match_implication(p2, q2) && p2 == p && q2 == q;
        }
        case Rule::T:
            return match_know(lhs, g, a) && a == rhs;
        case Rule::Four:
            return match_know(lhs, g, a) && match_know(rhs, h, b) && g == h &&
                   b.kind() == Conn::Know && b.group() == g && b.child() == a;
        case Rule::Five: {
            // ~K_G p -> K_G ~K_G p
            if (lhs.kind() != Conn::Not || !match_know(lhs.child(), g, a))
                return false;
            return match_know(rhs, h, b) && g == h && b == lhs;
        }
        case Rule::AxKMono:
            return match_know(lhs, g, a) && match_know(rhs, h, b) && a == b && g.subset_of(h);
        case Rule::AxKhMono:
            return match_know_how(lhs, g, a) && match_know_how(rhs, h, b) && a == b &&
                   g.subset_of(h);
        case Rule::AxKtoKh:
            return match_know(lhs, g, a) && match_know_how(rhs, h, b) && g == h && a == b;
        case Rule::AxEmpKhtoK:
            return match_know_how(lhs, g, a) && match_know(rhs, h, b) && g.is_empty() &&
                   h.is_empty() && a == b;
        case Rule::AxKhtoKKh:
            // Kh_G p -> K_G Kh_G p
            return match_know_how(lhs, g, a) && match_know(rhs, h, b) && g == h && b == lhs;
        case Rule::AxEmpMono: {
            // K_{} (p -> q) -> K_{} (Kh_G p -> Kh_G q)
            Formula inner_l, inner_r, p, q, khp, khq, p2, q2;
            Group g2, g3;
            if (!match_know(lhs, g, inner_l) || !g.is_empty())
                return false;
            if (!match_know(rhs, h, inner_r) || !h.is_empty())
                return false;
            if (!inner_l.match_implication(p, q) || !inner_r.match_implication(khp, khq))
                return false;
            return match_know_how(khp, g2, p2) && match_know_how(khq, g3, q2) && g2 == g3 &&
                   p2 == p && q2 == q;
        }
        case Rule::AxKhbot:
            return match_know_how(lhs, g, a) && a.is_falsum() && rhs.is_falsum();
        case Rule::AxKhtoKhK:
            // Kh_G p -> Kh_G K_G p
            return match_know_how(lhs, g, a) && match_know_how(rhs, h, b) && g == h &&
                   b.kind() == Conn::Know && b.group() == g && b.child() == a;
        case Rule::AxKhKh:
            // Kh_G Kh_G p -> Kh_G p
            return match_know_how(lhs, g, a) && a.kind() == Conn::KnowHow && a.group() == g &&
                   match_know_how(rhs, h, b) && g == h && a.child() == b;
        default:
            return false;
    }
}

// ---------------------------------------------------------------------------
// Derivation parsing

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

Justification parse_justification(const std::string& text, std::size_t line_offset) {
    std::istringstream in(text);
    std::string head;
    in >> head;
    if (head.empty())
        throw ParseError("missing justification", line_offset);

    static const std::map<std::string, Rule> axioms = {
        {"TAUT", Rule::Taut},          {"DISTK", Rule::DistK},
        {"T", Rule::T},                {"4", Rule::Four},
        {"Four", Rule::Four},          {"5", Rule::Five},
        {"Five", Rule::Five},          {"AxKMono", Rule::AxKMono},
        {"AxKhMono", Rule::AxKhMono},  {"AxKtoKh", Rule::AxKtoKh},
        {"AxEmpKhtoK", Rule::AxEmpKhtoK}, {"AxKhtoKKh", Rule::AxKhtoKKh},
        {"AxEmpMono", Rule::AxEmpMono},   {"AxKhbot", Rule::AxKhbot},
        {"AxKhtoKhK", Rule::AxKhtoKhK},   {"AxKhKh", Rule::AxKhKh},
    };

    Justification j;
    if (head == "MP") {
        j.rule = Rule::MP;
        if (!(in >> j.premise1 >> j.premise2))
            throw ParseError("MP needs two line numbers", line_offset);
    } else if (head == "NECK") {
        j.rule = Rule::NecK;
        if (!(in >> j.premise1))
            throw ParseError("NECK needs one line number", line_offset);
    } else {
        auto it = axioms.find(head);
        if (it == axioms.end())
            throw ParseError("unknown justification '" + head + "'", line_offset);
        j.rule = it->second;
    }
    std::string rest;
    if (in >> rest)
        throw ParseError("trailing tokens after justification", line_offset);
    return j;
}

}  // namespace

Derivation Derivation::parse(const std::string& text) {
    Derivation d;
    std::istringstream in(text);
    std::string line;
    std::size_t offset = 0;
    int previous_index = 0;
    while (std::getline(in, line)) {
        std::size_t line_start = offset;
        offset += line.size() + 1;
        std::string body = trim(line);
        if (body.empty() || body[0] == '#')
            continue;

        std::size_t colon = body.find(':');
        if (colon == std::string::npos)
            throw ParseError("derivation line needs '<index>: <formula> ; <justification>'",
                             line_start);
        std::size_t semi = body.find(';', colon);
        if (semi == std::string::npos)
            throw ParseError("derivation line is missing '; <justification>'", line_start);

        DerivationLine out;
        try {
            std::size_t used = 0;
            out.index = std::stoi(trim(body.substr(0, colon)), &used);
        } catch (const std::exception&) {
            throw ParseError("bad line index", line_start);
        }
        if (out.index <= previous_index || (previous_index == 0 && out.index != 1))
            throw ParseError("line indices must increase strictly from 1", line_start);
        previous_index = out.index;

        out.formula = parse_formula(body.substr(colon + 1, semi - colon - 1));
        out.justification = parse_justification(trim(body.substr(semi + 1)), line_start);
        d.lines.push_back(std::move(out));
    }
    return d;
}

Derivation Derivation::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot read derivation file '" + path + "'", 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

// ---------------------------------------------------------------------------
// Checking

std::vector<LineVerdict> check_derivation(const Derivation& d) {
    std::map<int, const Formula*> by_index;
    std::vector<LineVerdict> verdicts;
    verdicts.reserve(d.lines.size());

    for (const DerivationLine& line : d.lines) {
        LineVerdict v{line.index, true, ""};
        const Justification& j = line.justification;

        auto lookup = [&](int ref) -> const Formula* {
            auto it = by_index.find(ref);
            if (it == by_index.end() || ref >= line.index)
                return nullptr;
            return it->second;
        };

        if (rule_is_axiom(j.rule)) {
            if (!match_schema(line.formula, j.rule)) {
                v.ok = false;
                v.message = "not an instance of " + rule_name(j.rule);
            }
        } else if (j.rule == Rule::MP) {
            const Formula* minor = lookup(j.premise1);
            const Formula* major = lookup(j.premise2);
            if (!minor || !major) {
                v.ok = false;
                v.message = "MP premises must reference earlier lines";
            } else if (*major != Formula::implication(*minor, line.formula)) {
                v.ok = false;
                v.message = "line " + std::to_string(j.premise2) + " is not (line " +
                            std::to_string(j.premise1) + " -> this line)";
            }
        } else {  // NECK
            const Formula* premise = lookup(j.premise1);
            if (!premise) {
                v.ok = false;
                v.message = "NECK premise must reference an earlier line";
            } else if (line.formula.kind() != Conn::Know || line.formula.child() != *premise) {
                v.ok = false;
                v.message = "not K_G of line " + std::to_string(j.premise1);
            }
        }

        by_index[line.index] = &line.formula;
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

}  // namespace dkh
