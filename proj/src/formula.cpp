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

#include "dkh/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace dkh {

// ---------------------------------------------------------------------------
// Group

Group::Group(std::vector<int> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    auto dup = std::adjacent_find(members_.begin(), members_.end());
    if (dup != members_.end())
        throw std::invalid_argument("duplicate agent " + std::to_string(*dup) + " in group");
    if (!members_.empty() && members_.front() < 0)
        throw std::invalid_argument("negative agent index in group");
}

bool Group::contains(int agent) const {
    return std::binary_search(members_.begin(), members_.end(), agent);
}

bool Group::subset_of(const Group& other) const {
    return std::includes(other.members_.begin(), other.members_.end(),
                         members_.begin(), members_.end());
}

bool Group::disjoint_with(const Group& other) const {
    auto it = members_.begin();
    auto jt = other.members_.begin();
    while (it != members_.end() && jt != other.members_.end()) {
        if (*it < *jt)
            ++it;
        else if (*jt < *it)
            ++jt;
        else
            return false;
    }
    return true;
}

Group Group::union_with(const Group& other) const {
    std::vector<int> merged;
    merged.reserve(members_.size() + other.members_.size());
    std::set_union(members_.begin(), members_.end(),
                   other.members_.begin(), other.members_.end(),
                   std::back_inserter(merged));
    Group g;
    g.members_ = std::move(merged);
    return g;
}

int Group::min_agent() const {
    if (members_.empty())
        throw std::logic_error("min_agent on the empty group");
    return members_.front();
}

std::string Group::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i > 0)
            out += ',';
        out += std::to_string(members_[i]);
    }
    out += '}';
    return out;
}

// ---------------------------------------------------------------------------
// Formula nodes

struct Formula::Node {
    Conn kind;
    std::string name;  // Atom
    Group grp;         // Know / KnowHow
    NodePtr a;         // Not / Know / KnowHow child, And lhs
    NodePtr b;         // And rhs
    std::size_t hash;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t group_hash(const Group& g) {
    std::size_t h = 0x3c6ef372u;
    for (int m : g.members())
        h = mix(h, static_cast<std::size_t>(m));
    return h;
}

}  // namespace

Formula Formula::top() {
    static const NodePtr node = std::make_shared<const Node>(
        Node{Conn::Top, {}, {}, nullptr, nullptr, 0x9e3779b9u});
    return Formula(node);
}

Formula Formula::atom(std::string name) {
    if (name.empty())
        throw std::invalid_argument("empty atom name");
    std::size_t h = mix(0xa5a5a5a5u, std::hash<std::string>{}(name));
    return Formula(std::make_shared<const Node>(
        Node{Conn::Atom, std::move(name), {}, nullptr, nullptr, h}));
}

Formula Formula::negation(Formula f) {
    std::size_t h = mix(0x1b873593u, f.hash());
    return Formula(std::make_shared<const Node>(
        Node{Conn::Not, {}, {}, std::move(f.node_), nullptr, h}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
    std::size_t h = mix(mix(0x85ebca6bu, lhs.hash()), rhs.hash());
    return Formula(std::make_shared<const Node>(
        Node{Conn::And, {}, {}, std::move(lhs.node_), std::move(rhs.node_), h}));
}

Formula Formula::know(Group g, Formula f) {
    std::size_t h = mix(mix(0xc2b2ae35u, group_hash(g)), f.hash());
    return Formula(std::make_shared<const Node>(
        Node{Conn::Know, {}, std::move(g), std::move(f.node_), nullptr, h}));
}

Formula Formula::know_how(Group g, Formula f) {
    std::size_t h = mix(mix(0x27d4eb2fu, group_hash(g)), f.hash());
    return Formula(std::make_shared<const Node>(
        Node{Conn::KnowHow, {}, std::move(g), std::move(f.node_), nullptr, h}));
}

Formula Formula::falsum() { return negation(top()); }

Formula Formula::disjunction(Formula lhs, Formula rhs) {
    return negation(conjunction(negation(std::move(lhs)), negation(std::move(rhs))));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
    return negation(conjunction(std::move(lhs), negation(std::move(rhs))));
}

Conn Formula::kind() const { return node_->kind; }

const std::string& Formula::atom_name() const { return node_->name; }

const Group& Formula::group() const { return node_->grp; }

Formula Formula::child() const { return Formula(node_->a); }

Formula Formula::lhs() const { return Formula(node_->a); }

Formula Formula::rhs() const { return Formula(node_->b); }

bool Formula::is_falsum() const {
    return node_->kind == Conn::Not && node_->a->kind == Conn::Top;
}

bool Formula::match_implication(Formula& out_lhs, Formula& out_rhs) const {
    // ~(l & ~r)
    if (node_->kind != Conn::Not || node_->a->kind != Conn::And)
        return false;
    const Node& conj = *node_->a;
    if (conj.b->kind != Conn::Not)
        return false;
    out_lhs = Formula(conj.a);
    out_rhs = Formula(conj.b->a);
    return true;
}

std::size_t Formula::hash() const { return node_->hash; }

bool Formula::operator==(const Formula& other) const {
    struct Cmp {
        static bool eq(const Node* x, const Node* y) {
            if (x == y)
                return true;
            if (x->hash != y->hash || x->kind != y->kind)
                return false;
            switch (x->kind) {
                case Conn::Top:
                    return true;
                case Conn::Atom:
                    return x->name == y->name;
                case Conn::Not:
                    return eq(x->a.get(), y->a.get());
                case Conn::And:
                    return eq(x->a.get(), y->a.get()) && eq(x->b.get(), y->b.get());
                case Conn::Know:
                case Conn::KnowHow:
                    return x->grp == y->grp && eq(x->a.get(), y->a.get());
            }
            return false;
        }
    };
    return Cmp::eq(node_.get(), other.node_.get());
}

namespace {

// ---------------------------------------------------------------------------
// Printer

// Precedence levels used when deciding parentheses: And sits below the
// prefix operators; the right operand of the left-associative & must be
// strictly tighter.
enum : int { PREC_AND = 2, PREC_UNARY = 3 };

void print_rec(const Formula& f, int min_prec, std::string& out) {
    switch (f.kind()) {
        case Conn::Top:
            out += "top";
            return;
        case Conn::Atom:
            out += f.atom_name();
            return;
        case Conn::Not:
            out += '~';
            print_rec(f.child(), PREC_UNARY, out);
            return;
        case Conn::Know:
        case Conn::KnowHow: {
            out += (f.kind() == Conn::Know) ? "K" : "Kh";
            out += f.group().to_string();
            std::string arg;
            print_rec(f.child(), PREC_UNARY, arg);
            // "K{} top", not "K{}top"; no space before '(' or '~'.
            if (std::isalnum(static_cast<unsigned char>(arg[0])) || arg[0] == '_')
                out += ' ';
            out += arg;
            return;
        }
        case Conn::And: {
            bool parens = PREC_AND < min_prec;
            if (parens)
                out += '(';
            print_rec(f.lhs(), PREC_AND, out);
            out += " & ";
            print_rec(f.rhs(), PREC_UNARY, out);
            if (parens)
                out += ')';
            return;
        }
    }
}

}  // namespace

std::string Formula::to_string() const {
    std::string out;
    print_rec(*this, 0, out);
    return out;
}

std::string print_formula(const Formula& f) { return f.to_string(); }

// ---------------------------------------------------------------------------
// Subformulas

namespace {

void collect_subformulas(const Formula& f, std::unordered_set<Formula, FormulaHash>& seen,
                         std::vector<Formula>& out) {
    if (seen.count(f))
        return;
    switch (f.kind()) {
        case Conn::Top:
        case Conn::Atom:
            break;
        case Conn::Not:
        case Conn::Know:
        case Conn::KnowHow:
            collect_subformulas(f.child(), seen, out);
            break;
        case Conn::And:
            collect_subformulas(f.lhs(), seen, out);
            collect_subformulas(f.rhs(), seen, out);
            break;
    }
    if (seen.insert(f).second)
        out.push_back(f);
}

}  // namespace

std::vector<Formula> subformulas(const Formula& f) {
    std::unordered_set<Formula, FormulaHash> seen;
    std::vector<Formula> out;
    collect_subformulas(f, seen, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
    enum Kind { End, Ident, Int, KwTop, KwBot, KwK, KwKh, Not, And, Or, Arrow, LParen, RParen, LBrace, RBrace, Comma };
    Kind kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        std::size_t start = pos_;
        if (pos_ >= text_.size()) {
            current_ = {Token::End, "", start};
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            current_ = {Token::Int, std::string(text_.substr(start, pos_ - start)), start};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string word(text_.substr(start, pos_ - start));
            Token::Kind k = Token::Ident;
            if (word == "top")
                k = Token::KwTop;
            else if (word == "bot")
                k = Token::KwBot;
            else if (word == "K")
                k = Token::KwK;
            else if (word == "Kh")
                k = Token::KwKh;
            current_ = {k, std::move(word), start};
            return;
        }
        ++pos_;
        switch (c) {
            case '~': current_ = {Token::Not, "~", start}; return;
            case '&': current_ = {Token::And, "&", start}; return;
            case '|': current_ = {Token::Or, "|", start}; return;
            case '(': current_ = {Token::LParen, "(", start}; return;
            case ')': current_ = {Token::RParen, ")", start}; return;
            case '{': current_ = {Token::LBrace, "{", start}; return;
            case '}': current_ = {Token::RBrace, "}", start}; return;
            case ',': current_ = {Token::Comma, ",", start}; return;
            case '-':
                if (pos_ < text_.size() && text_[pos_] == '>') {
                    ++pos_;
                    current_ = {Token::Arrow, "->", start};
                    return;
                }
                throw ParseError("expected '->' after '-'", start);
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    Formula parse() {
        Formula f = parse_impl();
        const Token& t = lex_.peek();
        if (t.kind != Token::End)
            throw ParseError("trailing input after formula", t.pos);
        return f;
    }

private:
    // impl := or ( "->" impl )?     right-associative
    Formula parse_impl() {
        Formula lhs = parse_or();
        if (lex_.peek().kind == Token::Arrow) {
            lex_.take();
            return Formula::implication(std::move(lhs), parse_impl());
        }
        return lhs;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (lex_.peek().kind == Token::Or) {
            lex_.take();
            f = Formula::disjunction(std::move(f), parse_and());
        }
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (lex_.peek().kind == Token::And) {
            lex_.take();
            f = Formula::conjunction(std::move(f), parse_unary());
        }
        return f;
    }

    Formula parse_unary() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Token::Not:
                lex_.take();
                return Formula::negation(parse_unary());
            case Token::KwK: {
                lex_.take();
                Group g = parse_group();
                return Formula::know(std::move(g), parse_unary());
            }
            case Token::KwKh: {
                lex_.take();
                Group g = parse_group();
                return Formula::know_how(std::move(g), parse_unary());
            }
            default:
                return parse_prim();
        }
    }

    Formula parse_prim() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::KwTop:
                return Formula::top();
            case Token::KwBot:
                return Formula::falsum();
            case Token::Ident:
                return Formula::atom(std::move(t.text));
            case Token::LParen: {
                Formula f = parse_impl();
                Token close = lex_.take();
                if (close.kind != Token::RParen)
                    throw ParseError("expected ')'", close.pos);
                return f;
            }
            case Token::End:
                throw ParseError("unexpected end of input", t.pos);
            default:
                throw ParseError("unexpected token '" + t.text + "'", t.pos);
        }
    }

    Group parse_group() {
        Token open = lex_.take();
        if (open.kind != Token::LBrace)
            throw ParseError("expected '{' to open a group", open.pos);
        std::vector<int> members;
        if (lex_.peek().kind == Token::RBrace) {
            lex_.take();
            return Group();
        }
        for (;;) {
            Token t = lex_.take();
            if (t.kind != Token::Int)
                throw ParseError("agent index must be a nonnegative integer", t.pos);
            int agent = 0;
            try {
                agent = std::stoi(t.text);
            } catch (const std::out_of_range&) {
                throw ParseError("agent index out of range", t.pos);
            }
            if (std::find(members.begin(), members.end(), agent) != members.end())
                throw ParseError("duplicate agent " + t.text + " in group", t.pos);
            members.push_back(agent);
            Token sep = lex_.take();
            if (sep.kind == Token::RBrace)
                break;
            if (sep.kind != Token::Comma)
                throw ParseError("expected ',' or '}' in group", sep.pos);
        }
        return Group(std::move(members));
    }

    Lexer lex_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace dkh
