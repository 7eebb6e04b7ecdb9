// Copyright 2026 The Caspr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "caspr/ast.hpp"
#include "caspr/errors.hpp"

namespace caspr {

namespace detail {

enum class TokKind {
    End,
    Ident,      // lowercase-initial name: constant symbol or predicate
    Variable,   // uppercase-initial name
    Integer,
    Decimal,
    Not,        // 'not' keyword
    Query,      // '#query'
    Dot,        // '.'
    DotDot,     // '..'
    Comma,
    Semicolon,
    Colon,
    ColonColon,
    ColonDash,  // ':-'
    Pipe,
    LParen,
    RParen,
    LBrace,
    RBrace,
    CmpNe,
    CmpEq,
    CmpLt,
    CmpLe,
    CmpGt,
    CmpGe,
};

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    long long int_value = 0;
    double dbl_value = 0.0;
    SourceLoc loc;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_trivia();
        Token tok;
        tok.loc = {line_, col_};
        if (pos_ >= src_.size()) return tok;

        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) return lex_name(tok);
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(tok);

        switch (c) {
            case '#': return lex_directive(tok);
            case '.':
                advance();
                if (peek() == '.') {
                    advance();
                    tok.kind = TokKind::DotDot;
                } else {
                    tok.kind = TokKind::Dot;
                }
                return tok;
            case ',': advance(); tok.kind = TokKind::Comma; return tok;
            case ';': advance(); tok.kind = TokKind::Semicolon; return tok;
            case '|': advance(); tok.kind = TokKind::Pipe; return tok;
            case '(': advance(); tok.kind = TokKind::LParen; return tok;
            case ')': advance(); tok.kind = TokKind::RParen; return tok;
            case '{': advance(); tok.kind = TokKind::LBrace; return tok;
            case '}': advance(); tok.kind = TokKind::RBrace; return tok;
            case ':':
                advance();
                if (peek() == ':') {
                    advance();
                    tok.kind = TokKind::ColonColon;
                } else if (peek() == '-') {
                    advance();
                    tok.kind = TokKind::ColonDash;
                } else {
                    tok.kind = TokKind::Colon;
                }
                return tok;
            case '!':
                advance();
                if (peek() == '=') {
                    advance();
                    tok.kind = TokKind::CmpNe;
                    return tok;
                }
                throw SyntaxError(tok.loc.line, tok.loc.col, "expected '=' after '!'");
            case '=':
                advance();
                if (peek() == '=') {
                    advance();
                    tok.kind = TokKind::CmpEq;
                    return tok;
                }
                throw SyntaxError(tok.loc.line, tok.loc.col, "expected '==' (single '=' is not an operator)");
            case '<':
                advance();
                if (peek() == '=') {
                    advance();
                    tok.kind = TokKind::CmpLe;
                } else {
                    tok.kind = TokKind::CmpLt;
                }
                return tok;
            case '>':
                advance();
                if (peek() == '=') {
                    advance();
                    tok.kind = TokKind::CmpGe;
                } else {
                    tok.kind = TokKind::CmpGt;
                }
                return tok;
            default:
                throw SyntaxError(tok.loc.line, tok.loc.col,
                                  std::string("unexpected character '") + c + "'");
        }
    }

private:
    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char peek2() const { return pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0'; }

    void advance() {
        if (pos_ < src_.size()) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_trivia() {
        for (;;) {
            char c = peek();
            if (c == '%') {
                while (peek() != '\n' && peek() != '\0') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                return;
            }
        }
    }

    Token lex_name(Token tok) {
        std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
        tok.text.assign(src_.substr(start, pos_ - start));
        if (tok.text == "not") {
            tok.kind = TokKind::Not;
        } else if (std::isupper(static_cast<unsigned char>(tok.text[0]))) {
            tok.kind = TokKind::Variable;
        } else {
            tok.kind = TokKind::Ident;
        }
        return tok;
    }

    Token lex_number(Token tok) {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        // A '.' continues the number only when followed by a digit; '..' is a
        // range and a bare '.' terminates the statement.
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek2()))) {
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
            tok.kind = TokKind::Decimal;
            tok.text.assign(src_.substr(start, pos_ - start));
            auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.dbl_value);
            if (res.ec != std::errc{})
                throw SyntaxError(tok.loc.line, tok.loc.col, "malformed number '" + tok.text + "'");
            return tok;
        }
        tok.kind = TokKind::Integer;
        tok.text.assign(src_.substr(start, pos_ - start));
        auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.int_value);
        if (res.ec != std::errc{})
            throw SyntaxError(tok.loc.line, tok.loc.col, "integer '" + tok.text + "' out of range");
        return tok;
    }

    Token lex_directive(Token tok) {
        advance();  // '#'
        std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek()))) advance();
        std::string name(src_.substr(start, pos_ - start));
        if (name != "query")
            throw SyntaxError(tok.loc.line, tok.loc.col, "unknown directive '#" + name + "'");
        tok.kind = TokKind::Query;
        tok.text = "#query";
        return tok;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { shift(); }

    ParsedProgram parse_program() {
        ParsedProgram prog;
        while (tok_.kind != TokKind::End) {
            if (tok_.kind == TokKind::Query) {
                QueryAst q = parse_query_directive();
                q.id = static_cast<int>(prog.queries.size());
                prog.queries.push_back(std::move(q));
            } else {
                prog.rules.push_back(parse_rule());
            }
        }
        return prog;
    }

    QueryAst parse_single_query() {
        expect(TokKind::Query, "'#query'");
        QueryAst q = parse_query_body();
        if (tok_.kind != TokKind::End)
            fail("end of input after query directive");
        return q;
    }

private:
    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(tok_.loc.line, tok_.loc.col,
                          "expected " + expected + (tok_.text.empty() ? "" : ", found '" + tok_.text + "'"));
    }

    void shift() { tok_ = lexer_.next(); }

    bool accept(TokKind k) {
        if (tok_.kind == k) {
            shift();
            return true;
        }
        return false;
    }

    void expect(TokKind k, const char* what) {
        if (!accept(k)) fail(what);
    }

    QueryAst parse_query_directive() {
        expect(TokKind::Query, "'#query'");
        return parse_query_body();
    }

    QueryAst parse_query_body() {
        QueryAst q;
        q.loc = tok_.loc;
        expect(TokKind::LParen, "'('");
        for (;;) {
            QueryAst::Entry e;
            e.truth = !accept(TokKind::Not);
            e.atom = parse_atom(/*allow_range=*/false);
            require_ground(e.atom, "query target");
            for (const auto& prev : q.targets)
                if (prev.atom == e.atom) throw DuplicateAtomError(to_string(e.atom));
            q.targets.push_back(std::move(e));
            if (!accept(TokKind::Comma)) break;
        }
        if (accept(TokKind::Pipe)) {
            for (;;) {
                QueryAst::Entry e;
                e.atom = parse_atom(/*allow_range=*/false);
                require_ground(e.atom, "evidence atom");
                expect(TokKind::Colon, "':'");
                if (tok_.kind != TokKind::Ident || (tok_.text != "true" && tok_.text != "false"))
                    fail("'true' or 'false'");
                e.truth = tok_.text == "true";
                shift();
                for (const auto& prev : q.evidence)
                    if (prev.atom == e.atom) throw DuplicateAtomError(to_string(e.atom));
                q.evidence.push_back(std::move(e));
                if (!accept(TokKind::Comma)) break;
            }
        }
        expect(TokKind::RParen, "')'");
        expect(TokKind::Dot, "'.'");
        return q;
    }

    RuleAst parse_rule() {
        RuleAst rule;
        rule.loc = tok_.loc;
        if (tok_.kind == TokKind::LBrace) {
            shift();
            rule.head_kind = HeadKind::Choice;
            rule.head_atom = parse_atom(/*allow_range=*/false);
            expect(TokKind::RBrace, "'}'");
        } else if (tok_.kind == TokKind::Decimal || tok_.kind == TokKind::Integer) {
            rule.head_kind = HeadKind::Annotated;
            for (;;) {
                AnnotatedAtom aa;
                aa.loc = tok_.loc;
                aa.probability = parse_probability();
                expect(TokKind::ColonColon, "'::'");
                aa.atom = parse_atom(/*allow_range=*/false);
                rule.annotated.push_back(std::move(aa));
                if (!accept(TokKind::Semicolon)) break;
            }
        } else if (tok_.kind == TokKind::Ident) {
            rule.head_kind = HeadKind::Plain;
            rule.head_atom = parse_atom(/*allow_range=*/true);
        } else {
            fail("a rule head (atom, '{atom}', or 'pr::atom')");
        }

        if (accept(TokKind::ColonDash)) {
            for (;;) {
                rule.body.push_back(parse_literal());
                if (!accept(TokKind::Comma)) break;
            }
        }
        expect(TokKind::Dot, "'.'");
        validate_rule(rule);
        return rule;
    }

    double parse_probability() {
        SourceLoc loc = tok_.loc;
        double v = tok_.kind == TokKind::Decimal ? tok_.dbl_value : static_cast<double>(tok_.int_value);
        shift();
        if (v < 0.0 || v > 1.0) throw ProbabilityRangeError(loc.line, loc.col, v);
        return v;
    }

    Literal parse_literal() {
        Literal lit;
        lit.loc = tok_.loc;
        if (accept(TokKind::Not)) {
            lit.atom = parse_atom(/*allow_range=*/false);
            lit.negated = true;
            return lit;
        }
        if (tok_.kind == TokKind::Variable || tok_.kind == TokKind::Integer) {
            Term lhs = parse_term(/*allow_range=*/false);
            return finish_comparison(std::move(lhs), lit);
        }
        if (tok_.kind == TokKind::Ident) {
            Atom a = parse_atom(/*allow_range=*/false);
            if (is_cmp(tok_.kind)) {
                if (!a.args.empty())
                    throw SyntaxError(tok_.loc.line, tok_.loc.col,
                                      "comparison operand must be a term, not an atom with arguments");
                return finish_comparison(Term::symbol(a.predicate), lit);
            }
            lit.atom = std::move(a);
            return lit;
        }
        fail("a body literal");
    }

    Literal finish_comparison(Term lhs, Literal lit) {
        if (!is_cmp(tok_.kind)) fail("a comparison operator");
        CmpOp op;
        switch (tok_.kind) {
            case TokKind::CmpNe: op = CmpOp::Ne; break;
            case TokKind::CmpEq: op = CmpOp::Eq; break;
            case TokKind::CmpLt: op = CmpOp::Lt; break;
            case TokKind::CmpLe: op = CmpOp::Le; break;
            case TokKind::CmpGt: op = CmpOp::Gt; break;
            default: op = CmpOp::Ge; break;
        }
        shift();
        Term rhs = parse_term(/*allow_range=*/false);
        lit.is_comparison = true;
        lit.cmp = Comparison{std::move(lhs), op, std::move(rhs)};
        return lit;
    }

    static bool is_cmp(TokKind k) {
        return k == TokKind::CmpNe || k == TokKind::CmpEq || k == TokKind::CmpLt ||
               k == TokKind::CmpLe || k == TokKind::CmpGt || k == TokKind::CmpGe;
    }

    Atom parse_atom(bool allow_range) {
        if (tok_.kind != TokKind::Ident) fail("a predicate name");
        Atom a;
        a.loc = tok_.loc;
        a.predicate = tok_.text;
        shift();
        if (accept(TokKind::LParen)) {
            for (;;) {
                a.args.push_back(parse_term(allow_range));
                if (!accept(TokKind::Comma)) break;
            }
            expect(TokKind::RParen, "')'");
        }
        return a;
    }

    Term parse_term(bool allow_range) {
        switch (tok_.kind) {
            case TokKind::Variable: {
                Term t = Term::variable(tok_.text);
                shift();
                return t;
            }
            case TokKind::Ident: {
                Term t = Term::symbol(tok_.text);
                shift();
                return t;
            }
            case TokKind::Integer: {
                long long lo = tok_.int_value;
                shift();
                if (tok_.kind == TokKind::DotDot) {
                    SourceLoc loc = tok_.loc;
                    shift();
                    if (tok_.kind != TokKind::Integer) fail("an integer after '..'");
                    long long hi = tok_.int_value;
                    shift();
                    if (!allow_range)
                        throw SyntaxError(loc.line, loc.col,
                                          "integer ranges are only allowed in plain fact arguments");
                    if (lo > hi)
                        throw SyntaxError(loc.line, loc.col, "range lower bound exceeds upper bound");
                    return Term::range(lo, hi);
                }
                return Term::integer(lo);
            }
            default: fail("a term");
        }
    }

    void require_ground(const Atom& a, const char* what) {
        if (!a.is_ground())
            throw SyntaxError(a.loc.line, a.loc.col, std::string(what) + " must be ground: " + to_string(a));
    }

    void validate_rule(const RuleAst& rule) {
        // Ranges are restricted to plain fact arguments: parse_atom already
        // rejects them elsewhere, so only the plain-head-with-body case remains.
        if (rule.head_kind == HeadKind::Plain && !rule.body.empty()) {
            for (const auto& t : rule.head_atom.args)
                if (t.kind == TermKind::Range)
                    throw SyntaxError(rule.loc.line, rule.loc.col,
                                      "integer ranges are only allowed in plain fact arguments");
        }
        if (rule.head_kind == HeadKind::Annotated && rule.body.empty()) {
            for (const auto& aa : rule.annotated)
                if (!aa.atom.is_ground())
                    throw SyntaxError(aa.loc.line, aa.loc.col,
                                      "annotated fact must be ground: " + to_string(aa.atom));
        }
    }

    Lexer lexer_;
    Token tok_;
};

}  // namespace detail

/// Parses a full program: rules, annotated rules, and #query directives.
inline ParsedProgram parse_program(std::string_view text) {
    return detail::Parser(text).parse_program();
}

/// Parses a single '#query(...)' directive.
inline QueryAst parse_query(std::string_view text) {
    return detail::Parser(text).parse_single_query();
}

}  // namespace caspr
