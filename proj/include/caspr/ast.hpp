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

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

namespace caspr {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

enum class TermKind { Symbol, Integer, Variable, Range };

/// A term is a constant symbol, an integer, a variable, or an integer
/// range lo..hi (ranges are only legal in plain fact arguments).
struct Term {
    TermKind kind = TermKind::Symbol;
    std::string name;        // Symbol / Variable
    long long value = 0;     // Integer
    long long lo = 0, hi = 0;  // Range

    static Term symbol(std::string s) {
        Term t;
        t.kind = TermKind::Symbol;
        t.name = std::move(s);
        return t;
    }
    static Term integer(long long v) {
        Term t;
        t.kind = TermKind::Integer;
        t.value = v;
        return t;
    }
    static Term variable(std::string s) {
        Term t;
        t.kind = TermKind::Variable;
        t.name = std::move(s);
        return t;
    }
    static Term range(long long lo, long long hi) {
        Term t;
        t.kind = TermKind::Range;
        t.lo = lo;
        t.hi = hi;
        return t;
    }

    bool is_ground() const { return kind == TermKind::Symbol || kind == TermKind::Integer; }

    bool operator==(const Term&) const = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;
    SourceLoc loc;

    bool is_ground() const {
        for (const auto& t : args)
            if (!t.is_ground()) return false;
        return true;
    }

    bool operator==(const Atom& other) const {
        return predicate == other.predicate && args == other.args;
    }
};

enum class CmpOp { Ne, Eq, Lt, Le, Gt, Ge };

struct Comparison {
    Term lhs;
    CmpOp op = CmpOp::Ne;
    Term rhs;

    bool operator==(const Comparison&) const = default;
};

/// Body literal: either an atom (possibly under negation as failure) or a
/// comparison between two terms.
struct Literal {
    bool is_comparison = false;
    Atom atom;
    bool negated = false;
    Comparison cmp;
    SourceLoc loc;

    static Literal positive(Atom a) {
        Literal l;
        l.atom = std::move(a);
        return l;
    }
    static Literal negative(Atom a) {
        Literal l;
        l.atom = std::move(a);
        l.negated = true;
        return l;
    }
    static Literal comparison(Comparison c) {
        Literal l;
        l.is_comparison = true;
        l.cmp = std::move(c);
        return l;
    }

    bool operator==(const Literal& other) const {
        if (is_comparison != other.is_comparison) return false;
        if (is_comparison) return cmp == other.cmp;
        return negated == other.negated && atom == other.atom;
    }
};

struct AnnotatedAtom {
    double probability = 0.0;
    Atom atom;
    SourceLoc loc;

    bool operator==(const AnnotatedAtom& other) const {
        return probability == other.probability && atom == other.atom;
    }
};

enum class HeadKind {
    Plain,      // p :- body.  or  p.
    Choice,     // {p} :- body.  or  {p}.
    Annotated,  // pr::p [; ...] [:- body].
};

struct RuleAst {
    HeadKind head_kind = HeadKind::Plain;
    Atom head_atom;                        // Plain / Choice
    std::vector<AnnotatedAtom> annotated;  // Annotated (one or more disjuncts)
    std::vector<Literal> body;
    SourceLoc loc;

    bool operator==(const RuleAst& other) const {
        if (head_kind != other.head_kind || body != other.body) return false;
        if (head_kind == HeadKind::Annotated) return annotated == other.annotated;
        return head_atom == other.head_atom;
    }
};

struct QueryAst {
    struct Entry {
        Atom atom;
        bool truth = true;

        bool operator==(const Entry& other) const {
            return truth == other.truth && atom == other.atom;
        }
    };

    std::vector<Entry> targets;   // nonempty; truth = desired value
    std::vector<Entry> evidence;  // possibly empty; truth = observed value
    int id = 0;                   // ordinal position in source
    SourceLoc loc;

    bool operator==(const QueryAst& other) const {
        return targets == other.targets && evidence == other.evidence;
    }
};

struct ParsedProgram {
    std::vector<RuleAst> rules;
    std::vector<QueryAst> queries;

    bool operator==(const ParsedProgram& other) const {
        return rules == other.rules && queries == other.queries;
    }
};

// ---------------------------------------------------------------------------
// Printing. The printer emits canonical program text: parsing its output
// yields a structurally identical AST.
// ---------------------------------------------------------------------------

inline std::string to_string(const Term& t) {
    switch (t.kind) {
        case TermKind::Symbol: return t.name;
        case TermKind::Variable: return t.name;
        case TermKind::Integer: return std::to_string(t.value);
        case TermKind::Range: return std::to_string(t.lo) + ".." + std::to_string(t.hi);
    }
    return {};
}

inline std::string to_string(const Atom& a) {
    if (a.args.empty()) return a.predicate;
    std::string out = a.predicate + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ",";
        out += to_string(a.args[i]);
    }
    out += ")";
    return out;
}

inline const char* to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Ne: return "!=";
        case CmpOp::Eq: return "==";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

inline std::string to_string(const Literal& l) {
    if (l.is_comparison)
        return to_string(l.cmp.lhs) + " " + to_string(l.cmp.op) + " " + to_string(l.cmp.rhs);
    return l.negated ? "not " + to_string(l.atom) : to_string(l.atom);
}

/// Shortest decimal representation that round-trips through a double.
inline std::string probability_to_string(double p) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
    (void)ec;
    return std::string(buf, end);
}

inline std::string to_string(const RuleAst& r) {
    std::string out;
    switch (r.head_kind) {
        case HeadKind::Plain: out = to_string(r.head_atom); break;
        case HeadKind::Choice: out = "{" + to_string(r.head_atom) + "}"; break;
        case HeadKind::Annotated:
            for (std::size_t i = 0; i < r.annotated.size(); ++i) {
                if (i) out += ";";
                out += probability_to_string(r.annotated[i].probability) + "::" + to_string(r.annotated[i].atom);
            }
            break;
    }
    if (!r.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            if (i) out += ", ";
            out += to_string(r.body[i]);
        }
    }
    return out + ".";
}

inline std::string to_string(const QueryAst& q) {
    std::string out = "#query(";
    for (std::size_t i = 0; i < q.targets.size(); ++i) {
        if (i) out += ",";
        if (!q.targets[i].truth) out += "not ";
        out += to_string(q.targets[i].atom);
    }
    if (!q.evidence.empty()) {
        out += "|";
        for (std::size_t i = 0; i < q.evidence.size(); ++i) {
            if (i) out += ",";
            out += to_string(q.evidence[i].atom);
            out += q.evidence[i].truth ? ":true" : ":false";
        }
    }
    return out + ").";
}

inline std::string to_string(const ParsedProgram& p) {
    std::string out;
    for (const auto& r : p.rules) {
        out += to_string(r);
        out += "\n";
    }
    for (const auto& q : p.queries) {
        out += to_string(q);
        out += "\n";
    }
    return out;
}

/// Query rendered without the directive wrapper, e.g. "q" or
/// "p1, not p2 | e:true". Used when reporting results.
inline std::string query_text(const QueryAst& q) {
    std::string out;
    for (std::size_t i = 0; i < q.targets.size(); ++i) {
        if (i) out += ", ";
        if (!q.targets[i].truth) out += "not ";
        out += to_string(q.targets[i].atom);
    }
    if (!q.evidence.empty()) {
        out += " | ";
        for (std::size_t i = 0; i < q.evidence.size(); ++i) {
            if (i) out += ", ";
            out += to_string(q.evidence[i].atom);
            out += q.evidence[i].truth ? ":true" : ":false";
        }
    }
    return out;
}

}  // namespace caspr
