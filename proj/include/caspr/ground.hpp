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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "caspr/ast.hpp"
#include "caspr/errors.hpp"
#include "caspr/translate.hpp"

namespace caspr {

using AtomId = std::uint32_t;
constexpr AtomId kNoAtom = std::numeric_limits<AtomId>::max();

enum class AtomKind : std::uint8_t {
    Derived,           // ordinary ground atom
    ProbFact,          // atom of a probabilistic fact
    HiddenComplement,  // internal complement of a choice atom, never reported
};

/// Bijection between ground atoms and dense ids, with a kind marker per id.
class AtomTable {
public:
    AtomId intern(const std::string& name, AtomKind kind) {
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        AtomId id = static_cast<AtomId>(names_.size());
        names_.push_back(name);
        kinds_.push_back(kind);
        ids_.emplace(names_.back(), id);
        return id;
    }

    std::optional<AtomId> find(const std::string& name) const {
        auto it = ids_.find(name);
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(AtomId id) const { return names_[id]; }
    AtomKind kind(AtomId id) const { return kinds_[id]; }
    bool hidden(AtomId id) const { return kinds_[id] == AtomKind::HiddenComplement; }

    std::size_t size() const { return names_.size(); }

    std::size_t visible_size() const {
        std::size_t n = 0;
        for (auto k : kinds_)
            if (k != AtomKind::HiddenComplement) ++n;
        return n;
    }

private:
    std::vector<std::string> names_;
    std::vector<AtomKind> kinds_;
    std::unordered_map<std::string, AtomId> ids_;
};

struct GroundRule {
    AtomId head = kNoAtom;
    bool choice = false;
    AtomId complement = kNoAtom;  // set iff choice
    std::vector<AtomId> positive;
    std::vector<AtomId> negative;
};

struct GroundProgram {
    AtomTable atoms;
    std::vector<GroundRule> rules;
    std::vector<AtomId> fact_atoms;  // ProbabilisticFact.index -> atom id

    /// Ground atoms of the program proper (hidden complements excluded).
    std::size_t herbrand_size() const { return atoms.visible_size(); }

    /// Width of interpretations over this program (includes hidden atoms).
    std::size_t width() const { return atoms.size(); }

    std::string rule_to_string(const GroundRule& r) const {
        std::string out = r.choice ? "{" + atoms.name(r.head) + "}" : atoms.name(r.head);
        if (!r.positive.empty() || !r.negative.empty()) {
            out += " :- ";
            bool first = true;
            for (AtomId a : r.positive) {
                if (!first) out += ", ";
                out += atoms.name(a);
                first = false;
            }
            for (AtomId a : r.negative) {
                if (!first) out += ", ";
                out += "not " + atoms.name(a);
                first = false;
            }
        }
        return out + ".";
    }
};

namespace detail {

inline bool term_equal_ground(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == TermKind::Integer) return a.value == b.value;
    return a.name == b.name;
}

inline bool eval_comparison(const Term& lhs, CmpOp op, const Term& rhs) {
    if (op == CmpOp::Eq || op == CmpOp::Ne) {
        bool eq = term_equal_ground(lhs, rhs);
        return op == CmpOp::Eq ? eq : !eq;
    }
    if (lhs.kind != TermKind::Integer || rhs.kind != TermKind::Integer)
        throw ComparisonTypeError("ordering operator '" + std::string(to_string(op)) + "' applied to '" +
                                  to_string(lhs) + "' and '" + to_string(rhs) + "' (integers required)");
    switch (op) {
        case CmpOp::Lt: return lhs.value < rhs.value;
        case CmpOp::Le: return lhs.value <= rhs.value;
        case CmpOp::Gt: return lhs.value > rhs.value;
        case CmpOp::Ge: return lhs.value >= rhs.value;
        default: return false;
    }
}

class Grounder {
public:
    explicit Grounder(const PlpProgram& plp) : plp_(plp) {}

    GroundProgram run() {
        // Probabilistic-fact atoms come first so they are registered (and
        // marked) even when they never occur in the logic rules.
        for (const auto& f : plp_.facts)
            out_.fact_atoms.push_back(out_.atoms.intern(to_string(f.atom), AtomKind::ProbFact));

        expand_fact_ranges();
        check_safety();
        collect_constants();
        for (const auto& rule : rules_) instantiate(rule);
        return std::move(out_);
    }

private:
    // Plain ground facts with range arguments become one fact per element of
    // the ranges' cross product; everything else is copied unchanged.
    void expand_fact_ranges() {
        for (const auto& rule : plp_.logic_rules) {
            bool has_range = false;
            if (rule.head_kind == HeadKind::Plain)
                for (const auto& t : rule.head_atom.args)
                    if (t.kind == TermKind::Range) has_range = true;
            if (!has_range) {
                rules_.push_back(rule);
                continue;
            }
            std::vector<Atom> expanded{Atom{rule.head_atom.predicate, {}, rule.head_atom.loc}};
            for (const auto& t : rule.head_atom.args) {
                std::vector<Atom> next;
                for (const auto& base : expanded) {
                    if (t.kind == TermKind::Range) {
                        for (long long v = t.lo; v <= t.hi; ++v) {
                            Atom a = base;
                            a.args.push_back(Term::integer(v));
                            next.push_back(std::move(a));
                        }
                    } else {
                        Atom a = base;
                        a.args.push_back(t);
                        next.push_back(std::move(a));
                    }
                }
                expanded = std::move(next);
            }
            for (auto& a : expanded) {
                RuleAst fact;
                fact.head_kind = HeadKind::Plain;
                fact.head_atom = std::move(a);
                fact.loc = rule.loc;
                rules_.push_back(std::move(fact));
            }
        }
    }

    static void collect_vars(const Atom& a, std::vector<std::string>& out) {
        for (const auto& t : a.args)
            if (t.kind == TermKind::Variable &&
                std::find(out.begin(), out.end(), t.name) == out.end())
                out.push_back(t.name);
    }

    void check_safety() const {
        for (const auto& rule : rules_) {
            std::vector<std::string> positive_vars;
            for (const auto& lit : rule.body)
                if (!lit.is_comparison && !lit.negated) collect_vars(lit.atom, positive_vars);

            std::vector<std::string> all_vars;
            collect_vars(rule.head_atom, all_vars);
            for (const auto& lit : rule.body) {
                if (lit.is_comparison) {
                    for (const Term* t : {&lit.cmp.lhs, &lit.cmp.rhs})
                        if (t->kind == TermKind::Variable &&
                            std::find(all_vars.begin(), all_vars.end(), t->name) == all_vars.end())
                            all_vars.push_back(t->name);
                } else {
                    collect_vars(lit.atom, all_vars);
                }
            }
            for (const auto& v : all_vars)
                if (std::find(positive_vars.begin(), positive_vars.end(), v) == positive_vars.end())
                    throw UnsafeRuleError(to_string(rule), v);
        }
    }

    void note_constant(const Term& t) {
        if (t.kind == TermKind::Variable) return;
        std::string key = to_string(t);
        if (seen_constants_.insert(key).second) universe_.push_back(t);
    }

    void collect_constants() {
        for (const auto& rule : rules_) {
            for (const auto& t : rule.head_atom.args) note_constant(t);
            for (const auto& lit : rule.body) {
                if (lit.is_comparison) {
                    note_constant(lit.cmp.lhs);
                    note_constant(lit.cmp.rhs);
                } else {
                    for (const auto& t : lit.atom.args) note_constant(t);
                }
            }
        }
        for (const auto& f : plp_.facts)
            for (const auto& t : f.atom.args) note_constant(t);
    }

    Term substitute(const Term& t, const std::unordered_map<std::string, const Term*>& binding) const {
        if (t.kind != TermKind::Variable) return t;
        return *binding.at(t.name);
    }

    Atom substitute(const Atom& a, const std::unordered_map<std::string, const Term*>& binding) const {
        Atom out;
        out.predicate = a.predicate;
        out.args.reserve(a.args.size());
        for (const auto& t : a.args) out.args.push_back(substitute(t, binding));
        return out;
    }

    void instantiate(const RuleAst& rule) {
        std::vector<std::string> vars;
        collect_vars(rule.head_atom, vars);
        for (const auto& lit : rule.body) {
            if (lit.is_comparison) {
                for (const Term* t : {&lit.cmp.lhs, &lit.cmp.rhs})
                    if (t->kind == TermKind::Variable &&
                        std::find(vars.begin(), vars.end(), t->name) == vars.end())
                        vars.push_back(t->name);
            } else {
                collect_vars(lit.atom, vars);
            }
        }

        if (vars.empty()) {
            std::unordered_map<std::string, const Term*> empty;
            emit_if_comparisons_hold(rule, empty);
            return;
        }
        if (universe_.empty()) return;  // variables but no constants: no instances

        // Depth of the deepest variable each comparison mentions, so false
        // instances are pruned as soon as their comparison is decidable.
        std::vector<int> cmp_depth;
        for (const auto& lit : rule.body) {
            if (!lit.is_comparison) continue;
            int depth = -1;
            for (const Term* t : {&lit.cmp.lhs, &lit.cmp.rhs})
                if (t->kind == TermKind::Variable) {
                    int d = static_cast<int>(std::find(vars.begin(), vars.end(), t->name) - vars.begin());
                    depth = std::max(depth, d);
                }
            cmp_depth.push_back(depth);
        }

        std::unordered_map<std::string, const Term*> binding;
        if (!comparisons_hold_at_depth(rule, cmp_depth, -1, binding)) return;
        std::vector<std::size_t> odometer(vars.size(), 0);
        enumerate(rule, vars, cmp_depth, 0, odometer, binding);
    }

    void enumerate(const RuleAst& rule, const std::vector<std::string>& vars,
                   const std::vector<int>& cmp_depth, std::size_t depth,
                   std::vector<std::size_t>& odometer,
                   std::unordered_map<std::string, const Term*>& binding) {
        if (depth == vars.size()) {
            emit(rule, binding);
            return;
        }
        for (std::size_t i = 0; i < universe_.size(); ++i) {
            odometer[depth] = i;
            binding[vars[depth]] = &universe_[i];
            if (!comparisons_hold_at_depth(rule, cmp_depth, static_cast<int>(depth), binding)) continue;
            enumerate(rule, vars, cmp_depth, depth + 1, odometer, binding);
        }
        binding.erase(vars[depth]);
    }

    bool comparisons_hold_at_depth(const RuleAst& rule, const std::vector<int>& cmp_depth, int depth,
                                   const std::unordered_map<std::string, const Term*>& binding) const {
        std::size_t k = 0;
        for (const auto& lit : rule.body) {
            if (!lit.is_comparison) continue;
            if (cmp_depth[k++] != depth) continue;
            if (!eval_comparison(substitute(lit.cmp.lhs, binding), lit.cmp.op,
                                 substitute(lit.cmp.rhs, binding)))
                return false;
        }
        return true;
    }

    void emit_if_comparisons_hold(const RuleAst& rule,
                                  const std::unordered_map<std::string, const Term*>& binding) {
        for (const auto& lit : rule.body) {
            if (!lit.is_comparison) continue;
            if (!eval_comparison(substitute(lit.cmp.lhs, binding), lit.cmp.op,
                                 substitute(lit.cmp.rhs, binding)))
                return;
        }
        emit(rule, binding);
    }

    void emit(const RuleAst& rule, const std::unordered_map<std::string, const Term*>& binding) {
        GroundRule out;
        Atom head = substitute(rule.head_atom, binding);
        out.head = out_.atoms.intern(to_string(head), AtomKind::Derived);
        if (rule.head_kind == HeadKind::Choice) {
            out.choice = true;
            out.complement = out_.atoms.intern("__c__" + to_string(head), AtomKind::HiddenComplement);
        }
        for (const auto& lit : rule.body) {
            if (lit.is_comparison) continue;  // already evaluated
            AtomId id = out_.atoms.intern(to_string(substitute(lit.atom, binding)), AtomKind::Derived);
            (lit.negated ? out.negative : out.positive).push_back(id);
        }
        auto normalize = [](std::vector<AtomId>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        normalize(out.positive);
        normalize(out.negative);

        // h :- h, ... derives nothing new; drop it.
        if (std::binary_search(out.positive.begin(), out.positive.end(), out.head)) return;

        std::string key = std::to_string(out.head) + (out.choice ? "c" : "n");
        for (AtomId a : out.positive) key += "+" + std::to_string(a);
        for (AtomId a : out.negative) key += "-" + std::to_string(a);
        if (!seen_rules_.insert(key).second) return;

        out_.rules.push_back(std::move(out));
    }

    const PlpProgram& plp_;
    std::vector<RuleAst> rules_;  // after fact range expansion
    std::vector<Term> universe_;
    std::unordered_set<std::string> seen_constants_;
    std::unordered_set<std::string> seen_rules_;
    GroundProgram out_;
};

}  // namespace detail

/// Instantiates all rules over the program's constants, evaluating
/// comparison literals away and interning atoms into dense ids.
inline GroundProgram ground(const PlpProgram& plp) {
    return detail::Grounder(plp).run();
}

struct DisjointViolation {
    AtomId atom;
    std::string rule;
};

/// Probabilistic-fact atoms must not head any rule of the ground program.
inline std::vector<DisjointViolation> disjoint_violations(const GroundProgram& prog) {
    std::vector<DisjointViolation> out;
    for (const auto& r : prog.rules)
        if (prog.atoms.kind(r.head) == AtomKind::ProbFact)
            out.push_back({r.head, prog.rule_to_string(r)});
    return out;
}

inline void check_disjoint_condition(const GroundProgram& prog) {
    auto violations = disjoint_violations(prog);
    if (violations.empty()) return;
    std::string detail;
    for (const auto& v : violations) {
        if (!detail.empty()) detail += "; ";
        detail += "'" + prog.atoms.name(v.atom) + "' is the head of '" + v.rule + "'";
    }
    throw DisjointConditionError(detail);
}

}  // namespace caspr
