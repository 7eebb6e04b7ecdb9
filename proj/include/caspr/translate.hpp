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
#include <string>
#include <unordered_set>
#include <vector>

#include "caspr/ast.hpp"
#include "caspr/errors.hpp"

namespace caspr {

/// An independent Boolean random variable: a ground atom true with the given
/// probability. The index is the fact's bit position in every TotalChoice.
struct ProbabilisticFact {
    Atom atom;
    double probability = 0.0;
    std::size_t index = 0;
};

/// The split program form: plain/choice rules plus an ordered list of
/// probabilistic facts. Annotated heads are gone after translation.
struct PlpProgram {
    std::vector<RuleAst> logic_rules;
    std::vector<ProbabilisticFact> facts;
    std::vector<QueryAst> queries;
    std::size_t aux_counter = 0;
};

namespace detail {

constexpr double kDisjunctionSumTolerance = 1e-9;
constexpr double kResidualFloor = 1e-12;

inline Atom make_aux_atom(std::size_t counter) {
    Atom a;
    a.predicate = "__aux_" + std::to_string(counter);
    return a;
}

class Translator {
public:
    PlpProgram run(const ParsedProgram& parsed) {
        out_.queries = parsed.queries;
        for (const auto& rule : parsed.rules) {
            switch (rule.head_kind) {
                case HeadKind::Plain:
                case HeadKind::Choice:
                    out_.logic_rules.push_back(rule);
                    break;
                case HeadKind::Annotated:
                    if (rule.annotated.size() == 1 && rule.body.empty())
                        add_fact(rule.annotated[0].atom, rule.annotated[0].probability);
                    else if (rule.annotated.size() == 1)
                        translate_clause(rule);
                    else
                        translate_disjunction(rule);
                    break;
            }
        }
        out_.aux_counter = aux_counter_;
        return std::move(out_);
    }

private:
    void add_fact(const Atom& atom, double probability) {
        std::string key = to_string(atom);
        if (!seen_fact_atoms_.insert(key).second) throw DuplicateProbFactError(key);
        out_.facts.push_back({atom, probability, out_.facts.size()});
    }

    Atom fresh_aux(double probability) {
        Atom aux = make_aux_atom(++aux_counter_);
        add_fact(aux, probability);
        return aux;
    }

    // pr::p :- body.  becomes  pr::__aux_i.  plus  p :- body, __aux_i.
    void translate_clause(const RuleAst& rule) {
        Atom aux = fresh_aux(rule.annotated[0].probability);
        RuleAst generated;
        generated.head_kind = HeadKind::Plain;
        generated.head_atom = rule.annotated[0].atom;
        generated.body = rule.body;
        generated.body.push_back(Literal::positive(aux));
        generated.loc = rule.loc;
        out_.logic_rules.push_back(std::move(generated));
    }

    // pr1::p1;...;prk::pk [:- body].  becomes k guarded facts with
    // probabilities a_j = pr_j / (1 - sum_{i<j} pr_i) and rules
    // p_j :- body, __aux_j, not __aux_1, ..., not __aux_{j-1}.
    void translate_disjunction(const RuleAst& rule) {
        double sum = 0.0;
        for (const auto& aa : rule.annotated) sum += aa.probability;
        if (sum > 1.0 + kDisjunctionSumTolerance)
            throw DisjunctionSumError("probabilities sum to " + std::to_string(sum) + " > 1 in '" +
                                      to_string(rule) + "'");

        std::vector<Atom> guards;
        double residual = 1.0;
        for (const auto& aa : rule.annotated) {
            double fact_probability;
            if (aa.probability == 0.0) {
                fact_probability = 0.0;
            } else if (residual <= kResidualFloor) {
                throw DisjunctionSumError("probability mass exhausted before disjunct '" +
                                          to_string(aa.atom) + "' in '" + to_string(rule) + "'");
            } else {
                fact_probability = std::clamp(aa.probability / residual, 0.0, 1.0);
            }
            Atom aux = fresh_aux(fact_probability);

            RuleAst generated;
            generated.head_kind = HeadKind::Plain;
            generated.head_atom = aa.atom;
            generated.body = rule.body;
            generated.body.push_back(Literal::positive(aux));
            for (const auto& g : guards) generated.body.push_back(Literal::negative(g));
            generated.loc = rule.loc;
            out_.logic_rules.push_back(std::move(generated));

            guards.push_back(std::move(aux));
            residual -= aa.probability;
        }
    }

    PlpProgram out_;
    std::size_t aux_counter_ = 0;
    std::unordered_set<std::string> seen_fact_atoms_;
};

}  // namespace detail

/// Expands annotated rules into probabilistic facts plus guard rules.
/// Deterministic: the same input always yields the same auxiliary names and
/// fact ordering.
inline PlpProgram translate(const ParsedProgram& parsed) {
    return detail::Translator().run(parsed);
}

}  // namespace caspr
