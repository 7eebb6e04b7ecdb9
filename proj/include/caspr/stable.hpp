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

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "caspr/bitset.hpp"
#include "caspr/errors.hpp"
#include "caspr/ground.hpp"

namespace caspr {

struct AnswerSetCollection {
    std::vector<Interpretation> sets;  // hidden complement bits stripped
    bool complete = true;              // false when enumeration was truncated
};

/// Rewrites every choice rule {h} :- B into the pair
///   h :- B, not c.    c :- B, not h.
/// over the hidden complement atom c registered at grounding time.
inline GroundProgram expand_choices(const GroundProgram& prog) {
    GroundProgram out;
    out.atoms = prog.atoms;
    out.fact_atoms = prog.fact_atoms;
    for (const auto& r : prog.rules) {
        if (!r.choice) {
            out.rules.push_back(r);
            continue;
        }
        GroundRule on;
        on.head = r.head;
        on.positive = r.positive;
        on.negative = r.negative;
        on.negative.push_back(r.complement);
        GroundRule off;
        off.head = r.complement;
        off.positive = r.positive;
        off.negative = r.negative;
        off.negative.push_back(r.head);
        out.rules.push_back(std::move(on));
        out.rules.push_back(std::move(off));
    }
    return out;
}

/// The reduct with respect to I: drop every rule blocked by a negative
/// literal whose atom is in I, strip negation from the rest. Choice rules
/// are expanded first, so the result is always definite.
inline GroundProgram reduct(const GroundProgram& prog, const Interpretation& interp) {
    GroundProgram expanded = expand_choices(prog);
    GroundProgram out;
    out.atoms = expanded.atoms;
    out.fact_atoms = expanded.fact_atoms;
    for (auto& r : expanded.rules) {
        bool blocked = false;
        for (AtomId a : r.negative)
            if (interp.test(a)) {
                blocked = true;
                break;
            }
        if (blocked) continue;
        r.negative.clear();
        out.rules.push_back(std::move(r));
    }
    return out;
}

/// Least fixpoint of the immediate-consequence step of a definite program.
inline Interpretation least_model(const GroundProgram& prog) {
    for (const auto& r : prog.rules)
        if (r.choice || !r.negative.empty())
            throw Error(Error::Category::Program, "least_model requires a definite program");

    Interpretation model(prog.width());
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : prog.rules) {
            if (model.test(r.head)) continue;
            bool satisfied = true;
            for (AtomId a : r.positive)
                if (!model.test(a)) {
                    satisfied = false;
                    break;
                }
            if (satisfied) {
                model.set(r.head);
                changed = true;
            }
        }
    }
    return model;
}

inline Interpretation strip_hidden(const Interpretation& interp, const AtomTable& atoms) {
    Interpretation out = interp;
    for (AtomId a = 0; a < atoms.size(); ++a)
        if (atoms.hidden(a)) out.reset(a);
    return out;
}

/// Re-derives the hidden complement bits of a visible answer set: the
/// complement of a choice atom holds exactly when some ground instance of
/// the choice rule has a satisfied body while the atom itself is out.
inline Interpretation complete_hidden(const GroundProgram& prog, const Interpretation& visible) {
    Interpretation out = visible;
    for (const auto& r : prog.rules) {
        if (!r.choice) continue;
        if (visible.test(r.head)) continue;
        bool body_holds = true;
        for (AtomId a : r.positive)
            if (!visible.test(a)) {
                body_holds = false;
                break;
            }
        for (AtomId a : r.negative)
            if (visible.test(a)) {
                body_holds = false;
                break;
            }
        if (body_holds) out.set(r.complement);
    }
    return out;
}

/// Read-only view of one model during enumeration; valid only inside the
/// visitor invocation.
class ModelView {
public:
    ModelView(const std::int8_t* assignment, const std::uint8_t* derived, std::size_t width)
        : assignment_(assignment), derived_(derived), width_(width) {}

    bool test(AtomId a) const { return assignment_ ? assignment_[a] == 1 : derived_[a] != 0; }
    std::size_t width() const { return width_; }

    Interpretation to_interpretation(const AtomTable& atoms) const {
        Interpretation out(width_);
        for (AtomId a = 0; a < width_; ++a)
            if (test(a) && !atoms.hidden(a)) out.set(a);
        return out;
    }

private:
    const std::int8_t* assignment_;
    const std::uint8_t* derived_;
    std::size_t width_;
};

/// Answer-set search over one ground program. Holds all per-enumeration
/// scratch, so construct one per thread; a constructed Solver can run any
/// number of enumerations with different injected facts.
///
/// Search: propagate forced consequences under a three-valued assignment
/// (satisfied bodies force heads, atoms with no remaining potentially
/// applicable rule are unsupported and forced false), branch on the lowest
/// unassigned atom (false first), and verify each total assignment A with
/// the stability check A = LHM(P^A). Propagation never prunes a stable
/// model: both steps hold in every answer set.
class Solver {
public:
    explicit Solver(const GroundProgram& prog) : prog_(prog) { build(); }

    std::size_t atom_count() const { return n_atoms_; }

    /// Visits every answer set of prog + facts in deterministic order.
    /// The visitor returns false to stop early; enumerate returns true when
    /// the search ran to exhaustion.
    template <typename Visitor>
    bool enumerate(std::span<const AtomId> facts, Visitor&& visit) {
        if (definite_) return enumerate_definite(facts, visit);

        val_.assign(n_atoms_, 0);
        std::memcpy(pos_remaining_.data(), pos_size_.data(), pos_size_.size() * sizeof(std::int32_t));
        std::memcpy(neg_remaining_.data(), neg_size_.data(), neg_size_.size() * sizeof(std::int32_t));
        std::memcpy(support_.data(), support_init_.data(), support_init_.size() * sizeof(std::int32_t));
        dead_.assign(rule_count_, 0);
        trail_.clear();
        pending_.clear();
        injected_.assign(n_atoms_, 0);

        for (AtomId a : facts) {
            ++support_[a];
            injected_[a] = 1;
            pending_.push_back({a, 1});
        }
        for (std::size_t r = 0; r < rule_count_; ++r)
            if (pos_size_[r] == 0 && neg_size_[r] == 0) pending_.push_back({head_[r], 1});
        for (AtomId a = 0; a < n_atoms_; ++a)
            if (support_[a] == 0) pending_.push_back({a, 2});

        if (!propagate()) return true;  // exhausted: no answer set at all
        bool stopped = false;
        search(0, visit, stopped);
        return !stopped;
    }

private:
    struct Trail {
        enum Kind : std::uint8_t { Assign, Kill, PosDec, NegDec };
        Kind kind;
        std::uint32_t index;
    };

    void build() {
        n_atoms_ = static_cast<AtomId>(prog_.atoms.size());
        GroundProgram expanded = expand_choices(prog_);
        rule_count_ = expanded.rules.size();

        head_.reserve(rule_count_);
        pos_size_.reserve(rule_count_);
        neg_size_.reserve(rule_count_);
        std::vector<std::vector<std::uint32_t>> pos_occ(n_atoms_), neg_occ(n_atoms_);
        pos_flat_.clear();
        neg_flat_.clear();
        pos_begin_.assign(rule_count_ + 1, 0);
        neg_begin_.assign(rule_count_ + 1, 0);
        support_init_.assign(n_atoms_, 0);
        definite_ = true;

        for (std::size_t r = 0; r < rule_count_; ++r) {
            const auto& rule = expanded.rules[r];
            head_.push_back(rule.head);
            ++support_init_[rule.head];
            pos_begin_[r] = static_cast<std::uint32_t>(pos_flat_.size());
            for (AtomId a : rule.positive) {
                pos_flat_.push_back(a);
                pos_occ[a].push_back(static_cast<std::uint32_t>(r));
            }
            neg_begin_[r] = static_cast<std::uint32_t>(neg_flat_.size());
            for (AtomId a : rule.negative) {
                neg_flat_.push_back(a);
                neg_occ[a].push_back(static_cast<std::uint32_t>(r));
            }
            pos_size_.push_back(static_cast<std::int32_t>(rule.positive.size()));
            neg_size_.push_back(static_cast<std::int32_t>(rule.negative.size()));
            if (!rule.negative.empty()) definite_ = false;
        }
        pos_begin_[rule_count_] = static_cast<std::uint32_t>(pos_flat_.size());
        neg_begin_[rule_count_] = static_cast<std::uint32_t>(neg_flat_.size());

        flatten_occ(pos_occ, pos_occ_flat_, pos_occ_begin_);
        flatten_occ(neg_occ, neg_occ_flat_, neg_occ_begin_);

        pos_remaining_.resize(rule_count_);
        neg_remaining_.resize(rule_count_);
        support_.resize(n_atoms_);
        lm_pos_remaining_.resize(rule_count_);
        lm_alive_.resize(rule_count_);
        lm_derived_.resize(n_atoms_);
    }

    void flatten_occ(const std::vector<std::vector<std::uint32_t>>& occ,
                     std::vector<std::uint32_t>& flat, std::vector<std::uint32_t>& begin) {
        begin.assign(n_atoms_ + 1, 0);
        flat.clear();
        for (AtomId a = 0; a < n_atoms_; ++a) {
            begin[a] = static_cast<std::uint32_t>(flat.size());
            flat.insert(flat.end(), occ[a].begin(), occ[a].end());
        }
        begin[n_atoms_] = static_cast<std::uint32_t>(flat.size());
    }

    // --- three-valued propagation -----------------------------------------

    bool propagate() {
        while (!pending_.empty()) {
            auto [atom, value] = pending_.back();
            pending_.pop_back();
            if (!apply(atom, value)) {
                pending_.clear();
                return false;
            }
        }
        return true;
    }

    bool apply(AtomId atom, std::int8_t value) {
        if (val_[atom] != 0) return val_[atom] == value;
        val_[atom] = value;
        trail_.push_back({Trail::Assign, atom});
        if (value == 1) {
            for (std::uint32_t i = pos_occ_begin_[atom]; i < pos_occ_begin_[atom + 1]; ++i) {
                std::uint32_t r = pos_occ_flat_[i];
                if (dead_[r]) continue;
                --pos_remaining_[r];
                trail_.push_back({Trail::PosDec, r});
                if (pos_remaining_[r] == 0 && neg_remaining_[r] == 0) pending_.push_back({head_[r], 1});
            }
            for (std::uint32_t i = neg_occ_begin_[atom]; i < neg_occ_begin_[atom + 1]; ++i)
                if (!kill(neg_occ_flat_[i])) return false;
        } else {
            for (std::uint32_t i = pos_occ_begin_[atom]; i < pos_occ_begin_[atom + 1]; ++i)
                if (!kill(pos_occ_flat_[i])) return false;
            for (std::uint32_t i = neg_occ_begin_[atom]; i < neg_occ_begin_[atom + 1]; ++i) {
                std::uint32_t r = neg_occ_flat_[i];
                if (dead_[r]) continue;
                --neg_remaining_[r];
                trail_.push_back({Trail::NegDec, r});
                if (pos_remaining_[r] == 0 && neg_remaining_[r] == 0) pending_.push_back({head_[r], 1});
            }
        }
        return true;
    }

    bool kill(std::uint32_t r) {
        if (dead_[r]) return true;
        dead_[r] = 1;
        trail_.push_back({Trail::Kill, r});
        AtomId h = head_[r];
        if (--support_[h] == 0) {
            if (val_[h] == 1) return false;  // true atom lost its last support
            if (val_[h] == 0) pending_.push_back({h, 2});
        }
        return true;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            Trail t = trail_.back();
            trail_.pop_back();
            switch (t.kind) {
                case Trail::Assign: val_[t.index] = 0; break;
                case Trail::Kill:
                    dead_[t.index] = 0;
                    ++support_[head_[t.index]];
                    break;
                case Trail::PosDec: ++pos_remaining_[t.index]; break;
                case Trail::NegDec: ++neg_remaining_[t.index]; break;
            }
        }
    }

    // --- search ------------------------------------------------------------

    template <typename Visitor>
    bool search(AtomId scan_from, Visitor&& visit, bool& stopped) {
        AtomId branch = n_atoms_;
        for (AtomId a = scan_from; a < n_atoms_; ++a)
            if (val_[a] == 0) {
                branch = a;
                break;
            }
        if (branch == n_atoms_) {
            if (!stable()) return true;
            ModelView view(val_.data(), nullptr, n_atoms_);
            if (!visit(view)) {
                stopped = true;
                return false;
            }
            return true;
        }

        for (std::int8_t value : {std::int8_t{2}, std::int8_t{1}}) {
            std::size_t mark = trail_.size();
            pending_.push_back({branch, value});
            if (propagate()) {
                if (!search(branch + 1, visit, stopped)) {
                    undo_to(mark);
                    return false;
                }
            }
            undo_to(mark);
        }
        return true;
    }

    // Stability check for the total assignment in val_: the least model of
    // the reduct (with injected facts) must equal the true atoms exactly.
    bool stable() {
        std::memcpy(lm_pos_remaining_.data(), pos_size_.data(), pos_size_.size() * sizeof(std::int32_t));
        std::memset(lm_derived_.data(), 0, lm_derived_.size());
        lm_queue_.clear();

        for (std::size_t r = 0; r < rule_count_; ++r) {
            bool alive = true;
            for (std::uint32_t i = neg_begin_[r]; i < neg_begin_[r + 1]; ++i)
                if (val_[neg_flat_[i]] == 1) {
                    alive = false;
                    break;
                }
            lm_alive_[r] = alive;
            if (alive && pos_size_[r] == 0) lm_queue_.push_back(head_[r]);
        }
        std::size_t derived_count = 0;
        std::size_t true_count = 0;
        for (AtomId a = 0; a < n_atoms_; ++a) {
            if (val_[a] == 1) ++true_count;
            if (injected_[a]) lm_queue_.push_back(a);
        }

        while (!lm_queue_.empty()) {
            AtomId a = lm_queue_.back();
            lm_queue_.pop_back();
            if (lm_derived_[a]) continue;
            if (val_[a] != 1) return false;  // LHM derives an atom outside A
            lm_derived_[a] = 1;
            ++derived_count;
            for (std::uint32_t i = pos_occ_begin_[a]; i < pos_occ_begin_[a + 1]; ++i) {
                std::uint32_t r = pos_occ_flat_[i];
                if (!lm_alive_[r]) continue;
                if (--lm_pos_remaining_[r] == 0) lm_queue_.push_back(head_[r]);
            }
        }
        return derived_count == true_count;
    }

    // --- definite fast path --------------------------------------------------

    template <typename Visitor>
    bool enumerate_definite(std::span<const AtomId> facts, Visitor&& visit) {
        std::memcpy(lm_pos_remaining_.data(), pos_size_.data(), pos_size_.size() * sizeof(std::int32_t));
        std::memset(lm_derived_.data(), 0, lm_derived_.size());
        lm_queue_.clear();
        for (AtomId a : facts) lm_queue_.push_back(a);
        for (std::size_t r = 0; r < rule_count_; ++r)
            if (pos_size_[r] == 0) lm_queue_.push_back(head_[r]);

        while (!lm_queue_.empty()) {
            AtomId a = lm_queue_.back();
            lm_queue_.pop_back();
            if (lm_derived_[a]) continue;
            lm_derived_[a] = 1;
            for (std::uint32_t i = pos_occ_begin_[a]; i < pos_occ_begin_[a + 1]; ++i) {
                std::uint32_t r = pos_occ_flat_[i];
                if (--lm_pos_remaining_[r] == 0) lm_queue_.push_back(head_[r]);
            }
        }
        ModelView view(nullptr, lm_derived_.data(), n_atoms_);
        return visit(view);
    }

    const GroundProgram& prog_;
    AtomId n_atoms_ = 0;
    std::size_t rule_count_ = 0;
    bool definite_ = true;

    std::vector<AtomId> head_;
    std::vector<std::int32_t> pos_size_, neg_size_;
    std::vector<AtomId> pos_flat_, neg_flat_;
    std::vector<std::uint32_t> pos_begin_, neg_begin_;
    std::vector<std::uint32_t> pos_occ_flat_, pos_occ_begin_;
    std::vector<std::uint32_t> neg_occ_flat_, neg_occ_begin_;
    std::vector<std::int32_t> support_init_;

    std::vector<std::int8_t> val_;
    std::vector<std::int32_t> pos_remaining_, neg_remaining_, support_;
    std::vector<std::uint8_t> dead_, injected_;
    std::vector<Trail> trail_;
    std::vector<std::pair<AtomId, std::int8_t>> pending_;

    std::vector<std::int32_t> lm_pos_remaining_;
    std::vector<std::uint8_t> lm_alive_, lm_derived_;
    std::vector<AtomId> lm_queue_;
};

/// All answer sets of prog + facts, hidden atoms stripped, in deterministic
/// enumeration order (lexicographic over branch decisions, false first).
inline AnswerSetCollection answer_sets(const GroundProgram& prog, std::span<const AtomId> facts = {},
                                       std::size_t limit = SIZE_MAX) {
    Solver solver(prog);
    AnswerSetCollection out;
    out.complete = solver.enumerate(facts, [&](const ModelView& view) {
        out.sets.push_back(view.to_interpretation(prog.atoms));
        return out.sets.size() < limit;
    });
    return out;
}

/// Test oracle: checks I = LHM(P^I) for every subset of the atom universe.
inline AnswerSetCollection brute_force_answer_sets(const GroundProgram& prog,
                                                   std::span<const AtomId> facts = {}) {
    std::size_t n = prog.width();
    if (n > 20)
        throw SizeError("brute-force enumeration over " + std::to_string(n) + " atoms (max 20)");

    GroundProgram with_facts = expand_choices(prog);
    for (AtomId a : facts) {
        GroundRule fact;
        fact.head = a;
        with_facts.rules.push_back(fact);
    }

    AnswerSetCollection out;
    Interpretation candidate(n), model(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        candidate.clear();
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) candidate.set(i);

        // Least model of the reduct w.r.t. the candidate, by naive iteration.
        model.clear();
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& r : with_facts.rules) {
                if (model.test(r.head)) continue;
                bool applicable = true;
                for (AtomId a : r.negative)
                    if (candidate.test(a)) {
                        applicable = false;
                        break;
                    }
                if (applicable)
                    for (AtomId a : r.positive)
                        if (!model.test(a)) {
                            applicable = false;
                            break;
                        }
                if (applicable) {
                    model.set(r.head);
                    changed = true;
                }
            }
        }
        if (model == candidate) out.sets.push_back(strip_hidden(candidate, prog.atoms));
    }
    return out;
}

struct StratificationResult {
    bool stratified = false;
    std::vector<int> strata;  // per atom id; empty when not stratified
};

/// True when the atom dependency graph admits a level mapping with no
/// negative edge inside a strongly connected component. Programs with
/// choice rules count as non-stratified.
inline StratificationResult is_stratified(const GroundProgram& prog) {
    for (const auto& r : prog.rules)
        if (r.choice) return {false, {}};

    std::size_t n = prog.atoms.size();
    struct Edge {
        AtomId from, to;  // head depends on body atom
        bool negative;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<AtomId>> adjacency(n);
    for (const auto& r : prog.rules) {
        for (AtomId a : r.positive) {
            edges.push_back({r.head, a, false});
            adjacency[r.head].push_back(a);
        }
        for (AtomId a : r.negative) {
            edges.push_back({r.head, a, true});
            adjacency[r.head].push_back(a);
        }
    }

    // Iterative Tarjan; components come out children-first, so component
    // ids increase in reverse topological order.
    std::vector<int> index(n, -1), lowlink(n, 0), component(n, -1);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<AtomId> stack;
    int next_index = 0, component_count = 0;

    struct Frame {
        AtomId atom;
        std::size_t edge;
    };
    std::vector<Frame> frames;
    for (AtomId root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        frames.push_back({root, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            AtomId v = f.atom;
            if (f.edge == 0) {
                index[v] = lowlink[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.edge < adjacency[v].size()) {
                AtomId w = adjacency[v][f.edge++];
                if (index[w] == -1) {
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
            }
            if (descended) continue;
            if (lowlink[v] == index[v]) {
                for (;;) {
                    AtomId w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    component[w] = component_count;
                    if (w == v) break;
                }
                ++component_count;
            }
            frames.pop_back();
            if (!frames.empty())
                lowlink[frames.back().atom] = std::min(lowlink[frames.back().atom], lowlink[v]);
        }
    }

    for (const auto& e : edges)
        if (e.negative && component[e.from] == component[e.to]) return {false, {}};

    // Level of a component: longest chain of negative edges below it.
    // Dependencies have smaller component ids, so one increasing sweep
    // reaches the fixpoint.
    std::vector<int> level(component_count, 0);
    std::sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
        return component[a.from] < component[b.from];
    });
    for (const auto& e : edges) {
        int need = level[component[e.to]] + (e.negative ? 1 : 0);
        level[component[e.from]] = std::max(level[component[e.from]], need);
    }

    StratificationResult result;
    result.stratified = true;
    result.strata.resize(n);
    for (AtomId a = 0; a < n; ++a) result.strata[a] = level[component[a]];
    return result;
}

}  // namespace caspr
