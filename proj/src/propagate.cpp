#include "clausal/propagate.hpp"

#include <algorithm>
#include <deque>

namespace clausal {

UnitPropagator::UnitPropagator(const Cnf& gamma) : gamma_(gamma) {
    occ_pos_.resize(gamma.num_vars() + 1);
    occ_neg_.resize(gamma.num_vars() + 1);
    for (std::size_t ci = 0; ci < gamma.size(); ++ci) {
        for (Lit l : gamma[ci]) {
            if (l.positive())
                occ_pos_[l.var()].push_back(ci);
            else
                occ_neg_[l.var()].push_back(ci);
        }
    }
    canonical_rank_.resize(gamma.size());
    std::vector<std::size_t> order = gamma.canonical_order();
    for (std::size_t rank = 0; rank < order.size(); ++rank) canonical_rank_[order[rank]] = rank;
    state_.resize(gamma.size());
}

void UnitPropagator::touch(std::size_t ci) {
    ClauseState& s = state_[ci];
    if (s.epoch != epoch_) {
        s.epoch = epoch_;
        s.unfalsified = static_cast<int>(gamma_[ci].size());
        s.satisfied = false;
    }
}

UpResult UnitPropagator::run(const PartialAssignment& assumptions) {
    ++epoch_;
    UpResult res;
    res.assignment = assumptions;

    // A clause that is empty to begin with is an immediate conflict.
    for (std::size_t ci = 0; ci < gamma_.size(); ++ci) {
        if (gamma_[ci].empty()) {
            res.conflict = true;
            res.conflict_index = ci;
            return res;
        }
    }

    std::deque<std::size_t> queue;

    // Applies one batch of newly assigned literals: marks satisfied
    // clauses, decrements unfalsified counts, reports the canonically
    // first falsified clause, and appends newly unit clauses to the
    // queue in canonical order. Returns false on conflict.
    auto apply_batch = [&](const std::vector<Lit>& batch) {
        std::vector<std::size_t> hit_zero, hit_one;
        for (Lit l : batch) {
            if (l.var() > gamma_.num_vars()) continue;  // foreign variable
            for (std::size_t ci : occ_pos_[l.var()]) touch(ci);
            for (std::size_t ci : occ_neg_[l.var()]) touch(ci);
            auto& sat_list = l.positive() ? occ_pos_[l.var()] : occ_neg_[l.var()];
            auto& fal_list = l.positive() ? occ_neg_[l.var()] : occ_pos_[l.var()];
            for (std::size_t ci : sat_list) state_[ci].satisfied = true;
            for (std::size_t ci : fal_list) {
                int left = --state_[ci].unfalsified;
                if (left == 0) hit_zero.push_back(ci);
                if (left == 1) hit_one.push_back(ci);
            }
        }
        if (!hit_zero.empty()) {
            std::size_t best = hit_zero[0];
            for (std::size_t ci : hit_zero)
                if (canonical_rank_[ci] < canonical_rank_[best]) best = ci;
            res.conflict = true;
            res.conflict_index = best;
            return false;
        }
        hit_one.erase(std::remove_if(hit_one.begin(), hit_one.end(),
                                     [&](std::size_t ci) { return state_[ci].satisfied; }),
                      hit_one.end());
        std::sort(hit_one.begin(), hit_one.end(), [&](std::size_t a, std::size_t b) {
            return canonical_rank_[a] < canonical_rank_[b];
        });
        for (std::size_t ci : hit_one) queue.push_back(ci);
        return true;
    };

    if (!apply_batch(assumptions.literals())) return res;

    // Seed with the input clauses that are unit outright, canonically
    // ordered, ahead of anything the assumption batch appended.
    {
        std::vector<std::size_t> units;
        for (std::size_t ci = 0; ci < gamma_.size(); ++ci)
            if (gamma_[ci].size() == 1) units.push_back(ci);
        std::sort(units.begin(), units.end(), [&](std::size_t a, std::size_t b) {
            return canonical_rank_[a] < canonical_rank_[b];
        });
        for (auto it = units.rbegin(); it != units.rend(); ++it) queue.push_front(*it);
    }

    while (!queue.empty()) {
        std::size_t ci = queue.front();
        queue.pop_front();
        Lit unit(1);
        bool satisfied = false, found = false;
        for (Lit l : gamma_[ci]) {
            auto v = res.assignment.value(l);
            if (v == std::optional<bool>(true)) {
                satisfied = true;
                break;
            }
            if (!v) {
                unit = l;
                found = true;
            }
        }
        if (satisfied) continue;
        if (!found) continue;  // fully falsified: the batch that did it already reported
        res.assignment.assign(unit);
        res.trace.push_back({unit, ci});
        if (!apply_batch({unit})) return res;
    }
    return res;
}

UpResult propagate_units(const Cnf& gamma, const PartialAssignment& assumptions) {
    UnitPropagator up(gamma);
    return up.run(assumptions);
}

UpResult propagate_units(const Cnf& gamma) { return propagate_units(gamma, PartialAssignment()); }

bool up_refutes(const Cnf& gamma, const PartialAssignment& assumptions) {
    return propagate_units(gamma, assumptions).conflict;
}

bool up_refutes(const Cnf& gamma) { return up_refutes(gamma, PartialAssignment()); }

bool up_derives(const Cnf& gamma, const Clause& c) {
    return up_refutes(gamma, PartialAssignment::negating(c));
}

bool up_derives(const Cnf& gamma, std::span<const Lit> lits) {
    auto c = normalize_clause(lits);
    if (!c) return true;  // negating a tautology yields complementary units
    return up_derives(gamma, *c);
}

std::vector<Clause> InputDerivation::derived_sequence() const {
    std::vector<Clause> out;
    Clause cur = leaf;
    if (weaken_to) {
        if (!subsumes(leaf, *weaken_to)) throw DomainError("weakening target does not contain leaf");
        cur = *weaken_to;
        out.push_back(cur);
    }
    for (const InputResStep& s : steps) {
        auto r = resolve_on(cur, s.side, s.pivot);
        if (!r) throw DomainError("tautological resolvent in input derivation");
        cur = *r;
        out.push_back(cur);
    }
    return out;
}

Clause InputDerivation::final_clause() const {
    auto seq = derived_sequence();
    return seq.empty() ? leaf : seq.back();
}

InputDerivation extract_input_resolution(const Cnf& gamma, const Clause& c) {
    if (gamma.contains(c)) return {c, std::nullopt, {}};

    UpResult up = propagate_units(gamma, PartialAssignment::negating(c));
    if (!up.conflict)
        throw NotUpDerivable(
            "clause is not unit-propagation derivable from the formula");

    // Conflict-clause literals are all false under the negation of c
    // plus the propagated units, so each is either a literal of c or
    // the negation of a trace unit; in particular the union with c is
    // never tautological and the trace pivots avoid var(c). Attaching
    // c up front and cancelling the unit negations in reverse trace
    // order therefore ends at exactly c, with every derived clause
    // containing c.
    const Clause& conflict = gamma[*up.conflict_index];
    auto widened = clause_union(conflict, c);
    if (!widened)
        throw std::logic_error("conflict clause tautologizes with the goal");

    InputDerivation d;
    d.leaf = conflict;
    if (*widened != conflict) d.weaken_to = *widened;

    Clause cur = std::move(*widened);
    for (auto it = up.trace.rbegin(); it != up.trace.rend(); ++it) {
        Lit blocker = it->unit.negated();
        if (!cur.contains(blocker)) continue;
        const Clause& side = gamma[it->antecedent];
        auto r = resolve_on(cur, side, it->unit.var());
        if (!r) throw std::logic_error("extraction produced a tautological resolvent");
        cur = std::move(*r);
        d.steps.push_back({side, it->unit.var()});
    }
    if (cur != c) throw std::logic_error("extraction did not reach the goal clause");
    return d;
}

}  // namespace clausal
