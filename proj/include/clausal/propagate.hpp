#pragma once

// Unit propagation and input-resolution extraction.
//
// Propagation is deterministic: assumptions are assigned first, then a
// FIFO queue is seeded with the unit input clauses in canonical clause
// order; every assignment triggers one batch scan in which a conflict
// is reported at the first falsified clause in canonical order, and
// clauses that became unit are appended to the queue in canonical
// order. The final assignment and conflict status are order-independent
// facts about the formula; the trace fields are pinned by the recipe
// above so golden tests can rely on them.

#include "clausal/core.hpp"

namespace clausal {

struct UpResult {
    struct Step {
        Lit unit;                // the propagated literal
        std::size_t antecedent;  // index of the clause that became unit
    };

    bool conflict = false;
    // Index of the falsified clause, present iff conflict.
    std::optional<std::size_t> conflict_index;
    // Assumptions plus every propagated literal at stop time.
    PartialAssignment assignment;
    // Propagated literals with their antecedent clauses, in order
    // (assumptions excluded).
    std::vector<Step> trace;
};

// Reusable propagation engine over a fixed formula. Occurrence lists
// and the canonical clause ranking are built once; run() may be called
// any number of times with different assumptions.
class UnitPropagator {
public:
    explicit UnitPropagator(const Cnf& gamma);

    UpResult run(const PartialAssignment& assumptions);

private:
    struct ClauseState {
        std::uint32_t epoch = 0;
        int unfalsified = 0;
        bool satisfied = false;
    };

    void touch(std::size_t ci);
    const Cnf& gamma_;
    std::vector<std::vector<std::size_t>> occ_pos_, occ_neg_;  // var -> clause indices
    std::vector<std::size_t> canonical_rank_;                  // clause index -> rank
    std::vector<ClauseState> state_;
    std::uint32_t epoch_ = 0;
};

// One-shot propagation.
UpResult propagate_units(const Cnf& gamma, const PartialAssignment& assumptions);
UpResult propagate_units(const Cnf& gamma);

// gamma (together with the assumptions, if given) propagates to a
// conflict.
bool up_refutes(const Cnf& gamma, const PartialAssignment& assumptions);
bool up_refutes(const Cnf& gamma);

// gamma |-1 c: gamma plus the negation of c propagates to a conflict.
// The literal-sequence overload also accepts tautological literal
// sets, for which the answer is always true (the negation already
// contains complementary units).
bool up_derives(const Cnf& gamma, const Clause& c);
bool up_derives(const Cnf& gamma, std::span<const Lit> lits);

// An input resolution derivation: a leaf taken from the formula, an
// optional weakening of the leaf, then a resolution chain whose side
// clauses are all taken from the formula.
struct InputResStep {
    Clause side;  // member of the formula the derivation was extracted from
    Var pivot;
};

struct InputDerivation {
    Clause leaf;
    std::optional<Clause> weaken_to;  // strict superset of leaf when present
    std::vector<InputResStep> steps;

    std::size_t step_count() const { return (weaken_to ? 1 : 0) + steps.size(); }

    // Clauses produced after the leaf, in order (weakening result first
    // when present, then each resolvent). Throws DomainError when a
    // step is ill-formed.
    std::vector<Clause> derived_sequence() const;
    Clause final_clause() const;
};

// Thrown by extract_input_resolution when gamma does not derive the
// clause by unit propagation.
struct NotUpDerivable : DomainError {
    using DomainError::DomainError;
};

// Extracts an input resolution derivation of c from gamma, given that
// gamma |-1 c (NotUpDerivable otherwise). The derivation ends exactly
// at c, every derived clause contains c (so the whole accumulated
// formula is subsumed by gamma plus c), and the step count is at most
// |occurring vars of gamma| whenever var(c) is contained in var(gamma)
// — one fewer than the clause count of the derivation — while foreign
// literals of c ride the initial weakening and may cost one extra
// step.
InputDerivation extract_input_resolution(const Cnf& gamma, const Clause& c);

}  // namespace clausal
