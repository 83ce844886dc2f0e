#pragma once

// Constructive clause-addition translations: the partial simulation of
// resolution-asymmetric-tautology additions by blocked-clause
// additions (nonblocking CNFs, minimal satisfying covers, per-step
// derivations, whole-proof translation), and the proof-restriction
// translator that turns a rat refutation of the H transformation back
// into a rat refutation of the base formula.

#include <vector>

#include "clausal/builders.hpp"
#include "clausal/core.hpp"
#include "clausal/proof.hpp"

namespace clausal {

// Thrown by refute_resolution when the formula has a model.
struct SatisfiableInput : DomainError {
    using DomainError::DomainError;
};

// Thrown by simulate_rat_step when the clause fails the rat check.
struct NotARat : DomainError {
    using DomainError::DomainError;
};

// Thrown by nonblocking_cnf when the pivot is not in the clause.
struct PivotNotInClause : DomainError {
    using DomainError::DomainError;
};

// Thrown by restrict_h_rat_proof when a step fits none of the
// restriction cases; unreachable for verified inputs over H(Γ).
struct StepOutsideLemmaCases : DomainError {
    using DomainError::DomainError;
};

// Size accounting for one simulated rat addition.
//
// The emitted derivation consists of: for every member of the
// nonblocking CNF Σ, an input-resolution derivation of its union with
// the added clause (at most n + 1 steps each, n the occurring-variable
// count of the premise formula); when Σ is satisfiable, one blocked
// addition per member of the minimal cover μ(Σ); and one resolution
// per step of a refutation of Σ (respectively Σ ∪ μ). Counting CNFs
// (one more than steps), the total is bounded by
// sigma_size·(n + 1) + mu_size + refutation_size.
struct SimulationReport {
    std::size_t sigma_size = 0;       // |Σ|
    std::size_t mu_size = 0;          // |μ(Σ)|, 0 when Σ is unsatisfiable
    std::size_t refutation_size = 0;  // CNF count of the internal refutation
    std::size_t n = 0;                // occurring variables of the premise
    std::size_t bound = 0;            // sigma_size·(n+1) + mu_size + refutation_size
    std::size_t actual = 0;           // CNF count of the emitted derivation

    bool operator==(const SimulationReport&) const = default;
};

// The nonblocking CNF of c on pivot p (p ∈ c, PivotNotInClause
// otherwise) with respect to gamma:
//   { D ∖ C : D ∈ proj_{¬p}(Γ), (C ∖ {p}) ∪ D nontautological }.
// Shares no variables with c; clauses in canonical order.
Cnf nonblocking_cnf(const Clause& c, Lit p, const Cnf& gamma);

// μ(Γ) = { E : the assignment falsifying E is a minimal model of Γ },
// i.e. the negations of the subset-minimal satisfying partial
// assignments over Γ's occurring variables. An antichain, in canonical
// order; empty when Γ is unsatisfiable; {⊥} when Γ has no clauses.
// Requires at most 20 occurring variables (TooManyVariables).
Cnf minimal_cover(const Cnf& gamma);

// A weakening-free res refutation of gamma, found by canonical-order
// saturation and pruned to the ancestors of the empty clause. Requires
// gamma unsatisfiable (SatisfiableInput) and at most 25 occurring
// variables (TooManyVariables, via the model check).
Proof refute_resolution(const Cnf& gamma);

// One simulated rat addition: a bc derivation from gamma whose last
// step derives exactly c, in which every derived clause is subsumed by
// gamma ∪ {c}. Requires is_rat(c, p, gamma) (NotARat). Σ = the
// nonblocking CNF of c on p; when Σ is unsatisfiable the derivation is
// pure resolution, otherwise the members of c ∨ μ(Σ) enter as blocked
// additions before the refutation of Σ ∪ μ(Σ) is replayed under c.
std::pair<Proof, SimulationReport> simulate_rat_step(const Clause& c, Lit p,
                                                     const Cnf& gamma);

struct TranslationResult {
    Proof proof;  // bc proof over the same inputs
    std::vector<SimulationReport> reports;  // one per replaced rat addition
};

// Replaces every rat addition of a verified rat proof (InputNotVerified
// otherwise) by its simulated bc derivation against the accumulated
// premise at that point; resolution, weakening, and blocked additions
// are kept as they are. The result is re-checked before returning.
TranslationResult translate_rat_to_bc(const Cnf& cnf, const Proof& proof);

// Restriction of a verified res/bc/rat proof by a partial assignment:
// a proof of restrict_cnf(cnf, alpha) in the same system deriving the
// restrictions of all unsatisfied derived clauses. Steps whose result
// is satisfied by alpha are dropped; resolutions on an assigned pivot
// collapse to weakenings of the surviving premise; additions whose
// pivot is falsified by alpha are re-derived from the accumulated
// restricted formula by input resolution (the pivot clause pair being
// satisfied, unit propagation covers them); other additions restrict
// in place. Each surviving step expands into at most
// |occurring vars of restrict_cnf(cnf, alpha)| + 1 steps
// (StepOutsideLemmaCases when a case analysis fails, unreachable for
// verified inputs).
Proof restrict_proof(const Cnf& cnf, const PartialAssignment& alpha,
                     const Proof& proof);

// Specialization to the H transformation: given a verified rat proof
// of rebuild_h(gamma, pairs) (InputNotVerified otherwise), restrict by
// the assignment sending every pair variable (x_i and y_i) to true —
// under it H(Γ) restricts to exactly Γ — producing a verified rat
// proof of gamma of size at most
// proof_size(proof) · (|occurring vars of Γ| + 1).
Proof restrict_h_rat_proof(const Cnf& gamma, const PairAllocation& pairs,
                           const Proof& proof);

}  // namespace clausal
