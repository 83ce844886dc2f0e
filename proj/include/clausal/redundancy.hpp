#pragma once

// Clause redundancy notions: blocked clauses, resolution asymmetric
// tautologies, set-blocked clauses, the blocked-clause kernel, and
// blocked extensions.
//
// Throughout, a resolution partner of (c, p) in gamma is a clause of
// gamma containing the negation of the pivot p. A clause containing p
// is never its own partner (clauses are nontautological), so these
// predicates coincide for gamma and gamma minus {c}.

#include <functional>

#include "clausal/core.hpp"

namespace clausal {

// c is blocked on pivot p (p in c): every resolvent of c with a
// partner on p is tautological. Throws DomainError when p is not in c.
bool is_blocked(const Clause& c, Lit p, const Cnf& gamma);

// Equivalent characterization used for cross-checking: the assignment
// falsifying c minus {p} satisfies every clause of the projection of
// gamma onto the negated pivot.
bool is_blocked_by_projection(const Clause& c, Lit p, const Cnf& gamma);

// c has the resolution-asymmetric-tautology property on pivot p: every
// resolvent of c with a partner on p is tautological or derivable from
// gamma by unit propagation.
bool is_rat(const Clause& c, Lit p, const Cnf& gamma);

// c is set-blocked by the nonempty witness L (a subset of c): for
// every d in gamma that intersects the negation of L and misses L,
// (c minus L) union (d minus the negation of L) is tautological.
// Throws DomainError when the witness is empty or not a subset of c.
bool is_sbc(const Clause& c, const Clause& witness, const Cnf& gamma);

// Some literal of c blocks it.
bool has_blocked_literal(const Clause& c, const Cnf& gamma);

struct KernelResult {
    Cnf kernel;
    // The removed clauses, in removal order (a maximal blocked
    // sequence: each was blocked with respect to the set remaining at
    // its removal).
    std::vector<Clause> elimination_order;
};

// Greedy blocked-clause elimination until fixpoint. The default picks
// the canonically first blocked clause each round; the chooser variant
// exists so tests can confirm the fixpoint is order-independent (the
// chooser receives the currently blocked clauses in canonical order
// and returns an index into that list).
KernelResult kernel(const Cnf& gamma);
KernelResult kernel_choosing(const Cnf& gamma,
                             const std::function<std::size_t(const std::vector<Clause>&)>& choose);

// lambda is a blocked extension of gamma: adding it leaves the kernel
// unchanged, i.e. ker(gamma union lambda) = ker(gamma) as clause sets.
bool is_blocked_extension(const Cnf& gamma, const Cnf& lambda);

}  // namespace clausal
