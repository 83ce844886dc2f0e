#pragma once

// Brute-force semantic oracle. Deliberately simple and independent of
// the propagation and proof machinery, so it can serve as ground truth
// in tests: satisfiability by exhaustive enumeration, entailment, and
// redundancy (equisatisfiability around adding or removing a clause).

#include "clausal/core.hpp"

namespace clausal {

// Raised when a formula has too many occurring variables for
// exhaustive enumeration.
struct TooManyVariables : DomainError {
    using DomainError::DomainError;
};

// Exhaustive SAT check over the occurring variables of gamma (at most
// 25, else TooManyVariables). Returns a satisfying assignment defined
// exactly on the occurring variables, or nullopt when unsatisfiable.
// Assignments are enumerated as binary counters: candidate k assigns
// the i-th occurring variable (ascending, i starting at 1) the value
// of bit i-1 of k, and the first satisfying candidate is returned.
std::optional<PartialAssignment> sat_brute(const Cnf& gamma);

// gamma entails c, i.e. gamma plus the negation of c is unsatisfiable.
bool implies(const Cnf& gamma, const Clause& c);

// c is redundant with respect to gamma: gamma minus {c}, gamma, and
// gamma plus {c} are all equisatisfiable (three oracle calls).
bool is_redundant(const Clause& c, const Cnf& gamma);

}  // namespace clausal
