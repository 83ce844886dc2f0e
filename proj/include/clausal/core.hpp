#pragma once

// Core clausal types: literals, clauses, partial assignments, CNFs.
//
// Conventions used throughout the library:
//  - a literal is a nonzero int code, negative = negated variable;
//  - literals are ordered by variable ascending, negative polarity first;
//  - a clause is a nontautological, duplicate-free, sorted literal set
//    (the empty clause is the contradiction);
//  - a CNF is a duplicate-free clause sequence in first-insertion order
//    plus a declared variable universe num_vars (which may exceed the
//    set of occurring variables).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace clausal {

using Var = int;

// Thrown on malformed textual input (DIMACS, proof files, JSON).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an operation's stated precondition is violated.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Lit {
    int code = 0;  // nonzero

    Lit() = default;
    explicit Lit(int c) : code(c) {
        if (c == 0) throw DomainError("literal code must be nonzero");
    }

    Var var() const { return code < 0 ? -code : code; }
    bool positive() const { return code > 0; }
    Lit negated() const { return Lit(-code); }

    bool operator==(const Lit& o) const { return code == o.code; }
    bool operator!=(const Lit& o) const { return code != o.code; }
};

// Variable ascending, negative polarity before positive.
inline bool lit_less(Lit a, Lit b) {
    if (a.var() != b.var()) return a.var() < b.var();
    return a.code < b.code;
}

std::string to_string(Lit l);

class Clause {
public:
    Clause() = default;  // the empty clause

    // Literals must already satisfy the clause invariants; use
    // normalize_clause for unsorted/unchecked input.
    static Clause from_sorted(std::vector<Lit> lits);

    const std::vector<Lit>& lits() const { return lits_; }
    std::size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    bool contains(Lit l) const;
    bool contains_var(Var v) const;

    // Set difference c \ {l}.
    Clause without(Lit l) const;

    bool operator==(const Clause& o) const { return lits_ == o.lits_; }
    bool operator!=(const Clause& o) const { return lits_ != o.lits_; }

    auto begin() const { return lits_.begin(); }
    auto end() const { return lits_.end(); }

private:
    std::vector<Lit> lits_;
};

// Sorts, deduplicates, and checks for complementary literals.
// Returns nullopt when the literal set is tautological.
// Throws DomainError on a zero literal code.
std::optional<Clause> normalize_clause(std::span<const int> codes);
std::optional<Clause> normalize_clause(std::span<const Lit> lits);

// Total order on clauses: lexicographic over the literal sequence,
// a proper prefix first. Used wherever a canonical clause order is
// needed (propagation scans, kernel scans, output ordering).
bool clause_less(const Clause& a, const Clause& b);

std::string to_string(const Clause& c);

// a subsumes b iff a ⊆ b.
bool subsumes(const Clause& a, const Clause& b);

// Union of two clauses; nullopt when the union is tautological.
std::optional<Clause> clause_union(const Clause& a, const Clause& b);

// Resolvent of a and b on variable v (v must occur positively in one
// and negatively in the other); nullopt when tautological.
// Throws DomainError when the pivot polarities are not present.
std::optional<Clause> resolve_on(const Clause& a, const Clause& b, Var v);

struct ClauseHash {
    std::size_t operator()(const Clause& c) const;
};

class PartialAssignment {
public:
    PartialAssignment() = default;

    // Sets l's variable so that l is true.
    // Throws DomainError when the variable already has the opposite value.
    void assign(Lit l);

    static PartialAssignment from_literals(std::span<const Lit> lits);

    std::optional<bool> value(Var v) const;
    // Truth value of the literal, nullopt when the variable is unassigned.
    std::optional<bool> value(Lit l) const;

    bool defined(Var v) const { return vals_.count(v) != 0; }
    std::size_t size() const { return vals_.size(); }
    bool empty() const { return vals_.empty(); }

    // The set of literals the assignment satisfies, in canonical order.
    std::vector<Lit> literals() const;

    // Smallest assignment falsifying every literal of c.
    static PartialAssignment negating(const Clause& c);

    bool satisfies(const Clause& c) const;

private:
    std::unordered_map<Var, bool> vals_;
};

class Cnf {
public:
    Cnf() = default;
    explicit Cnf(int num_vars) : num_vars_(num_vars) {
        if (num_vars < 0) throw DomainError("num_vars must be nonnegative");
    }

    int num_vars() const { return num_vars_; }
    // Raises the declared universe; never shrinks it.
    void ensure_num_vars(int n);

    // Set semantics: re-adding an existing clause is identity.
    // Returns false when the clause was already present.
    bool add(Clause c);

    bool contains(const Clause& c) const;
    std::size_t size() const { return clauses_.size(); }
    const std::vector<Clause>& clauses() const { return clauses_; }
    const Clause& operator[](std::size_t i) const { return clauses_[i]; }

    // Clause indices sorted by clause_less.
    std::vector<std::size_t> canonical_order() const;

    // Occurring variables, ascending.
    std::vector<Var> occurring_vars() const;

    bool same_clauses(const Cnf& other) const;

    auto begin() const { return clauses_.begin(); }
    auto end() const { return clauses_.end(); }

private:
    std::vector<Clause> clauses_;
    std::unordered_set<Clause, ClauseHash> index_;
    int num_vars_ = 0;
};

// c restricted by alpha: nullopt when alpha satisfies c, otherwise c
// minus its falsified literals.
std::optional<Clause> restrict_clause(const Clause& c, const PartialAssignment& alpha);

// gamma restricted by alpha; keeps the declared num_vars.
Cnf restrict_cnf(const Cnf& gamma, const PartialAssignment& alpha);

// proj_p(gamma) = { c \ {p} : c in gamma, p in c }; keeps num_vars.
Cnf project(const Cnf& gamma, Lit p);

// gamma subsumes delta iff every clause of delta is subsumed by some
// clause of gamma.
bool subsumes(const Cnf& gamma, const Cnf& delta);

// DIMACS CNF I/O. parse_dimacs tolerates a clause-count mismatch with a
// warning; rejects literals whose variable exceeds the declared count,
// malformed tokens, unterminated clauses, and lines over 1 MiB.
Cnf parse_dimacs(std::istream& in, std::vector<std::string>* warnings = nullptr);
void write_dimacs(const Cnf& cnf, std::ostream& out);

Cnf parse_dimacs_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

}  // namespace clausal
