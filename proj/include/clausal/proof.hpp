#pragma once

// Proof objects, the line-based proof file format, per-system
// checking, size accounting, and the blocked-addition hoisting
// normalizer.
//
// Clause ids: input clauses are numbered 1..m in DIMACS order; every
// subsequent entry takes the next id(s) in file order; an extension
// triple consumes three ids (its three clauses in listed order).
//
// File format (ASCII, one entry per line, `c` comment lines allowed):
//   p proof <res|bc|rat|sbc|ger|er>
//   r <id1> <id2> <var> <lit>* 0   resolvent (listed = computed)
//   w <id> <lit>* 0                weakening (antecedent subset)
//   b <pivot-lit> <lit>* 0         blocked-clause addition
//   t <pivot-lit> <lit>* 0         RAT addition
//   s <k> <lit>{k} <lit>* 0        SBC addition; first k literals are
//                                  the witness, repeated inside the
//                                  full clause listing that follows
//   x <lit>* 0                     GER extension clause (before steps)
//   e <var> <lit-p> <lit-q> 0      ER extension triple (before steps);
//                                  appends the clauses (-x p), (-x q),
//                                  (x -p -q)
//
// Step kinds per system: res r/w; bc r/w/b; rat r/w/b/t; sbc r/w/b/s;
// ger x-prefix then r/w; er e-prefix then r/w.
//
// Structural problems (unknown tag, malformed integers, missing
// terminator, witness arity, prefix-order violations, nonpositive
// ids) raise ParseError. Semantic violations (tautological listed
// clause, antecedent id out of range, resolvent mismatch, pivot or
// witness problems, predicate failures, new-variable violations,
// stale extension variables) are reported by check() as REJECTED with
// a step index.

#include <iosfwd>

#include "clausal/core.hpp"
#include "clausal/propagate.hpp"

namespace clausal {

enum class System { kRes, kBc, kRat, kSbc, kGer, kEr };

// Raised by transformations that require an already-verified proof.
struct InputNotVerified : DomainError {
    using DomainError::DomainError;
};

std::string to_string(System s);
std::optional<System> system_from_string(const std::string& name);

enum class StepKind { kResolve, kWeaken, kAddBc, kAddRat, kAddSbc };

struct ProofStep {
    StepKind kind;
    // The listed clause; nullopt when the listing was tautological
    // (kept so check() can reject it as a semantic failure).
    std::optional<Clause> result;
    // kResolve: both antecedents and the pivot variable.
    // kWeaken: id_a is the antecedent.
    std::size_t id_a = 0, id_b = 0;
    Var pivot_var = 0;
    // kAddBc / kAddRat.
    Lit pivot{};
    // kAddSbc; nullopt when the witness listing was tautological.
    std::optional<Clause> witness;

    bool operator==(const ProofStep&) const = default;
};

// The clauses (-x p), (-x q), (x -p -q) encoding x <-> p AND q.
struct ExtTriple {
    Var x = 0;
    Lit p{}, q{};

    bool operator==(const ExtTriple&) const = default;
};

struct Proof {
    System system = System::kRes;
    // GER extension clauses, in file order (duplicates kept for size
    // accounting). nullopt marks a tautological listing.
    std::vector<std::optional<Clause>> lambda;
    // ER extension triples, in file order.
    std::vector<ExtTriple> triples;
    std::vector<ProofStep> steps;

    bool operator==(const Proof&) const = default;
};

// res/bc/rat/sbc: 1 + step count. ger: |lambda| + (1 + step count).
// er: 3·|triples| + (1 + step count).
std::size_t proof_size(const Proof& proof);

struct CheckReport {
    bool ok = false;
    // 0-based index of the failing entry in the unified order: lambda
    // clauses / extension triples first, then steps. Absent when the
    // failure is not tied to one entry (e.g. missing empty clause).
    std::optional<std::size_t> failed_step;
    std::string reason;
    std::size_t size = 0;  // proof_size of the input

    const char* verdict() const { return ok ? "VERIFIED" : "REJECTED"; }
};

// Replays the proof against the accumulated clause set, consulting the
// redundancy predicates for additions; for ger the lambda prefix must
// be a blocked extension of the input CNF; VERIFIED requires the empty
// clause among input or derived clauses.
CheckReport check(const Cnf& cnf, const Proof& proof);

// Same replay without the final empty-clause requirement; used to
// validate derivation fragments.
CheckReport check_derivation(const Cnf& cnf, const Proof& proof);

Proof parse_proof(std::istream& in);
Proof parse_proof_file(const std::string& path);

// Serializes canonically (literals in clause order). Throws
// DomainError on proofs carrying tautological listings.
void write_proof(const Proof& proof, std::ostream& out);

// Moves all blocked-clause additions of a verified bc proof to the
// front (relative order preserved), remaps ids, and re-checks.
// Throws DomainError unless the input is a verified bc proof.
Proof hoist_blocked_additions(const Cnf& cnf, const Proof& proof);

// Incremental proof construction with id bookkeeping. The builder
// enforces mechanical validity (ids in range, computable resolvents,
// weakening supersets, pivots and witnesses inside their clauses,
// prefix entries before steps, step kinds legal for the system) but
// not the redundancy predicates; run check() on the finished proof for
// those. Every added clause is also inserted into an accumulated
// formula so construction code can consult the current clause set.
class ProofBuilder {
public:
    ProofBuilder(System system, const Cnf& inputs);

    std::size_t num_inputs() const { return inputs_; }
    // Id the next appended clause will receive.
    std::size_t next_id() const { return by_id_.size(); }
    const Cnf& formula() const { return formula_; }
    const Clause& clause_of(std::size_t id) const;
    bool has_clause(const Clause& c) const { return first_id_.count(c) != 0; }
    // First id that carries this clause value; throws if absent.
    std::size_t id_of(const Clause& c) const;

    std::size_t add_lambda(Clause c);
    // Returns the id of the first of the three triple clauses.
    std::size_t add_triple(Var x, Lit p, Lit q);
    std::size_t add_resolve(std::size_t id_a, std::size_t id_b, Var pivot);
    std::size_t add_weaken(std::size_t id, Clause target);
    std::size_t add_blocked(Lit pivot, Clause c);
    std::size_t add_rat(Lit pivot, Clause c);
    std::size_t add_set_blocked(Clause witness, Clause c);

    // Appends an input-resolution derivation (its leaf and side
    // clauses must already be present) and returns the id of its final
    // clause. A derivation with no steps contributes nothing and
    // returns the existing leaf id.
    std::size_t splice(const InputDerivation& derivation);

    const Proof& proof() const { return proof_; }
    Proof take_proof() { return std::move(proof_); }

private:
    std::size_t append_clause(Clause c);

    Proof proof_;
    Cnf formula_;
    std::size_t inputs_ = 0;
    int universe_ = 0;
    std::vector<Clause> by_id_;  // index 0 unused
    std::unordered_map<Clause, std::size_t, ClauseHash> first_id_;
};

}  // namespace clausal
