#pragma once

// Formula generators (pigeonhole and bit-pigeonhole), a polynomial-size
// extension-resolution refutation of the pigeonhole principle, the G and
// H formula transformations driven by an extension proof, and the
// constructive proof builders that realize the simulation lemmas.

#include <iosfwd>
#include <utility>

#include "clausal/core.hpp"
#include "clausal/proof.hpp"

namespace clausal {

// An er proof split into its extension prefix and resolution phase.
// steps in `resolution` are Resolve/Weaken only and use the er proof's
// id space (inputs 1..m, three ids per triple, then step results).
struct ErProof {
    std::vector<ExtTriple> triples;
    std::vector<ProofStep> resolution;

    std::size_t t() const { return triples.size(); }
    Proof to_proof() const;
    // Requires p.system == er.
    static ErProof from_proof(const Proof& p);
};

// Fresh-variable pairing used by the H transformation: pairs[i] =
// (x_{i+1}, y_{i+1}) where x's are the er proof's extension variables
// and y's are allocated contiguously above every variable of Γ ∪ Λ.
struct PairAllocation {
    std::vector<std::pair<Var, Var>> pairs;
    int base_num_vars = 0;  // num_vars of the untransformed CNF
};

void write_pair_allocation(const PairAllocation& pairs, std::ostream& out);
PairAllocation parse_pair_allocation(std::istream& in);
PairAllocation parse_pair_allocation_file(const std::string& path);

// Pigeonhole principle PHP_n: variables p_{i,k} = (i-1)·n + k for
// pigeon i ∈ [n+1] and hole k ∈ [n]; n+1 pigeon axioms followed by the
// hole axioms (hole k ascending, pairs i<j lexicographic). Requires
// n ≥ 1.
Cnf gen_php(int n);

// Bit pigeonhole principle BPHP_n for n = 2^k, k ≥ 1: variables
// p^i_l = (i-1)·k + l give pigeon i's hole number in binary (bit l is
// the l-th least significant); for every pair i<j and hole h the
// clause forbidding both pigeons from mapping to h. C(n+1,2)·n clauses.
Cnf gen_bphp(int n);

// A verified er refutation of gen_php(n), built by the standard
// downward reduction: for m = n..2 define, per pigeon i ∈ [m] and hole
// k ∈ [m-1], a_{i,k} := u_{i,m} AND u_{m+1,k} and b_{i,k} := NOT u_{i,k}
// AND NOT a_{i,k} (two triples), use ¬b_{i,k} as the level-(m-1)
// pigeon literal, and derive the level-(m-1) axioms by resolution;
// level 1 refutes in two resolutions.
ErProof gen_cook_er_php(int n);

// G(Γ) = Γ ∪ ⋃_{i=1}^{t} [(x_i ∨ Γ) ∪ (¬x_i ∨ Γ)] where x_i are the er
// proof's extension variables; (2t+1)·|Γ| clauses, Γ first, then per i
// the x_i block followed by the ¬x_i block. Requires the er proof to
// verify against gamma (InputNotVerified otherwise).
Cnf transform_g(const Cnf& gamma, const ErProof& er);

// H(Γ) = Γ ∪ ⋃_{i=1}^{t} {¬x_i ∨ y_i, x_i ∨ ¬y_i} with fresh y_i;
// |Γ| + 2t clauses. Same precondition as transform_g.
std::pair<Cnf, PairAllocation> transform_h(const Cnf& gamma,
                                           const ErProof& er);

// Reassembles H(Γ) from the base formula and a stored pair allocation
// without re-verifying any er proof.
Cnf rebuild_h(const Cnf& gamma, const PairAllocation& pairs);

// rat proof of transform_g(gamma, er): per triple adds ¬x_i∨p_i and
// ¬x_i∨q_i as RAT for ¬x_i and x_i∨¬p_i∨¬q_i as RAT for x_i, then
// replays the er resolution phase. proof_size equals the er size.
Proof build_rat_proof_of_g(const Cnf& gamma, const ErProof& er);

// ger proof of transform_h(...).first: the er extension clauses become
// the Λ prefix, then the er resolution phase replays. proof_size
// equals the er size.
Proof build_ger_proof_of_h(const Cnf& gamma, const ErProof& er,
                           const PairAllocation& pairs);

// sbc proof of transform_h(...).first: per triple adds, with witness
// L = {¬x_i, ¬y_i}, the clauses ¬x_i∨¬y_i∨p_i and ¬x_i∨¬y_i∨q_i, and
// with witness {x_i, y_i} the clause x_i∨y_i∨¬p_i∨¬q_i; resolving them
// against the pair clauses recovers the extension clauses, after which
// the er resolution phase replays. proof_size ≤ 2 · er size.
Proof build_sbc_proof_of_h(const Cnf& gamma, const ErProof& er,
                           const PairAllocation& pairs);

// Direct sbc refutation of gen_php(n): for i ∈ [n-1] and j,k > i adds
// C_{i,j,k} = ¬p_{i,k} ∨ ¬p_{j,i} ∨ (∨_{l≠i} p_{l,k}) ∨ (∨_{l≠j} p_{l,i})
// with witness {¬p_{i,k}, ¬p_{j,i}, p_{i,i}, p_{j,k}}, then resolves
// each down to ¬p_{i,k} ∨ ¬p_{j,i}, chains the pigeon axioms into
// units ¬p_{j,i}, and refutes the last pigeon axiom.
Proof build_sbc_proof_of_php(int n);

// Closed forms used by the stats reporting (match the builders above).
std::size_t cook_triple_count(int n);
std::size_t sbc_php_proof_size(int n);

}  // namespace clausal
