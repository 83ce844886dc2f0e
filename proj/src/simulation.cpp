#include "clausal/simulation.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "clausal/oracle.hpp"
#include "clausal/propagate.hpp"
#include "clausal/redundancy.hpp"

namespace clausal {

namespace {

Cnf canonical_copy(const Cnf& cnf) {
    Cnf out(cnf.num_vars());
    for (std::size_t i : cnf.canonical_order()) out.add(cnf[i]);
    return out;
}

}  // namespace

Cnf nonblocking_cnf(const Clause& c, Lit p, const Cnf& gamma) {
    if (!c.contains(p)) throw PivotNotInClause("pivot is not in the clause");
    Clause base = c.without(p);
    Cnf out(gamma.num_vars());
    for (const Clause& d : project(gamma, p.negated())) {
        if (!clause_union(base, d)) continue;  // tautological resolvent
        std::vector<Lit> residue;
        for (Lit l : d)
            if (!c.contains(l)) residue.push_back(l);
        out.add(Clause::from_sorted(std::move(residue)));
    }
    return canonical_copy(out);
}

Cnf minimal_cover(const Cnf& gamma) {
    if (gamma.occurring_vars().size() > 20)
        throw TooManyVariables(
            "minimal cover supports at most 20 occurring variables");

    // Hitting-set search: extend the assignment along the canonically
    // first unsatisfied clause. Every subset-minimal satisfying
    // assignment appears on some branch; non-minimal finds are removed
    // by the antichain filter below.
    const std::vector<std::size_t> order = gamma.canonical_order();
    std::vector<PartialAssignment> found;
    auto search = [&](auto&& self, const PartialAssignment& alpha) -> void {
        const Clause* unhit = nullptr;
        for (std::size_t i : order)
            if (!alpha.satisfies(gamma[i])) {
                unhit = &gamma[i];
                break;
            }
        if (!unhit) {
            found.push_back(alpha);
            return;
        }
        for (Lit l : *unhit) {
            if (alpha.value(l).has_value()) continue;  // l is false here
            PartialAssignment next = alpha;
            next.assign(l);
            self(self, next);
        }
    };
    search(search, PartialAssignment());

    Cnf candidates(gamma.num_vars());
    for (const PartialAssignment& alpha : found) {
        std::vector<Lit> lits;
        for (Lit l : alpha.literals()) lits.push_back(l.negated());
        candidates.add(Clause::from_sorted(std::move(lits)));
    }

    Cnf result(gamma.num_vars());
    for (std::size_t i : candidates.canonical_order()) {
        bool minimal = true;
        for (const Clause& other : candidates)
            if (other != candidates[i] && subsumes(other, candidates[i])) {
                minimal = false;
                break;
            }
        if (minimal) result.add(candidates[i]);
    }
    return result;
}

Proof refute_resolution(const Cnf& gamma) {
    if (sat_brute(gamma))
        throw SatisfiableInput("formula is satisfiable; nothing to refute");

    struct Entry {
        Clause c;
        std::size_t id_a = 0, id_b = 0;  // 1-based; 0 marks an input
        Var pivot = 0;
    };
    std::vector<Entry> entries;
    for (const Clause& c : gamma) entries.push_back({c, 0, 0, 0});

    auto subsumed = [&](const Clause& r) {
        for (const Entry& e : entries)
            if (subsumes(e.c, r)) return true;
        return false;
    };

    std::optional<std::size_t> empty_at;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].c.empty()) {
            empty_at = i;
            break;
        }

    // Given-clause saturation with forward subsumption: each clause is
    // resolved against every earlier one; new resolvents join the
    // queue unless an existing clause subsumes them.
    for (std::size_t j = 1; j < entries.size() && !empty_at; ++j) {
        for (std::size_t i = 0; i < j && !empty_at; ++i) {
            const Clause a = entries[i].c;  // copies: entries may grow
            const Clause b = entries[j].c;
            for (Lit l : a) {
                if (!b.contains(l.negated())) continue;
                auto r = resolve_on(a, b, l.var());
                if (!r || subsumed(*r)) continue;
                entries.push_back({*r, i + 1, j + 1, l.var()});
                if (r->empty()) {
                    empty_at = entries.size() - 1;
                    break;
                }
            }
        }
    }
    if (!empty_at)
        throw std::logic_error(
            "saturation missed the empty clause on an unsatisfiable input");

    // Ancestors of the empty clause, then re-emission in derivation
    // order (parents always precede children).
    std::vector<char> needed(entries.size(), 0);
    std::vector<std::size_t> stack{*empty_at};
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        if (needed[i]) continue;
        needed[i] = 1;
        if (entries[i].id_a != 0) {
            stack.push_back(entries[i].id_a - 1);
            stack.push_back(entries[i].id_b - 1);
        }
    }
    ProofBuilder builder(System::kRes, gamma);
    std::vector<std::size_t> new_id(entries.size(), 0);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i < gamma.size()) {
            new_id[i] = i + 1;
            continue;
        }
        if (!needed[i]) continue;
        new_id[i] = builder.add_resolve(new_id[entries[i].id_a - 1],
                                        new_id[entries[i].id_b - 1],
                                        entries[i].pivot);
    }
    return builder.take_proof();
}

std::pair<Proof, SimulationReport> simulate_rat_step(const Clause& c, Lit p,
                                                     const Cnf& gamma) {
    if (!c.contains(p)) throw NotARat("pivot is not in the clause");
    if (!is_rat(c, p, gamma))
        throw NotARat(
            "clause is not a resolution asymmetric tautology for the pivot");

    Cnf sigma = nonblocking_cnf(c, p, gamma);
    SimulationReport report;
    report.sigma_size = sigma.size();
    report.n = gamma.occurring_vars().size();

    ProofBuilder builder(System::kBc, gamma);

    // (1) Derive c ∨ E for every E ∈ Σ by input resolution. The empty
    // member, when Σ contains it, goes last: then the refutation of Σ
    // is trivial and its derivation (of c itself) must close the
    // fragment.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (!sigma[i].empty()) order.push_back(i);
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (sigma[i].empty()) order.push_back(i);

    std::vector<std::size_t> sigma_id(sigma.size(), 0);
    for (std::size_t i : order) {
        auto target = clause_union(c, sigma[i]);
        if (!target)
            throw std::logic_error(
                "nonblocking member tautologizes with the clause");
        sigma_id[i] = builder.splice(extract_input_resolution(gamma, *target));
    }

    // (2) Case split: Σ unsatisfiable refutes directly; otherwise the
    // members of c ∨ μ(Σ) enter as blocked additions and Σ ∪ μ(Σ) is
    // refuted instead.
    Cnf to_refute = sigma;
    std::vector<std::size_t> mu_id;
    if (sat_brute(sigma)) {
        Cnf mu = minimal_cover(sigma);
        report.mu_size = mu.size();
        for (const Clause& e : mu) {
            auto add = clause_union(c, e);
            if (!add)
                throw std::logic_error(
                    "cover member tautologizes with the clause");
            mu_id.push_back(builder.add_blocked(p, *add));
            if (!to_refute.add(e))
                throw std::logic_error(
                    "cover member coincides with a nonblocking clause");
        }
    }

    Proof refutation = refute_resolution(to_refute);
    report.refutation_size = proof_size(refutation);

    // (3) Replay the refutation with c attached: premise i of Σ ∪ μ is
    // represented by the fragment clause c ∨ (premise i).
    std::vector<std::size_t> rmap(1 + to_refute.size() + refutation.steps.size(),
                                  0);
    for (std::size_t i = 0; i < to_refute.size(); ++i)
        rmap[i + 1] =
            i < sigma.size() ? sigma_id[i] : mu_id[i - sigma.size()];
    std::size_t next = to_refute.size();
    for (const ProofStep& st : refutation.steps)
        rmap[++next] = builder.add_resolve(rmap[st.id_a], rmap[st.id_b],
                                           st.pivot_var);

    // The fragment must end by producing c itself; the only path that
    // can fall short is an empty Σ-member whose derivation collapsed
    // because c is already present, where an identity weakening keeps
    // the contract.
    const std::vector<ProofStep>& steps = builder.proof().steps;
    if (steps.empty() || !steps.back().result ||
        *steps.back().result != c)
        builder.add_weaken(builder.id_of(c), c);

    report.actual = 1 + builder.proof().steps.size();
    report.bound = report.sigma_size * (report.n + 1) + report.mu_size +
                   report.refutation_size;
    return {builder.take_proof(), report};
}

TranslationResult translate_rat_to_bc(const Cnf& cnf, const Proof& proof) {
    if (proof.system != System::kRes && proof.system != System::kBc &&
        proof.system != System::kRat)
        throw DomainError("expected a rat, bc, or res proof");
    CheckReport pre = check(cnf, proof);
    if (!pre.ok)
        throw InputNotVerified("proof does not verify against the formula: " +
                               pre.reason);

    TranslationResult out;
    ProofBuilder builder(System::kBc, cnf);
    std::vector<std::size_t> to_new(1 + cnf.size() + proof.steps.size(), 0);
    for (std::size_t i = 1; i <= cnf.size(); ++i) to_new[i] = i;

    std::size_t oid = cnf.size();
    for (const ProofStep& st : proof.steps) {
        ++oid;
        switch (st.kind) {
            case StepKind::kResolve:
                to_new[oid] = builder.add_resolve(to_new[st.id_a],
                                                  to_new[st.id_b],
                                                  st.pivot_var);
                break;
            case StepKind::kWeaken:
                to_new[oid] = builder.add_weaken(to_new[st.id_a], *st.result);
                break;
            case StepKind::kAddBc:
                to_new[oid] = builder.add_blocked(st.pivot, *st.result);
                break;
            case StepKind::kAddRat: {
                Cnf snapshot = builder.formula();
                std::string at =
                    "step " + std::to_string(oid - cnf.size()) + ": ";
                std::pair<Proof, SimulationReport> sim;
                try {
                    sim = simulate_rat_step(*st.result, st.pivot, snapshot);
                } catch (const NotARat& e) {
                    throw NotARat(at + e.what());
                } catch (const TooManyVariables& e) {
                    throw TooManyVariables(at + e.what());
                } catch (const SatisfiableInput& e) {
                    throw SatisfiableInput(at + e.what());
                }

                std::vector<std::size_t> fmap(
                    1 + snapshot.size() + sim.first.steps.size(), 0);
                for (std::size_t j = 1; j <= snapshot.size(); ++j)
                    fmap[j] = builder.id_of(snapshot[j - 1]);
                std::size_t fid = snapshot.size();
                std::size_t last = 0;
                for (const ProofStep& fs : sim.first.steps) {
                    switch (fs.kind) {
                        case StepKind::kResolve:
                            last = builder.add_resolve(fmap[fs.id_a],
                                                       fmap[fs.id_b],
                                                       fs.pivot_var);
                            break;
                        case StepKind::kWeaken:
                            last = builder.add_weaken(fmap[fs.id_a],
                                                      *fs.result);
                            break;
                        case StepKind::kAddBc:
                            last = builder.add_blocked(fs.pivot, *fs.result);
                            break;
                        default:
                            throw std::logic_error(
                                "unexpected step kind in a simulation "
                                "fragment");
                    }
                    fmap[++fid] = last;
                }
                if (last == 0)
                    throw std::logic_error("simulation fragment was empty");
                to_new[oid] = last;
                out.reports.push_back(std::move(sim.second));
                break;
            }
            default:
                throw DomainError("unexpected step kind in a rat proof");
        }
    }

    Proof result = builder.take_proof();
    CheckReport post = check(cnf, result);
    if (!post.ok)
        throw std::logic_error("translated proof failed verification: " +
                               post.reason);
    out.proof = std::move(result);
    return out;
}

Proof restrict_proof(const Cnf& cnf, const PartialAssignment& alpha,
                     const Proof& proof) {
    if (proof.system != System::kRes && proof.system != System::kBc &&
        proof.system != System::kRat)
        throw DomainError("proof restriction supports res, bc, and rat proofs");
    CheckReport pre = check(cnf, proof);
    if (!pre.ok)
        throw InputNotVerified("proof does not verify against the formula: " +
                               pre.reason);

    Cnf restricted = restrict_cnf(cnf, alpha);
    ProofBuilder builder(proof.system, restricted);

    // Original id → id in the restricted proof; empty for clauses
    // satisfied by alpha (never referenced by surviving steps).
    std::vector<Clause> orig(1 + cnf.size() + proof.steps.size());
    std::vector<std::optional<std::size_t>> to_new(orig.size());
    auto live = [&](std::size_t id) {
        if (!to_new[id])
            throw StepOutsideLemmaCases(
                "surviving step references a satisfied clause");
        return *to_new[id];
    };
    for (std::size_t i = 1; i <= cnf.size(); ++i) {
        orig[i] = cnf[i - 1];
        if (auto r = restrict_clause(orig[i], alpha))
            to_new[i] = builder.id_of(*r);
    }

    std::size_t oid = cnf.size();
    for (const ProofStep& st : proof.steps) {
        ++oid;
        orig[oid] = *st.result;
        auto rr = restrict_clause(orig[oid], alpha);
        if (!rr) continue;  // satisfied results are dropped
        const Clause& rc = *rr;
        switch (st.kind) {
            case StepKind::kResolve: {
                auto pv = alpha.value(st.pivot_var);
                if (pv.has_value()) {
                    // Case 1.1: the premise holding the falsified pivot
                    // literal restricts to a subset of the resolvent.
                    Lit falsified(*pv ? -static_cast<int>(st.pivot_var)
                                      : static_cast<int>(st.pivot_var));
                    std::size_t src = orig[st.id_a].contains(falsified)
                                          ? st.id_a
                                          : st.id_b;
                    to_new[oid] = builder.add_weaken(live(src), rc);
                } else {
                    // Case 1.2: both premises survive; resolve them.
                    to_new[oid] = builder.add_resolve(live(st.id_a),
                                                      live(st.id_b),
                                                      st.pivot_var);
                }
                break;
            }
            case StepKind::kWeaken:
                // Case 2: the antecedent restricts inside the result.
                to_new[oid] = builder.add_weaken(live(st.id_a), rc);
                break;
            case StepKind::kAddBc:
            case StepKind::kAddRat: {
                auto pv = alpha.value(st.pivot);
                if (!pv.has_value()) {
                    // Case 3.2: the pivot survives; the addition
                    // restricts in place.
                    to_new[oid] = st.kind == StepKind::kAddBc
                                      ? builder.add_blocked(st.pivot, rc)
                                      : builder.add_rat(st.pivot, rc);
                } else if (*pv) {
                    throw StepOutsideLemmaCases(
                        "addition with a satisfied pivot was not dropped");
                } else {
                    // Case 3.1: the pivot is falsified; the restricted
                    // clause follows from the accumulated restricted
                    // formula by unit propagation.
                    InputDerivation d;
                    try {
                        d = extract_input_resolution(builder.formula(), rc);
                    } catch (const NotUpDerivable&) {
                        throw StepOutsideLemmaCases(
                            "restricted addition is not unit-propagation "
                            "derivable from the accumulated formula");
                    }
                    to_new[oid] = builder.splice(d);
                }
                break;
            }
            default:
                throw DomainError(
                    "proof restriction supports res, bc, and rat proofs");
        }
    }

    Proof out = builder.take_proof();
    CheckReport post = check(restricted, out);
    if (!post.ok)
        throw StepOutsideLemmaCases("restricted proof failed verification: " +
                                    post.reason);
    return out;
}

Proof restrict_h_rat_proof(const Cnf& gamma, const PairAllocation& pairs,
                           const Proof& proof) {
    if (proof.system != System::kRat) throw DomainError("expected a rat proof");
    Cnf h = rebuild_h(gamma, pairs);
    CheckReport pre = check(h, proof);
    if (!pre.ok)
        throw InputNotVerified(
            "proof does not verify against the transformed formula: " +
            pre.reason);

    std::vector<Lit> lits;
    for (const auto& [x, y] : pairs.pairs) {
        lits.push_back(Lit(x));
        lits.push_back(Lit(y));
    }
    PartialAssignment alpha =
        PartialAssignment::from_literals(std::span<const Lit>(lits));
    if (!restrict_cnf(h, alpha).same_clauses(gamma))
        throw DomainError("pair variables occur in the base formula");

    Proof out = restrict_proof(h, alpha, proof);
    CheckReport fin = check(gamma, out);
    if (!fin.ok)
        throw StepOutsideLemmaCases(
            "restricted proof failed verification over the base formula: " +
            fin.reason);
    return out;
}

}  // namespace clausal
