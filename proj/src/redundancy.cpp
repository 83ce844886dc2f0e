#include "clausal/redundancy.hpp"

#include <algorithm>
#include <map>

#include "clausal/propagate.hpp"

namespace clausal {

bool is_blocked(const Clause& c, Lit p, const Cnf& gamma) {
    if (!c.contains(p)) throw DomainError("pivot literal is not in the clause");
    Clause rest = c.without(p);
    Lit np = p.negated();
    for (const Clause& d : gamma) {
        if (!d.contains(np)) continue;
        if (clause_union(rest, d.without(np))) return false;  // nontautological resolvent
    }
    return true;
}

bool is_blocked_by_projection(const Clause& c, Lit p, const Cnf& gamma) {
    if (!c.contains(p)) throw DomainError("pivot literal is not in the clause");
    PartialAssignment neg = PartialAssignment::negating(c.without(p));
    Cnf proj = project(gamma, p.negated());
    for (const Clause& d : proj)
        if (!neg.satisfies(d)) return false;
    return true;
}

bool is_rat(const Clause& c, Lit p, const Cnf& gamma) {
    if (!c.contains(p)) throw DomainError("pivot literal is not in the clause");
    Clause rest = c.without(p);
    Lit np = p.negated();
    UnitPropagator up(gamma);
    for (const Clause& d : gamma) {
        if (!d.contains(np)) continue;
        auto resolvent = clause_union(rest, d.without(np));
        if (!resolvent) continue;  // tautological resolvents pass outright
        if (!up.run(PartialAssignment::negating(*resolvent)).conflict) return false;
    }
    return true;
}

bool is_sbc(const Clause& c, const Clause& witness, const Cnf& gamma) {
    if (witness.empty()) throw DomainError("set-blocking witness must be nonempty");
    if (!subsumes(witness, c))
        throw DomainError("set-blocking witness must be a subset of the clause");
    Clause rest = c;
    for (Lit l : witness) rest = rest.without(l);
    for (const Clause& d : gamma) {
        bool meets_neg = false, meets_wit = false;
        for (Lit l : witness) {
            if (d.contains(l.negated())) meets_neg = true;
            if (d.contains(l)) meets_wit = true;
        }
        if (!meets_neg || meets_wit) continue;
        Clause d_rest = d;
        for (Lit l : witness) d_rest = d_rest.without(l.negated());
        if (clause_union(rest, d_rest)) return false;
    }
    return true;
}

bool has_blocked_literal(const Clause& c, const Cnf& gamma) {
    for (Lit l : c)
        if (is_blocked(c, l, gamma)) return true;
    return false;
}

KernelResult kernel_choosing(const Cnf& gamma,
                             const std::function<std::size_t(const std::vector<Clause>&)>& choose) {
    KernelResult result;
    Cnf current(gamma.num_vars());
    for (const Clause& c : gamma) current.add(c);

    // Removing a clause removes resolution partners, so blocked status
    // only ever flips from unblocked to blocked. Known-blocked clauses
    // stay blocked; after each removal only unblocked clauses sharing a
    // complementary literal with the removed one need rechecking.
    std::map<Clause, bool, bool (*)(const Clause&, const Clause&)> blocked(clause_less);
    for (const Clause& c : current) blocked.emplace(c, has_blocked_literal(c, current));

    for (;;) {
        std::vector<Clause> candidates;
        for (const auto& [c, b] : blocked)
            if (b) candidates.push_back(c);
        if (candidates.empty()) break;
        std::size_t pick = choose(candidates);
        if (pick >= candidates.size())
            throw DomainError("kernel chooser returned an out-of-range index");
        Clause victim = candidates[pick];
        result.elimination_order.push_back(victim);
        blocked.erase(victim);
        Cnf next(current.num_vars());
        for (const Clause& c : current)
            if (c != victim) next.add(c);
        current = std::move(next);
        for (auto& [c, b] : blocked) {
            if (b) continue;
            bool touches = false;
            for (Lit l : c)
                if (victim.contains(l.negated())) {
                    touches = true;
                    break;
                }
            if (touches) b = has_blocked_literal(c, current);
        }
    }
    result.kernel = std::move(current);
    return result;
}

KernelResult kernel(const Cnf& gamma) {
    return kernel_choosing(gamma, [](const std::vector<Clause>&) { return std::size_t{0}; });
}

bool is_blocked_extension(const Cnf& gamma, const Cnf& lambda) {
    Cnf extended(std::max(gamma.num_vars(), lambda.num_vars()));
    for (const Clause& c : gamma) extended.add(c);
    for (const Clause& c : lambda) extended.add(c);
    return kernel(extended).kernel.same_clauses(kernel(gamma).kernel);
}

}  // namespace clausal
