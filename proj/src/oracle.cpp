#include "clausal/oracle.hpp"

#include <algorithm>
#include <cstdint>

namespace clausal {

namespace {

constexpr int kMaxOracleVars = 25;

}  // namespace

std::optional<PartialAssignment> sat_brute(const Cnf& gamma) {
    std::vector<Var> vars = gamma.occurring_vars();
    if (vars.size() > static_cast<std::size_t>(kMaxOracleVars))
        throw TooManyVariables("sat_brute: " + std::to_string(vars.size()) +
                               " occurring variables exceeds the limit of " +
                               std::to_string(kMaxOracleVars));

    std::unordered_map<Var, int> bit_of;
    for (std::size_t i = 0; i < vars.size(); ++i) bit_of[vars[i]] = static_cast<int>(i);

    // Per clause: bitmask of positive and negative literal positions.
    struct Masks {
        std::uint32_t pos = 0, neg = 0;
    };
    std::vector<Masks> masks;
    masks.reserve(gamma.size());
    for (const Clause& c : gamma) {
        Masks m;
        for (Lit l : c) {
            std::uint32_t bit = 1u << bit_of.at(l.var());
            if (l.positive())
                m.pos |= bit;
            else
                m.neg |= bit;
        }
        masks.push_back(m);
    }

    std::uint64_t total = 1ull << vars.size();
    for (std::uint64_t k = 0; k < total; ++k) {
        bool ok = true;
        for (const Masks& m : masks) {
            std::uint32_t b = static_cast<std::uint32_t>(k);
            if ((b & m.pos) == 0 && (~b & m.neg) == 0) {
                ok = false;
                break;
            }
        }
        if (ok) {
            PartialAssignment a;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                bool value = (k >> i) & 1;
                a.assign(Lit(value ? vars[i] : -vars[i]));
            }
            return a;
        }
    }
    return std::nullopt;
}

bool implies(const Cnf& gamma, const Clause& c) {
    Cnf work(gamma.num_vars());
    for (const Clause& g : gamma) work.add(g);
    for (Lit l : c) work.add(Clause::from_sorted({l.negated()}));
    return !sat_brute(work).has_value();
}

bool is_redundant(const Clause& c, const Cnf& gamma) {
    Cnf without(gamma.num_vars());
    for (const Clause& g : gamma)
        if (g != c) without.add(g);
    Cnf with(gamma.num_vars());
    for (const Clause& g : gamma) with.add(g);
    with.add(c);
    bool s_without = sat_brute(without).has_value();
    bool s_middle = sat_brute(gamma).has_value();
    bool s_with = sat_brute(with).has_value();
    return s_without == s_middle && s_middle == s_with;
}

}  // namespace clausal
