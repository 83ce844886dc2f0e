#include "clausal/builders.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <tuple>

#include "json.hpp"

namespace clausal {

namespace {

Clause clause_of_lits(std::vector<Lit> lits) {
    auto c = normalize_clause(std::span<const Lit>(lits));
    if (!c) throw std::logic_error("unexpected tautological clause in builder");
    return *c;
}

void require_er_verified(const Cnf& gamma, const ErProof& er) {
    CheckReport report = check(gamma, er.to_proof());
    if (!report.ok)
        throw InputNotVerified(
            "extension proof does not verify against the formula: " +
            report.reason);
}

void require_pairs_match(const Cnf& gamma, const ErProof& er,
                         const PairAllocation& pairs) {
    if (pairs.pairs.size() != er.t())
        throw DomainError("pair allocation size differs from the triple count");
    Var top = gamma.num_vars();
    for (const ExtTriple& t : er.triples) top = std::max(top, t.x);
    for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
        if (pairs.pairs[i].first != er.triples[i].x)
            throw DomainError(
                "pair allocation x-variables do not match the extension proof");
        if (pairs.pairs[i].second <= top)
            throw DomainError("pair allocation y-variable is not fresh");
    }
    for (std::size_t i = 1; i < pairs.pairs.size(); ++i)
        if (pairs.pairs[i].second <= pairs.pairs[i - 1].second)
            throw DomainError("pair allocation y-variables must be increasing");
}

// Replays an er resolution phase into a builder whose id space extends
// the er proof's by `shift` for every non-input id.
void replay_resolution(ProofBuilder& builder,
                       const std::vector<ProofStep>& steps, std::size_t m,
                       std::size_t shift) {
    auto remap = [m, shift](std::size_t id) {
        return id <= m ? id : id + shift;
    };
    for (const ProofStep& step : steps) {
        switch (step.kind) {
            case StepKind::kResolve:
                builder.add_resolve(remap(step.id_a), remap(step.id_b),
                                    step.pivot_var);
                break;
            case StepKind::kWeaken:
                if (!step.result)
                    throw DomainError("tautological weakening target");
                builder.add_weaken(remap(step.id_a), *step.result);
                break;
            default:
                throw DomainError(
                    "extension-proof resolution phase may contain only "
                    "resolve and weaken steps");
        }
    }
}

}  // namespace

Proof ErProof::to_proof() const {
    Proof p;
    p.system = System::kEr;
    p.triples = triples;
    p.steps = resolution;
    return p;
}

ErProof ErProof::from_proof(const Proof& p) {
    if (p.system != System::kEr)
        throw DomainError("expected an er proof");
    return ErProof{p.triples, p.steps};
}

void write_pair_allocation(const PairAllocation& pairs, std::ostream& out) {
    nlohmann::json j;
    j["base_num_vars"] = pairs.base_num_vars;
    j["pairs"] = nlohmann::json::array();
    for (const auto& [x, y] : pairs.pairs)
        j["pairs"].push_back({{"x", x}, {"y", y}});
    out << j.dump(2) << "\n";
}

PairAllocation parse_pair_allocation(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid pair allocation JSON: ") +
                         e.what());
    }
    PairAllocation result;
    try {
        result.base_num_vars = j.at("base_num_vars").get<int>();
        for (const auto& entry : j.at("pairs")) {
            int x = entry.at("x").get<int>();
            int y = entry.at("y").get<int>();
            if (x <= 0 || y <= 0)
                throw ParseError("pair allocation variables must be positive");
            result.pairs.emplace_back(x, y);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid pair allocation JSON: ") +
                         e.what());
    }
    if (result.base_num_vars < 0)
        throw ParseError("pair allocation base_num_vars must be nonnegative");
    return result;
}

PairAllocation parse_pair_allocation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open pair allocation file: " + path);
    return parse_pair_allocation(in);
}

Cnf gen_php(int n) {
    if (n < 1) throw DomainError("gen_php requires n >= 1");
    auto pvar = [n](int i, int k) { return (i - 1) * n + k; };
    Cnf cnf((n + 1) * n);
    for (int i = 1; i <= n + 1; ++i) {
        std::vector<Lit> lits;
        for (int k = 1; k <= n; ++k) lits.emplace_back(pvar(i, k));
        cnf.add(clause_of_lits(std::move(lits)));
    }
    for (int k = 1; k <= n; ++k)
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                cnf.add(clause_of_lits({Lit(-pvar(i, k)), Lit(-pvar(j, k))}));
    return cnf;
}

Cnf gen_bphp(int n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw DomainError("gen_bphp requires n = 2^k with k >= 1");
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    auto bvar = [bits](int i, int l) { return (i - 1) * bits + l; };
    Cnf cnf((n + 1) * bits);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n + 1; ++j)
            for (int h = 0; h < n; ++h) {
                std::vector<Lit> lits;
                for (int pigeon : {i, j})
                    for (int l = 1; l <= bits; ++l)
                        lits.emplace_back(((h >> (l - 1)) & 1)
                                              ? -bvar(pigeon, l)
                                              : bvar(pigeon, l));
                cnf.add(clause_of_lits(std::move(lits)));
            }
    return cnf;
}

ErProof gen_cook_er_php(int n) {
    if (n < 1) throw DomainError("gen_cook_er_php requires n >= 1");
    Cnf php = gen_php(n);
    ProofBuilder builder(System::kEr, php);

    auto pvar = [n](int i, int k) { return (i - 1) * n + k; };

    // Per-level working set (holes 1..m, pigeons 1..m+1): u[i][k] is
    // the literal placing pigeon i in hole k when the level is entered,
    // A*/B* the ids of the clauses defining a_{i,k} := u_{i,m} AND
    // u_{m+1,k} and b_{i,k} := NOT u_{i,k} AND NOT a_{i,k}, and
    // v_{i,k} = ¬b_{i,k} the next level's pigeon literal.
    struct Level {
        int m = 0;
        std::vector<std::vector<Lit>> u;
        std::vector<std::vector<std::size_t>> A1, A2, A3, B1, B2, B3;
        std::vector<std::vector<Lit>> a_lit, v;
    };

    std::vector<std::vector<Lit>> u(n + 2, std::vector<Lit>(n + 1));
    for (int i = 1; i <= n + 1; ++i)
        for (int k = 1; k <= n; ++k) u[i][k] = Lit(pvar(i, k));

    // Extension prefix: every level's triples in one block, since later
    // levels only mention extension variables of earlier ones.
    std::vector<Level> levels;
    for (int m = n; m >= 2; --m) {
        Level lv;
        lv.m = m;
        lv.u = u;
        lv.A1.resize(m + 1);
        lv.A2.resize(m + 1);
        lv.A3.resize(m + 1);
        lv.B1.resize(m + 1);
        lv.B2.resize(m + 1);
        lv.B3.resize(m + 1);
        lv.a_lit.resize(m + 1);
        lv.v.resize(m + 1);
        for (int i = 1; i <= m; ++i) {
            lv.A1[i].assign(m, 0);
            lv.A2[i].assign(m, 0);
            lv.A3[i].assign(m, 0);
            lv.B1[i].assign(m, 0);
            lv.B2[i].assign(m, 0);
            lv.B3[i].assign(m, 0);
            lv.a_lit[i].assign(m, Lit());
            lv.v[i].assign(m, Lit());
            for (int k = 1; k <= m - 1; ++k) {
                Var a = builder.formula().num_vars() + 1;
                std::size_t ida = builder.add_triple(a, u[i][m], u[m + 1][k]);
                lv.A1[i][k] = ida;
                lv.A2[i][k] = ida + 1;
                lv.A3[i][k] = ida + 2;
                lv.a_lit[i][k] = Lit(a);
                Var b = builder.formula().num_vars() + 1;
                std::size_t idb =
                    builder.add_triple(b, u[i][k].negated(), Lit(-a));
                lv.B1[i][k] = idb;
                lv.B2[i][k] = idb + 1;
                lv.B3[i][k] = idb + 2;
                lv.v[i][k] = Lit(-b);
            }
        }
        for (int i = 1; i <= m; ++i)
            for (int k = 1; k <= m - 1; ++k) u[i][k] = lv.v[i][k];
        levels.push_back(std::move(lv));
    }
    // u now holds the level-1 literals in u[1][1] and u[2][1].

    // Resolution phase: derive each next level's axioms from the
    // current pigeon/hole ids and the level's extension clauses.
    std::vector<std::size_t> pigeon(n + 2, 0);
    std::map<std::tuple<int, int, int>, std::size_t> hole;
    for (int i = 1; i <= n + 1; ++i) {
        std::vector<Lit> lits;
        for (int k = 1; k <= n; ++k) lits.emplace_back(pvar(i, k));
        pigeon[i] = builder.id_of(clause_of_lits(std::move(lits)));
    }
    for (int k = 1; k <= n; ++k)
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                hole[{i, j, k}] = builder.id_of(
                    clause_of_lits({Lit(-pvar(i, k)), Lit(-pvar(j, k))}));

    for (const Level& lv : levels) {
        const int m = lv.m;
        const auto& lu = lv.u;

        // Level-(m-1) pigeon axioms: v_{i,1} ∨ … ∨ v_{i,m-1}.
        std::vector<std::size_t> new_pigeon(m + 1, 0);
        for (int i = 1; i <= m; ++i) {
            std::size_t cur = pigeon[i];
            for (int k = 1; k <= m - 1; ++k)
                cur = builder.add_resolve(cur, lv.B1[i][k], lu[i][k].var());
            std::size_t w = cur;  // v_{i,1..m-1} ∨ u_{i,m}
            cur = pigeon[m + 1];
            for (int k = 1; k <= m - 1; ++k)
                cur = builder.add_resolve(cur, lv.A3[i][k],
                                          lu[m + 1][k].var());
            cur = builder.add_resolve(cur, hole.at({i, m + 1, m}),
                                      lu[m + 1][m].var());
            for (int k = 1; k <= m - 1; ++k)
                cur = builder.add_resolve(cur, lv.B2[i][k],
                                          lv.a_lit[i][k].var());
            // cur = v_{i,1..m-1} ∨ ¬u_{i,m}; cancel u_{i,m} against w.
            new_pigeon[i] = builder.add_resolve(w, cur, lu[i][m].var());
        }

        // Level-(m-1) hole axioms: b_{i,k} ∨ b_{j,k}.
        std::map<std::tuple<int, int, int>, std::size_t> new_hole;
        for (int i = 1; i <= m - 1; ++i)
            for (int j = i + 1; j <= m; ++j)
                for (int k = 1; k <= m - 1; ++k) {
                    std::size_t d1 = builder.add_resolve(
                        lv.A2[i][k], hole.at({j, m + 1, k}),
                        lu[m + 1][k].var());
                    std::size_t d2 = builder.add_resolve(
                        lv.A1[i][k], hole.at({i, j, m}), lu[i][m].var());
                    std::size_t d3 =
                        builder.add_resolve(d2, lv.A1[j][k], lu[j][m].var());
                    std::size_t d1p = builder.add_resolve(
                        lv.A2[j][k], hole.at({i, m + 1, k}),
                        lu[m + 1][k].var());
                    std::size_t e1 = builder.add_resolve(
                        lv.B3[j][k], hole.at({i, j, k}), lu[j][k].var());
                    std::size_t e2 =
                        builder.add_resolve(e1, d1p, lv.a_lit[j][k].var());
                    std::size_t f1 =
                        builder.add_resolve(lv.B3[j][k], d1, lu[j][k].var());
                    std::size_t f2 =
                        builder.add_resolve(f1, d3, lv.a_lit[j][k].var());
                    std::size_t g1 =
                        builder.add_resolve(lv.B3[i][k], e2, lu[i][k].var());
                    new_hole[{i, j, k}] =
                        builder.add_resolve(g1, f2, lv.a_lit[i][k].var());
                }

        pigeon = std::move(new_pigeon);
        hole = std::move(new_hole);
    }

    // Level 1: {u11}, {u21}, {¬u11 ∨ ¬u21} refute in two resolutions.
    std::size_t last = builder.add_resolve(hole.at({1, 2, 1}), pigeon[1],
                                           u[1][1].var());
    builder.add_resolve(last, pigeon[2], u[2][1].var());
    return ErProof::from_proof(builder.take_proof());
}

Cnf transform_g(const Cnf& gamma, const ErProof& er) {
    require_er_verified(gamma, er);
    Var top = gamma.num_vars();
    for (const ExtTriple& t : er.triples) top = std::max(top, t.x);
    Cnf g(top);
    for (const Clause& c : gamma.clauses()) g.add(c);
    for (const ExtTriple& t : er.triples) {
        for (int sign : {+1, -1})
            for (const Clause& c : gamma.clauses()) {
                std::vector<Lit> lits(c.begin(), c.end());
                lits.push_back(Lit(sign * t.x));
                g.add(clause_of_lits(std::move(lits)));
            }
    }
    return g;
}

Cnf rebuild_h(const Cnf& gamma, const PairAllocation& pairs) {
    Var top = gamma.num_vars();
    for (const auto& [x, y] : pairs.pairs) top = std::max({top, x, y});
    Cnf h(top);
    for (const Clause& c : gamma.clauses()) h.add(c);
    for (const auto& [x, y] : pairs.pairs) {
        h.add(clause_of_lits({Lit(-x), Lit(y)}));
        h.add(clause_of_lits({Lit(x), Lit(-y)}));
    }
    return h;
}

std::pair<Cnf, PairAllocation> transform_h(const Cnf& gamma,
                                           const ErProof& er) {
    require_er_verified(gamma, er);
    Var top = gamma.num_vars();
    for (const ExtTriple& t : er.triples) top = std::max(top, t.x);
    PairAllocation alloc;
    alloc.base_num_vars = gamma.num_vars();
    for (std::size_t i = 0; i < er.t(); ++i)
        alloc.pairs.emplace_back(er.triples[i].x,
                                 top + 1 + static_cast<Var>(i));
    return {rebuild_h(gamma, alloc), std::move(alloc)};
}

Proof build_rat_proof_of_g(const Cnf& gamma, const ErProof& er) {
    Cnf g = transform_g(gamma, er);  // also verifies the er proof
    ProofBuilder builder(System::kRat, g);
    for (const ExtTriple& t : er.triples) {
        builder.add_rat(Lit(-t.x), clause_of_lits({Lit(-t.x), t.p}));
        builder.add_rat(Lit(-t.x), clause_of_lits({Lit(-t.x), t.q}));
        builder.add_rat(Lit(t.x), clause_of_lits({Lit(t.x), t.p.negated(),
                                                  t.q.negated()}));
    }
    replay_resolution(builder, er.resolution, gamma.size(),
                      g.size() - gamma.size());
    return builder.take_proof();
}

Proof build_ger_proof_of_h(const Cnf& gamma, const ErProof& er,
                           const PairAllocation& pairs) {
    require_er_verified(gamma, er);
    require_pairs_match(gamma, er, pairs);
    Cnf h = rebuild_h(gamma, pairs);
    ProofBuilder builder(System::kGer, h);
    for (const ExtTriple& t : er.triples) {
        builder.add_lambda(clause_of_lits({Lit(-t.x), t.p}));
        builder.add_lambda(clause_of_lits({Lit(-t.x), t.q}));
        builder.add_lambda(
            clause_of_lits({Lit(t.x), t.p.negated(), t.q.negated()}));
    }
    replay_resolution(builder, er.resolution, gamma.size(),
                      2 * er.t());
    return builder.take_proof();
}

Proof build_sbc_proof_of_h(const Cnf& gamma, const ErProof& er,
                           const PairAllocation& pairs) {
    require_er_verified(gamma, er);
    require_pairs_match(gamma, er, pairs);
    Cnf h = rebuild_h(gamma, pairs);
    ProofBuilder builder(System::kSbc, h);
    const std::size_t m = gamma.size();
    const std::size_t t = er.t();

    for (std::size_t i = 0; i < t; ++i) {
        const ExtTriple& triple = er.triples[i];
        Var x = triple.x, y = pairs.pairs[i].second;
        Clause neg_witness = clause_of_lits({Lit(-x), Lit(-y)});
        builder.add_set_blocked(
            neg_witness, clause_of_lits({Lit(-x), Lit(-y), triple.p}));
        builder.add_set_blocked(
            neg_witness, clause_of_lits({Lit(-x), Lit(-y), triple.q}));
        Clause pos_witness = clause_of_lits({Lit(x), Lit(y)});
        builder.add_set_blocked(
            pos_witness, clause_of_lits({Lit(x), Lit(y), triple.p.negated(),
                                         triple.q.negated()}));
    }

    // Resolving the additions against the pair clauses recovers the er
    // extension clauses in triple order.
    for (std::size_t i = 0; i < t; ++i) {
        std::size_t e1 = m + 2 * t + 3 * i + 1;
        std::size_t pair_neg = m + 2 * i + 1;  // ¬x_i ∨ y_i
        std::size_t pair_pos = m + 2 * i + 2;  // x_i ∨ ¬y_i
        Var y = pairs.pairs[i].second;
        builder.add_resolve(e1, pair_neg, y);
        builder.add_resolve(e1 + 1, pair_neg, y);
        builder.add_resolve(e1 + 2, pair_pos, y);
    }

    replay_resolution(builder, er.resolution, m, 5 * t);
    return builder.take_proof();
}

Proof build_sbc_proof_of_php(int n) {
    if (n < 1) throw DomainError("build_sbc_proof_of_php requires n >= 1");
    Cnf php = gen_php(n);
    ProofBuilder builder(System::kSbc, php);
    auto pvar = [n](int i, int k) { return (i - 1) * n + k; };
    auto hole_id = [&](int i, int j, int k) {
        return builder.id_of(
            clause_of_lits({Lit(-pvar(i, k)), Lit(-pvar(j, k))}));
    };
    auto pigeon_id = [&](int i) {
        std::vector<Lit> lits;
        for (int k = 1; k <= n; ++k) lits.emplace_back(pvar(i, k));
        return builder.id_of(clause_of_lits(std::move(lits)));
    };

    // Addition phase: C_{i,j,k} with witness
    // {¬p_{i,k}, ¬p_{j,i}, p_{i,i}, p_{j,k}}.
    std::map<std::tuple<int, int, int>, std::size_t> added;
    for (int i = 1; i <= n - 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j)
            for (int k = i + 1; k <= n; ++k) {
                std::vector<Lit> lits{Lit(-pvar(i, k)), Lit(-pvar(j, i))};
                for (int l = 1; l <= n + 1; ++l)
                    if (l != i) lits.emplace_back(pvar(l, k));
                for (int l = 1; l <= n + 1; ++l)
                    if (l != j) lits.emplace_back(pvar(l, i));
                Clause witness = clause_of_lits(
                    {Lit(-pvar(i, k)), Lit(-pvar(j, i)), Lit(pvar(i, i)),
                     Lit(pvar(j, k))});
                added[{i, j, k}] = builder.add_set_blocked(
                    std::move(witness), clause_of_lits(std::move(lits)));
            }

    // Collapse each C_{i,j,k} to R_{i,j,k} = ¬p_{i,k} ∨ ¬p_{j,i} by
    // resolving away every positive literal against hole axioms.
    std::map<std::tuple<int, int, int>, std::size_t> collapsed;
    for (int i = 1; i <= n - 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j)
            for (int k = i + 1; k <= n; ++k) {
                std::size_t cur = added.at({i, j, k});
                for (int l = 1; l <= n + 1; ++l)
                    if (l != i)
                        cur = builder.add_resolve(
                            cur, hole_id(std::min(i, l), std::max(i, l), k),
                            pvar(l, k));
                for (int l = 1; l <= n + 1; ++l)
                    if (l != j)
                        cur = builder.add_resolve(
                            cur, hole_id(std::min(j, l), std::max(j, l), i),
                            pvar(l, i));
                collapsed[{i, j, k}] = cur;
            }

    // Chain each pigeon axiom P_i down to the unit ¬p_{j,i} (smallest
    // free pigeon to smallest free hole), then refute P_{n+1}.
    std::map<std::pair<int, int>, std::size_t> unit;  // (pigeon, hole) → id
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n + 1; ++j) {
            std::size_t cur = pigeon_id(i);
            for (int k = 1; k <= n; ++k) {
                std::size_t other =
                    k < i ? unit.at({i, k})
                          : (k == i ? hole_id(i, j, i)
                                    : collapsed.at({i, j, k}));
                cur = builder.add_resolve(cur, other, pvar(i, k));
            }
            unit[{j, i}] = cur;
        }
    std::size_t cur = pigeon_id(n + 1);
    for (int i = 1; i <= n; ++i)
        cur = builder.add_resolve(cur, unit.at({n + 1, i}), pvar(n + 1, i));
    return builder.take_proof();
}

std::size_t cook_triple_count(int n) {
    if (n < 1) throw DomainError("cook_triple_count requires n >= 1");
    std::size_t t = 0;
    for (int m = 2; m <= n; ++m)
        t += 2u * static_cast<std::size_t>(m) * (m - 1);
    return t;
}

std::size_t sbc_php_proof_size(int n) {
    if (n < 1) throw DomainError("sbc_php_proof_size requires n >= 1");
    std::size_t nn = static_cast<std::size_t>(n);
    std::size_t additions = 0;
    for (int i = 1; i <= n - 1; ++i)
        additions += static_cast<std::size_t>(n + 1 - i) *
                     static_cast<std::size_t>(n - i);
    std::size_t resolutions =
        2 * nn * additions + nn * nn * (nn + 1) / 2 + nn;
    return 1 + additions + resolutions;
}

}  // namespace clausal
