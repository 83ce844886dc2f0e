#include "clausal/proof.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include "clausal/redundancy.hpp"

namespace clausal {

namespace {

constexpr std::size_t kMaxLineLength = 1u << 20;
constexpr long long kMaxVar = 1 << 28;

// Reads one line; rejects pathologically long ones.
bool read_line(std::istream& in, std::string& line, std::size_t& line_no) {
    line.clear();
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (line.size() > kMaxLineLength)
        throw ParseError("line " + std::to_string(line_no) + ": line too long");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) toks.push_back(std::move(tok));
    return toks;
}

struct LineParser {
    std::size_t line_no;
    std::vector<long long> ints;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("line " + std::to_string(line_no) + ": " + msg);
    }

    long long take(std::size_t idx, const char* what) const {
        if (idx >= ints.size()) fail(std::string("missing ") + what);
        return ints[idx];
    }

    // Literal codes from `from` up to a terminating 0; nothing may
    // follow the terminator.
    std::vector<int> lits_from(std::size_t from) const {
        std::vector<int> lits;
        std::size_t i = from;
        for (; i < ints.size(); ++i) {
            long long v = ints[i];
            if (v == 0) break;
            if (v > kMaxVar || v < -kMaxVar) fail("literal out of range");
            lits.push_back(static_cast<int>(v));
        }
        if (i == ints.size()) fail("missing terminating 0");
        if (i + 1 != ints.size()) fail("trailing tokens after terminating 0");
        return lits;
    }

    std::size_t clause_id(std::size_t idx, const char* what) const {
        long long v = take(idx, what);
        if (v <= 0) fail(std::string("nonpositive ") + what);
        return static_cast<std::size_t>(v);
    }
};

bool kind_allowed(System system, StepKind kind) {
    switch (kind) {
        case StepKind::kResolve:
        case StepKind::kWeaken:
            return true;
        case StepKind::kAddBc:
            return system == System::kBc || system == System::kRat ||
                   system == System::kSbc;
        case StepKind::kAddRat:
            return system == System::kRat;
        case StepKind::kAddSbc:
            return system == System::kSbc;
    }
    return false;
}

const char* tag_of(StepKind kind) {
    switch (kind) {
        case StepKind::kResolve: return "r";
        case StepKind::kWeaken: return "w";
        case StepKind::kAddBc: return "b";
        case StepKind::kAddRat: return "t";
        case StepKind::kAddSbc: return "s";
    }
    return "?";
}

CheckReport check_impl(const Cnf& cnf, const Proof& proof, bool require_empty) {
    CheckReport report;
    report.size = proof_size(proof);
    auto reject = [&report](std::optional<std::size_t> idx, std::string why) {
        report.ok = false;
        report.failed_step = idx;
        report.reason = std::move(why);
        return report;
    };

    // parse_proof cannot produce these, but hand-built Proof values can.
    if (proof.system != System::kGer && !proof.lambda.empty())
        return reject(0, "extension clauses are not allowed in this system");
    if (proof.system != System::kEr && !proof.triples.empty())
        return reject(0, "extension triples are not allowed in this system");

    const bool bounded_vars =
        proof.system == System::kBc || proof.system == System::kRat ||
        proof.system == System::kSbc || proof.system == System::kGer;

    std::vector<Clause> by_id;
    by_id.reserve(1 + cnf.size() + proof.lambda.size() +
                  3 * proof.triples.size() + proof.steps.size());
    by_id.emplace_back();  // id 0 unused
    for (const Clause& c : cnf.clauses()) by_id.push_back(c);

    Cnf acc = cnf;
    Var universe = cnf.num_vars();
    std::size_t idx = 0;  // unified entry index: prefix entries, then steps

    for (const auto& entry : proof.lambda) {
        if (!entry) return reject(idx, "tautological extension clause listing");
        for (Lit l : *entry)
            if (l.var() > universe)
                return reject(idx, "new variable in extension clause");
        by_id.push_back(*entry);
        acc.add(*entry);
        ++idx;
    }
    if (!proof.lambda.empty()) {
        Cnf lambda(cnf.num_vars());
        for (const auto& entry : proof.lambda) lambda.add(*entry);
        if (!is_blocked_extension(cnf, lambda))
            return reject(
                0, "extension clauses are not a blocked extension of the input");
    }

    for (const ExtTriple& t : proof.triples) {
        if (t.x <= universe)
            return reject(idx, "extension variable is not fresh");
        if (t.p.code == 0 || t.q.code == 0)
            return reject(idx, "missing extension literal");
        if (t.p.var() > universe || t.q.var() > universe)
            return reject(idx, "extension literal over an unknown variable");
        // x <-> p AND q; the long clause is tautological iff p = ¬q.
        std::array<Lit, 2> first{Lit(-t.x), t.p};
        std::array<Lit, 2> second{Lit(-t.x), t.q};
        std::array<Lit, 3> third{Lit(t.x), t.p.negated(), t.q.negated()};
        auto c1 = normalize_clause(std::span<const Lit>(first));
        auto c2 = normalize_clause(std::span<const Lit>(second));
        auto c3 = normalize_clause(std::span<const Lit>(third));
        if (!c1 || !c2 || !c3)
            return reject(idx, "tautological extension clause");
        universe = t.x;
        acc.ensure_num_vars(universe);
        for (const auto& c : {*c1, *c2, *c3}) {
            by_id.push_back(c);
            acc.add(c);
        }
        ++idx;
    }

    for (const ProofStep& step : proof.steps) {
        if (!kind_allowed(proof.system, step.kind))
            return reject(idx, std::string("step kind '") + tag_of(step.kind) +
                                   "' is not allowed in " +
                                   to_string(proof.system) + " proofs");
        if (!step.result)
            return reject(idx, "tautological clause listing");
        const Clause& result = *step.result;
        if (bounded_vars) {
            for (Lit l : result)
                if (l.var() > universe)
                    return reject(idx, "new variable in derived clause");
        }
        switch (step.kind) {
            case StepKind::kResolve: {
                if (step.id_a == 0 || step.id_a >= by_id.size() ||
                    step.id_b == 0 || step.id_b >= by_id.size())
                    return reject(idx, "antecedent id out of range");
                std::optional<Clause> resolvent;
                try {
                    resolvent =
                        resolve_on(by_id[step.id_a], by_id[step.id_b],
                                   step.pivot_var);
                } catch (const DomainError&) {
                    return reject(idx,
                                  "pivot does not occur with opposite "
                                  "polarities in the antecedents");
                }
                if (!resolvent)
                    return reject(idx, "resolvent is tautological");
                if (!(*resolvent == result))
                    return reject(
                        idx, "listed clause differs from the computed resolvent");
                break;
            }
            case StepKind::kWeaken: {
                if (step.id_a == 0 || step.id_a >= by_id.size())
                    return reject(idx, "antecedent id out of range");
                if (!subsumes(by_id[step.id_a], result))
                    return reject(
                        idx, "weakening antecedent is not a subset of the clause");
                break;
            }
            case StepKind::kAddBc: {
                if (step.pivot.code == 0)
                    return reject(idx, "missing pivot literal");
                if (!result.contains(step.pivot))
                    return reject(idx, "pivot literal is not in the clause");
                if (!is_blocked(result, step.pivot, acc))
                    return reject(idx, "clause is not blocked for the pivot");
                break;
            }
            case StepKind::kAddRat: {
                if (step.pivot.code == 0)
                    return reject(idx, "missing pivot literal");
                if (!result.contains(step.pivot))
                    return reject(idx, "pivot literal is not in the clause");
                if (!is_rat(result, step.pivot, acc))
                    return reject(idx,
                                  "clause is not a resolution asymmetric "
                                  "tautology for the pivot");
                break;
            }
            case StepKind::kAddSbc: {
                if (!step.witness)
                    return reject(idx, "tautological witness listing");
                if (step.witness->empty())
                    return reject(idx, "empty witness");
                if (!subsumes(*step.witness, result))
                    return reject(idx, "witness is not a subset of the clause");
                if (!is_sbc(result, *step.witness, acc))
                    return reject(
                        idx, "clause is not set-blocked for the witness");
                break;
            }
        }
        by_id.push_back(result);
        acc.add(result);
        ++idx;
    }

    if (require_empty && !acc.contains(Clause()))
        return reject(std::nullopt, "no empty clause derived");

    report.ok = true;
    return report;
}

}  // namespace

std::string to_string(System s) {
    switch (s) {
        case System::kRes: return "res";
        case System::kBc: return "bc";
        case System::kRat: return "rat";
        case System::kSbc: return "sbc";
        case System::kGer: return "ger";
        case System::kEr: return "er";
    }
    return "?";
}

std::optional<System> system_from_string(const std::string& name) {
    if (name == "res") return System::kRes;
    if (name == "bc") return System::kBc;
    if (name == "rat") return System::kRat;
    if (name == "sbc") return System::kSbc;
    if (name == "ger") return System::kGer;
    if (name == "er") return System::kEr;
    return std::nullopt;
}

std::size_t proof_size(const Proof& proof) {
    std::size_t base = 1 + proof.steps.size();
    if (proof.system == System::kGer) return proof.lambda.size() + base;
    if (proof.system == System::kEr) return 3 * proof.triples.size() + base;
    return base;
}

CheckReport check(const Cnf& cnf, const Proof& proof) {
    return check_impl(cnf, proof, /*require_empty=*/true);
}

CheckReport check_derivation(const Cnf& cnf, const Proof& proof) {
    return check_impl(cnf, proof, /*require_empty=*/false);
}

Proof parse_proof(std::istream& in) {
    Proof proof;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    bool saw_step = false;

    while (read_line(in, line, line_no)) {
        std::vector<std::string> toks = split_tokens(line);
        if (toks.empty() || toks[0] == "c") continue;

        LineParser lp{line_no, {}};
        if (!saw_header) {
            if (toks.size() != 3 || toks[0] != "p" || toks[1] != "proof")
                lp.fail("expected header 'p proof <system>'");
            std::optional<System> sys = system_from_string(toks[2]);
            if (!sys) lp.fail("unknown proof system '" + toks[2] + "'");
            proof.system = *sys;
            saw_header = true;
            continue;
        }

        const std::string& tag = toks[0];
        if (tag.size() != 1 || std::string("rwbtsxe").find(tag[0]) ==
                                   std::string::npos)
            lp.fail("unknown line tag '" + tag + "'");

        lp.ints.reserve(toks.size() - 1);
        for (std::size_t i = 1; i < toks.size(); ++i) {
            long long v = 0;
            auto [ptr, ec] = std::from_chars(
                toks[i].data(), toks[i].data() + toks[i].size(), v);
            if (ec != std::errc() || ptr != toks[i].data() + toks[i].size())
                lp.fail("malformed integer '" + toks[i] + "'");
            lp.ints.push_back(v);
        }

        switch (tag[0]) {
            case 'x': {
                if (proof.system != System::kGer)
                    lp.fail("'x' lines are only allowed in ger proofs");
                if (saw_step)
                    lp.fail("extension clause after proof steps");
                std::vector<int> lits = lp.lits_from(0);
                proof.lambda.push_back(
                    normalize_clause(std::span<const int>(lits)));
                break;
            }
            case 'e': {
                if (proof.system != System::kEr)
                    lp.fail("'e' lines are only allowed in er proofs");
                if (saw_step)
                    lp.fail("extension triple after proof steps");
                long long x = lp.take(0, "extension variable");
                long long p = lp.take(1, "extension literal p");
                long long q = lp.take(2, "extension literal q");
                if (lp.take(3, "terminating 0") != 0 || lp.ints.size() != 4)
                    lp.fail("malformed extension triple");
                if (x <= 0 || x > kMaxVar)
                    lp.fail("extension variable out of range");
                if (p == 0 || q == 0)
                    lp.fail("zero literal in extension triple");
                if (p > kMaxVar || p < -kMaxVar || q > kMaxVar || q < -kMaxVar)
                    lp.fail("literal out of range");
                proof.triples.push_back(ExtTriple{
                    static_cast<Var>(x), Lit(static_cast<int>(p)),
                    Lit(static_cast<int>(q))});
                break;
            }
            case 'r': {
                ProofStep step;
                step.kind = StepKind::kResolve;
                step.id_a = lp.clause_id(0, "antecedent id");
                step.id_b = lp.clause_id(1, "antecedent id");
                long long v = lp.take(2, "pivot variable");
                if (v <= 0 || v > kMaxVar) lp.fail("nonpositive pivot variable");
                step.pivot_var = static_cast<Var>(v);
                std::vector<int> lits = lp.lits_from(3);
                step.result = normalize_clause(std::span<const int>(lits));
                proof.steps.push_back(std::move(step));
                saw_step = true;
                break;
            }
            case 'w': {
                ProofStep step;
                step.kind = StepKind::kWeaken;
                step.id_a = lp.clause_id(0, "antecedent id");
                std::vector<int> lits = lp.lits_from(1);
                step.result = normalize_clause(std::span<const int>(lits));
                proof.steps.push_back(std::move(step));
                saw_step = true;
                break;
            }
            case 'b':
            case 't': {
                StepKind kind =
                    tag[0] == 'b' ? StepKind::kAddBc : StepKind::kAddRat;
                if (!kind_allowed(proof.system, kind))
                    lp.fail(std::string("step kind '") + tag +
                            "' is not allowed in " + to_string(proof.system) +
                            " proofs");
                ProofStep step;
                step.kind = kind;
                long long pv = lp.take(0, "pivot literal");
                if (pv == 0) lp.fail("missing pivot literal");
                if (pv > kMaxVar || pv < -kMaxVar)
                    lp.fail("literal out of range");
                step.pivot = Lit(static_cast<int>(pv));
                std::vector<int> lits = lp.lits_from(1);
                step.result = normalize_clause(std::span<const int>(lits));
                proof.steps.push_back(std::move(step));
                saw_step = true;
                break;
            }
            case 's': {
                if (!kind_allowed(proof.system, StepKind::kAddSbc))
                    lp.fail("step kind 's' is not allowed in " +
                            to_string(proof.system) + " proofs");
                ProofStep step;
                step.kind = StepKind::kAddSbc;
                long long k = lp.take(0, "witness size");
                if (k <= 0) lp.fail("witness size must be positive");
                std::vector<int> wlits;
                for (long long i = 0; i < k; ++i) {
                    long long v = lp.take(static_cast<std::size_t>(1 + i),
                                          "witness literal");
                    if (v == 0) lp.fail("witness arity mismatch");
                    if (v > kMaxVar || v < -kMaxVar)
                        lp.fail("literal out of range");
                    wlits.push_back(static_cast<int>(v));
                }
                step.witness = normalize_clause(std::span<const int>(wlits));
                std::vector<int> lits =
                    lp.lits_from(static_cast<std::size_t>(1 + k));
                step.result = normalize_clause(std::span<const int>(lits));
                proof.steps.push_back(std::move(step));
                saw_step = true;
                break;
            }
            default:
                lp.fail("unknown line tag '" + tag + "'");
        }
    }

    if (!saw_header) throw ParseError("missing proof header 'p proof <system>'");
    return proof;
}

Proof parse_proof_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open proof file: " + path);
    return parse_proof(in);
}

void write_proof(const Proof& proof, std::ostream& out) {
    out << "p proof " << to_string(proof.system) << "\n";
    for (const auto& entry : proof.lambda) {
        if (!entry)
            throw DomainError("cannot serialize a tautological extension clause");
        out << "x";
        for (Lit l : *entry) out << ' ' << l.code;
        out << " 0\n";
    }
    for (const ExtTriple& t : proof.triples)
        out << "e " << t.x << ' ' << t.p.code << ' ' << t.q.code << " 0\n";
    for (const ProofStep& step : proof.steps) {
        if (!step.result)
            throw DomainError("cannot serialize a tautological clause listing");
        switch (step.kind) {
            case StepKind::kResolve:
                out << "r " << step.id_a << ' ' << step.id_b << ' '
                    << step.pivot_var;
                break;
            case StepKind::kWeaken:
                out << "w " << step.id_a;
                break;
            case StepKind::kAddBc:
                out << "b " << step.pivot.code;
                break;
            case StepKind::kAddRat:
                out << "t " << step.pivot.code;
                break;
            case StepKind::kAddSbc:
                if (!step.witness)
                    throw DomainError(
                        "cannot serialize a tautological witness listing");
                out << "s " << step.witness->size();
                for (Lit l : *step.witness) out << ' ' << l.code;
                break;
        }
        for (Lit l : *step.result) out << ' ' << l.code;
        out << " 0\n";
    }
}

Proof hoist_blocked_additions(const Cnf& cnf, const Proof& proof) {
    if (proof.system != System::kBc)
        throw DomainError(
            "hoisting applies to blocked-clause (bc) proofs only");
    CheckReport pre = check(cnf, proof);
    if (!pre.ok)
        throw InputNotVerified("input proof is not verified: " + pre.reason);

    const std::size_t m = cnf.size();
    std::vector<std::size_t> additions, others;
    for (std::size_t i = 0; i < proof.steps.size(); ++i)
        (proof.steps[i].kind == StepKind::kAddBc ? additions : others)
            .push_back(i);

    // Old id of step i is m + 1 + i; assign new ids front-loading the
    // additions while preserving both relative orders.
    std::vector<std::size_t> remap(m + 1 + proof.steps.size());
    for (std::size_t id = 0; id <= m; ++id) remap[id] = id;
    std::size_t next = m + 1;
    for (std::size_t i : additions) remap[m + 1 + i] = next++;
    for (std::size_t i : others) remap[m + 1 + i] = next++;

    Proof result;
    result.system = System::kBc;
    result.steps.reserve(proof.steps.size());
    for (std::size_t i : additions) result.steps.push_back(proof.steps[i]);
    for (std::size_t i : others) {
        ProofStep step = proof.steps[i];
        step.id_a = remap[step.id_a];
        if (step.kind == StepKind::kResolve) step.id_b = remap[step.id_b];
        result.steps.push_back(std::move(step));
    }

    CheckReport post = check(cnf, result);
    if (!post.ok)
        throw std::logic_error("hoisted proof failed re-verification: " +
                               post.reason);
    return result;
}

ProofBuilder::ProofBuilder(System system, const Cnf& inputs)
    : formula_(inputs), inputs_(inputs.size()), universe_(inputs.num_vars()) {
    proof_.system = system;
    by_id_.emplace_back();  // id 0 unused
    for (const Clause& c : inputs.clauses()) {
        by_id_.push_back(c);
        first_id_.emplace(c, by_id_.size() - 1);
    }
}

const Clause& ProofBuilder::clause_of(std::size_t id) const {
    if (id == 0 || id >= by_id_.size())
        throw DomainError("clause id out of range");
    return by_id_[id];
}

std::size_t ProofBuilder::id_of(const Clause& c) const {
    auto it = first_id_.find(c);
    if (it == first_id_.end())
        throw DomainError("clause is not present in the derivation");
    return it->second;
}

std::size_t ProofBuilder::append_clause(Clause c) {
    by_id_.push_back(c);
    std::size_t id = by_id_.size() - 1;
    first_id_.emplace(c, id);  // keeps the first id on duplicates
    formula_.add(std::move(c));
    return id;
}

std::size_t ProofBuilder::add_lambda(Clause c) {
    if (proof_.system != System::kGer)
        throw DomainError("extension clauses are only legal in ger proofs");
    if (!proof_.steps.empty())
        throw DomainError("extension clauses must precede proof steps");
    for (Lit l : c)
        if (l.var() > universe_)
            throw DomainError("new variable in extension clause");
    proof_.lambda.push_back(c);
    return append_clause(std::move(c));
}

std::size_t ProofBuilder::add_triple(Var x, Lit p, Lit q) {
    if (proof_.system != System::kEr)
        throw DomainError("extension triples are only legal in er proofs");
    if (!proof_.steps.empty())
        throw DomainError("extension triples must precede proof steps");
    if (x <= universe_)
        throw DomainError("extension variable is not fresh");
    if (p.var() > universe_ || q.var() > universe_)
        throw DomainError("extension literal over an unknown variable");
    std::array<Lit, 2> first{Lit(-x), p};
    std::array<Lit, 2> second{Lit(-x), q};
    std::array<Lit, 3> third{Lit(x), p.negated(), q.negated()};
    auto c1 = normalize_clause(std::span<const Lit>(first));
    auto c2 = normalize_clause(std::span<const Lit>(second));
    auto c3 = normalize_clause(std::span<const Lit>(third));
    if (!c1 || !c2 || !c3)
        throw DomainError("tautological extension clause (p equals not-q)");
    universe_ = x;
    formula_.ensure_num_vars(x);
    proof_.triples.push_back(ExtTriple{x, p, q});
    std::size_t id = append_clause(std::move(*c1));
    append_clause(std::move(*c2));
    append_clause(std::move(*c3));
    return id;
}

std::size_t ProofBuilder::add_resolve(std::size_t id_a, std::size_t id_b,
                                      Var pivot) {
    const Clause& a = clause_of(id_a);
    const Clause& b = clause_of(id_b);
    std::optional<Clause> r = resolve_on(a, b, pivot);
    if (!r) throw DomainError("resolvent is tautological");
    ProofStep step;
    step.kind = StepKind::kResolve;
    step.id_a = id_a;
    step.id_b = id_b;
    step.pivot_var = pivot;
    step.result = *r;
    proof_.steps.push_back(std::move(step));
    return append_clause(std::move(*r));
}

std::size_t ProofBuilder::add_weaken(std::size_t id, Clause target) {
    const Clause& a = clause_of(id);
    if (!subsumes(a, target))
        throw DomainError("weakening antecedent is not a subset of the target");
    ProofStep step;
    step.kind = StepKind::kWeaken;
    step.id_a = id;
    step.result = target;
    proof_.steps.push_back(std::move(step));
    return append_clause(std::move(target));
}

std::size_t ProofBuilder::add_blocked(Lit pivot, Clause c) {
    if (!kind_allowed(proof_.system, StepKind::kAddBc))
        throw DomainError("blocked-clause additions are not legal in " +
                          to_string(proof_.system) + " proofs");
    if (!c.contains(pivot))
        throw DomainError("pivot literal is not in the clause");
    ProofStep step;
    step.kind = StepKind::kAddBc;
    step.pivot = pivot;
    step.result = c;
    proof_.steps.push_back(std::move(step));
    return append_clause(std::move(c));
}

std::size_t ProofBuilder::add_rat(Lit pivot, Clause c) {
    if (!kind_allowed(proof_.system, StepKind::kAddRat))
        throw DomainError("RAT additions are not legal in " +
                          to_string(proof_.system) + " proofs");
    if (!c.contains(pivot))
        throw DomainError("pivot literal is not in the clause");
    ProofStep step;
    step.kind = StepKind::kAddRat;
    step.pivot = pivot;
    step.result = c;
    proof_.steps.push_back(std::move(step));
    return append_clause(std::move(c));
}

std::size_t ProofBuilder::add_set_blocked(Clause witness, Clause c) {
    if (!kind_allowed(proof_.system, StepKind::kAddSbc))
        throw DomainError("set-blocked additions are not legal in " +
                          to_string(proof_.system) + " proofs");
    if (witness.empty()) throw DomainError("empty witness");
    if (!subsumes(witness, c))
        throw DomainError("witness is not a subset of the clause");
    ProofStep step;
    step.kind = StepKind::kAddSbc;
    step.witness = std::move(witness);
    step.result = c;
    proof_.steps.push_back(std::move(step));
    return append_clause(std::move(c));
}

std::size_t ProofBuilder::splice(const InputDerivation& derivation) {
    std::size_t current = id_of(derivation.leaf);
    if (derivation.weaken_to)
        current = add_weaken(current, *derivation.weaken_to);
    for (const InputResStep& step : derivation.steps)
        current = add_resolve(current, id_of(step.side), step.pivot);
    return current;
}

}  // namespace clausal
