#include "clausal/core.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace clausal {

namespace {

constexpr std::size_t kMaxLineBytes = 1 << 20;

}  // namespace

std::string to_string(Lit l) { return std::to_string(l.code); }

Clause Clause::from_sorted(std::vector<Lit> lits) {
    Clause c;
    for (std::size_t i = 0; i + 1 < lits.size(); ++i) {
        if (!lit_less(lits[i], lits[i + 1]))
            throw DomainError("clause literals not strictly sorted");
        if (lits[i].var() == lits[i + 1].var())
            throw DomainError("tautological clause");
    }
    c.lits_ = std::move(lits);
    return c;
}

bool Clause::contains(Lit l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l, lit_less);
}

bool Clause::contains_var(Var v) const {
    return contains(Lit(v)) || contains(Lit(-v));
}

Clause Clause::without(Lit l) const {
    std::vector<Lit> out;
    out.reserve(lits_.size());
    for (Lit x : lits_)
        if (x != l) out.push_back(x);
    return from_sorted(std::move(out));
}

std::optional<Clause> normalize_clause(std::span<const int> codes) {
    std::vector<Lit> lits;
    lits.reserve(codes.size());
    for (int c : codes) lits.push_back(Lit(c));
    return normalize_clause(std::span<const Lit>(lits));
}

std::optional<Clause> normalize_clause(std::span<const Lit> lits) {
    std::vector<Lit> v(lits.begin(), lits.end());
    std::sort(v.begin(), v.end(), lit_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i].var() == v[i + 1].var()) return std::nullopt;
    return Clause::from_sorted(std::move(v));
}

bool clause_less(const Clause& a, const Clause& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), lit_less);
}

std::string to_string(const Clause& c) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += " ";
        s += to_string(c.lits()[i]);
    }
    s += ")";
    return s;
}

bool subsumes(const Clause& a, const Clause& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end(), lit_less);
}

std::optional<Clause> clause_union(const Clause& a, const Clause& b) {
    std::vector<Lit> v;
    v.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(v), lit_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i].var() == v[i + 1].var()) return std::nullopt;
    return Clause::from_sorted(std::move(v));
}

std::optional<Clause> resolve_on(const Clause& a, const Clause& b, Var v) {
    if (v <= 0) throw DomainError("pivot variable must be positive");
    Lit pos(v), neg(-v);
    const Clause* pa = nullptr;
    const Clause* pb = nullptr;
    if (a.contains(pos) && b.contains(neg)) {
        pa = &a;
        pb = &b;
    } else if (b.contains(pos) && a.contains(neg)) {
        pa = &b;
        pb = &a;
    } else {
        throw DomainError("pivot variable does not occur with both polarities");
    }
    return clause_union(pa->without(pos), pb->without(neg));
}

std::size_t ClauseHash::operator()(const Clause& c) const {
    std::size_t h = 1469598103934665603ull;
    for (Lit l : c) {
        h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(l.code));
        h *= 1099511628211ull;
    }
    return h;
}

void PartialAssignment::assign(Lit l) {
    auto [it, inserted] = vals_.emplace(l.var(), l.positive());
    if (!inserted && it->second != l.positive())
        throw DomainError("conflicting assignment to variable " + std::to_string(l.var()));
}

PartialAssignment PartialAssignment::from_literals(std::span<const Lit> lits) {
    PartialAssignment a;
    for (Lit l : lits) a.assign(l);
    return a;
}

std::optional<bool> PartialAssignment::value(Var v) const {
    auto it = vals_.find(v);
    if (it == vals_.end()) return std::nullopt;
    return it->second;
}

std::optional<bool> PartialAssignment::value(Lit l) const {
    auto b = value(l.var());
    if (!b) return std::nullopt;
    return l.positive() ? *b : !*b;
}

std::vector<Lit> PartialAssignment::literals() const {
    std::vector<Lit> out;
    out.reserve(vals_.size());
    for (auto [v, b] : vals_) out.push_back(Lit(b ? v : -v));
    std::sort(out.begin(), out.end(), lit_less);
    return out;
}

PartialAssignment PartialAssignment::negating(const Clause& c) {
    PartialAssignment a;
    for (Lit l : c) a.assign(l.negated());
    return a;
}

bool PartialAssignment::satisfies(const Clause& c) const {
    for (Lit l : c)
        if (value(l) == std::optional<bool>(true)) return true;
    return false;
}

void Cnf::ensure_num_vars(int n) {
    if (n > num_vars_) num_vars_ = n;
}

bool Cnf::add(Clause c) {
    if (index_.count(c)) return false;
    for (Lit l : c) ensure_num_vars(l.var());
    index_.insert(c);
    clauses_.push_back(std::move(c));
    return true;
}

bool Cnf::contains(const Clause& c) const { return index_.count(c) != 0; }

std::vector<std::size_t> Cnf::canonical_order() const {
    std::vector<std::size_t> idx(clauses_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return clause_less(clauses_[a], clauses_[b]);
    });
    return idx;
}

std::vector<Var> Cnf::occurring_vars() const {
    std::unordered_set<Var> seen;
    for (const Clause& c : clauses_)
        for (Lit l : c) seen.insert(l.var());
    std::vector<Var> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool Cnf::same_clauses(const Cnf& other) const {
    if (size() != other.size()) return false;
    for (const Clause& c : clauses_)
        if (!other.contains(c)) return false;
    return true;
}

std::optional<Clause> restrict_clause(const Clause& c, const PartialAssignment& alpha) {
    std::vector<Lit> kept;
    kept.reserve(c.size());
    for (Lit l : c) {
        auto v = alpha.value(l);
        if (!v) {
            kept.push_back(l);
        } else if (*v) {
            return std::nullopt;  // satisfied
        }
        // falsified literals are dropped
    }
    return Clause::from_sorted(std::move(kept));
}

Cnf restrict_cnf(const Cnf& gamma, const PartialAssignment& alpha) {
    Cnf out(gamma.num_vars());
    for (const Clause& c : gamma)
        if (auto r = restrict_clause(c, alpha)) out.add(std::move(*r));
    return out;
}

Cnf project(const Cnf& gamma, Lit p) {
    Cnf out(gamma.num_vars());
    for (const Clause& c : gamma)
        if (c.contains(p)) out.add(c.without(p));
    return out;
}

bool subsumes(const Cnf& gamma, const Cnf& delta) {
    for (const Clause& d : delta) {
        bool found = false;
        for (const Clause& c : gamma) {
            if (subsumes(c, d)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

namespace {

// Reads one line with a hard length cap; returns false on EOF.
bool read_line_capped(std::istream& in, std::string& line) {
    line.clear();
    char ch;
    bool any = false;
    while (in.get(ch)) {
        any = true;
        if (ch == '\n') return true;
        line.push_back(ch);
        if (line.size() > kMaxLineBytes) throw ParseError("line exceeds 1 MiB");
    }
    return any;
}

long long parse_int_token(const std::string& tok) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("malformed integer token '" + tok + "'");
    return value;
}

}  // namespace

Cnf parse_dimacs(std::istream& in, std::vector<std::string>* warnings) {
    std::string line;
    bool have_header = false;
    long long declared_vars = 0, declared_clauses = 0;
    Cnf cnf;
    std::vector<int> pending;
    std::size_t complete_clauses = 0;

    while (read_line_capped(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok.size() > 1 && tok[0] == 'c') continue;
        if (tok == "p") {
            if (have_header) throw ParseError("duplicate DIMACS header");
            std::string fmt;
            if (!(ls >> fmt) || fmt != "cnf") throw ParseError("expected 'p cnf' header");
            std::string vs, cs;
            if (!(ls >> vs >> cs)) throw ParseError("incomplete DIMACS header");
            declared_vars = parse_int_token(vs);
            declared_clauses = parse_int_token(cs);
            if (declared_vars < 0 || declared_clauses < 0)
                throw ParseError("negative count in DIMACS header");
            if (declared_vars > (1 << 28)) throw ParseError("declared variable count too large");
            std::string extra;
            if (ls >> extra) throw ParseError("trailing tokens after DIMACS header");
            have_header = true;
            cnf = Cnf(static_cast<int>(declared_vars));
            continue;
        }
        if (!have_header) throw ParseError("clause data before 'p cnf' header");
        // Clause tokens; a clause may span lines and ends at 0.
        do {
            long long v = parse_int_token(tok);
            if (v == 0) {
                auto c = normalize_clause(std::span<const int>(pending));
                if (!c) throw ParseError("tautological clause in DIMACS input");
                cnf.add(std::move(*c));
                ++complete_clauses;
                pending.clear();
            } else {
                if (v > declared_vars || v < -declared_vars)
                    throw ParseError("literal " + std::to_string(v) +
                                     " exceeds declared variable count");
                pending.push_back(static_cast<int>(v));
            }
        } while (ls >> tok);
    }
    if (!have_header) throw ParseError("missing 'p cnf' header");
    if (!pending.empty()) throw ParseError("unterminated clause at end of input");
    if (warnings && complete_clauses != static_cast<std::size_t>(declared_clauses))
        warnings->push_back("clause count mismatch: header declares " +
                            std::to_string(declared_clauses) + ", found " +
                            std::to_string(complete_clauses));
    return cnf;
}

void write_dimacs(const Cnf& cnf, std::ostream& out) {
    out << "p cnf " << cnf.num_vars() << " " << cnf.size() << "\n";
    for (const Clause& c : cnf) {
        for (Lit l : c) out << l.code << " ";
        out << "0\n";
    }
}

Cnf parse_dimacs_file(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CNF file: " + path);
    return parse_dimacs(in, warnings);
}

}  // namespace clausal
