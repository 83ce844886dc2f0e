// Proof objects: the line-based file format, per-system checking with
// unified failure indices, size accounting, the builder, blocked-
// addition hoisting, and replaying ger proofs as bc proofs.

#include <sstream>
#include <string>
#include <vector>

#include "clausal/builders.hpp"
#include "clausal/proof.hpp"
#include "clausal/redundancy.hpp"
#include "clausal/simulation.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace clausal;
using namespace testutil;

namespace {

Proof parse(const std::string& text) {
    std::istringstream in(text);
    return parse_proof(in);
}

std::string serialize(const Proof& proof) {
    std::ostringstream out;
    write_proof(proof, out);
    return out.str();
}

CheckReport checked(const Cnf& cnf, const std::string& text) {
    return check(cnf, parse(text));
}

// PHP over three variables-ish fixture used across cases: {1}, {-1},
// {2,3} admits {-2,-3} as a blocked clause (pivot -2 or -3: the only
// partner is {2,3} and the resolvent is tautological).
Cnf small_blockable() { return mk(3, {{1}, {-1}, {2, 3}}); }

}  // namespace

TEST_CASE("proof sizes follow the per-system formulas") {
    Proof p;
    p.system = System::kRes;
    CHECK(proof_size(p) == 1);
    p.steps.resize(3);
    CHECK(proof_size(p) == 4);

    Proof g;
    g.system = System::kGer;
    g.lambda.push_back(cl({1, 2}));
    g.lambda.push_back(cl({1, 2}));
    g.steps.resize(3);
    CHECK(proof_size(g) == 2 + 1 + 3);

    Proof e;
    e.system = System::kEr;
    e.triples.push_back(ExtTriple{3, Lit(1), Lit(2)});
    e.triples.push_back(ExtTriple{4, Lit(-3), Lit(2)});
    e.steps.resize(1);
    CHECK(proof_size(e) == 3 * 2 + 1 + 1);

    // ger with an empty prefix costs the same as res.
    Proof g0;
    g0.system = System::kGer;
    g0.steps.resize(3);
    CHECK(proof_size(g0) == 4);
}

TEST_CASE("parsing recovers steps, witnesses, and prefix entries") {
    SUBCASE("minimal resolution refutation") {
        Proof p = parse("p proof res\nr 1 2 1 0\n");
        CHECK(p.system == System::kRes);
        CHECK(p.lambda.empty());
        CHECK(p.triples.empty());
        REQUIRE(p.steps.size() == 1);
        const ProofStep& s = p.steps[0];
        CHECK(s.kind == StepKind::kResolve);
        CHECK(s.id_a == 1);
        CHECK(s.id_b == 2);
        CHECK(s.pivot_var == 1);
        REQUIRE(s.result.has_value());
        CHECK(s.result->empty());
    }

    SUBCASE("sbc witness prefix is split from the clause listing") {
        Proof p = parse("p proof sbc\ns 2 -1 -2 -1 -2 3 0\n");
        REQUIRE(p.steps.size() == 1);
        const ProofStep& s = p.steps[0];
        CHECK(s.kind == StepKind::kAddSbc);
        REQUIRE(s.witness.has_value());
        CHECK(*s.witness == cl({-1, -2}));
        REQUIRE(s.result.has_value());
        CHECK(*s.result == cl({-1, -2, 3}));
    }

    SUBCASE("witness and clause literals are stored normalized") {
        Proof p = parse("p proof sbc\ns 2 -2 -1 3 -2 -1 0\n");
        CHECK(*p.steps[0].witness == cl({-1, -2}));
        CHECK(*p.steps[0].result == cl({-1, -2, 3}));
        CHECK(*p.steps[0].witness->begin() == Lit(-1));
    }

    SUBCASE("ger lambda prefix") {
        Proof p = parse(
            "c comment before the header\n"
            "p proof ger\n"
            "x 1 2 0\n"
            "c comment between entries\n"
            "r 1 3 1 -2 0\n"
            "w 4 -2 3 0\n");
        CHECK(p.system == System::kGer);
        REQUIRE(p.lambda.size() == 1);
        CHECK(*p.lambda[0] == cl({1, 2}));
        REQUIRE(p.steps.size() == 2);
        CHECK(p.steps[0].kind == StepKind::kResolve);
        CHECK(*p.steps[0].result == cl({-2}));
        CHECK(p.steps[1].kind == StepKind::kWeaken);
        CHECK(p.steps[1].id_a == 4);
        CHECK(*p.steps[1].result == cl({-2, 3}));
    }

    SUBCASE("er triple prefix") {
        Proof p = parse("p proof er\ne 3 1 2 0\ne 4 -3 1 0\nr 1 3 1 -2 0\n");
        CHECK(p.system == System::kEr);
        REQUIRE(p.triples.size() == 2);
        CHECK(p.triples[0] == ExtTriple{3, Lit(1), Lit(2)});
        CHECK(p.triples[1] == ExtTriple{4, Lit(-3), Lit(1)});
        CHECK(p.steps.size() == 1);
    }

    SUBCASE("rat proofs may mix blocked and rat additions") {
        Proof p = parse("p proof rat\nb -2 -2 -3 0\nt -3 -3 0\n");
        REQUIRE(p.steps.size() == 2);
        CHECK(p.steps[0].kind == StepKind::kAddBc);
        CHECK(p.steps[0].pivot == Lit(-2));
        CHECK(p.steps[1].kind == StepKind::kAddRat);
        CHECK(p.steps[1].pivot == Lit(-3));
    }

    SUBCASE("tautological listings survive parsing as empty results") {
        Proof p = parse("p proof res\nr 1 2 1 2 -2 0\n");
        REQUIRE(p.steps.size() == 1);
        CHECK(!p.steps[0].result.has_value());
        Proof q = parse("p proof ger\nx 1 -1 0\n");
        REQUIRE(q.lambda.size() == 1);
        CHECK(!q.lambda[0].has_value());
    }

    SUBCASE("blank lines, comments, and CRLF endings are tolerated") {
        Proof p = parse("c leading\r\n\r\np proof res\r\n\r\nr 1 2 1 0\r\nc t\n");
        CHECK(p.system == System::kRes);
        CHECK(p.steps.size() == 1);
        CHECK(p.steps[0].result->empty());
    }

    SUBCASE("a header alone parses to an empty proof") {
        Proof p = parse("p proof bc\n");
        CHECK(p.system == System::kBc);
        CHECK(p.steps.empty());
        CHECK(proof_size(p) == 1);
    }
}

TEST_CASE("structural problems raise ParseError") {
    // Header problems.
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("p proof foo\n"), ParseError);
    CHECK_THROWS_AS(parse("p cnf 3 2\n"), ParseError);
    CHECK_THROWS_AS(parse("r 1 2 1 0\n"), ParseError);  // step before header

    // Tags and tokens.
    CHECK_THROWS_AS(parse("p proof res\nz 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof res\nrr 1 2 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof res\nr 1 x 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof res\nr 1 2 1\n"), ParseError);    // no 0
    CHECK_THROWS_AS(parse("p proof res\nr 1 2 1 0 5\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof res\nr 0 2 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof res\nr -1 2 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof res\nr 1 2 0 0\n"), ParseError);  // pivot
    CHECK_THROWS_AS(parse("p proof res\nw 1\n"), ParseError);

    // Step kinds that the declared system does not admit.
    CHECK_THROWS_AS(parse("p proof res\nb 1 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof bc\nt 1 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof rat\ns 1 1 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof sbc\nt 1 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof ger\nb 1 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof er\nb 1 1 0\n"), ParseError);

    // Pivot and witness problems caught at the line level.
    CHECK_THROWS_AS(parse("p proof bc\nb 0 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof sbc\ns 0 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof sbc\ns -1 1 1 0\n"), ParseError);
    // Witness arity: a 0 inside the declared witness range.
    CHECK_THROWS_AS(parse("p proof sbc\ns 3 -1 -2 0 -1 -2 3 0\n"), ParseError);

    // Prefix entries in the wrong system or after steps.
    CHECK_THROWS_AS(parse("p proof res\nx 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof ger\nr 1 2 1 0\nx 1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof ger\ne 3 1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof er\nr 1 2 1 0\ne 3 1 2 0\n"), ParseError);

    // Malformed extension triples.
    CHECK_THROWS_AS(parse("p proof er\ne 3 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof er\ne 3 1 2 0 7\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof er\ne 0 1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof er\ne -3 1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof er\ne 3 0 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse("p proof er\ne 3 1 0 0\n"), ParseError);

    // Unreadable file.
    CHECK_THROWS_AS(parse_proof_file("/nonexistent/proof.txt"), ParseError);
}

TEST_CASE("write_proof round-trips every system byte-identically") {
    std::vector<std::string> texts = {
        "p proof res\nr 1 2 1 0\n",
        "p proof bc\nb -2 -2 -3 0\nr 1 2 1 0\n",
        "p proof rat\nb -2 -2 -3 0\nt -3 -3 0\nr 1 2 1 0\n",
        "p proof sbc\ns 1 -2 -2 -3 0\nr 1 2 1 0\n",
        "p proof ger\nx 1 2 0\nr 1 3 1 -2 0\nr 2 5 2 0\n",
        "p proof er\ne 3 1 2 0\ne 4 -3 1 0\nr 1 3 1 -2 0\nw 8 -2 4 0\n",
    };
    for (const std::string& text : texts) {
        CAPTURE(text);
        Proof p = parse(text);
        CHECK(serialize(p) == text);
        CHECK(parse(serialize(p)) == p);
    }

    // Non-canonical input serializes canonically and re-parses equal.
    Proof p = parse("p proof sbc\ns 2 -2 -1 3 -1 -2 0\n");
    CHECK(serialize(p) == "p proof sbc\ns 2 -1 -2 -1 -2 3 0\n");
    CHECK(parse(serialize(p)) == p);
}

TEST_CASE("write_proof refuses tautological listings") {
    CHECK_THROWS_AS(serialize(parse("p proof res\nr 1 2 1 2 -2 0\n")),
                    DomainError);
    CHECK_THROWS_AS(serialize(parse("p proof ger\nx 1 -1 0\n")), DomainError);
    Proof p;
    p.system = System::kSbc;
    ProofStep s;
    s.kind = StepKind::kAddSbc;
    s.result = cl({1, 2});
    s.witness = std::nullopt;  // tautological witness listing
    p.steps.push_back(s);
    CHECK_THROWS_AS(serialize(p), DomainError);
}

TEST_CASE("verified refutations across all six systems") {
    SUBCASE("res: complementary units") {
        CheckReport r = checked(mk(1, {{1}, {-1}}), "p proof res\nr 1 2 1 0\n");
        CHECK(r.ok);
        CHECK(!r.failed_step.has_value());
        CHECK(r.reason.empty());
        CHECK(r.size == 2);
        CHECK(std::string(r.verdict()) == "VERIFIED");
    }

    SUBCASE("bc: blocked addition then refutation") {
        CheckReport r = checked(small_blockable(),
                                "p proof bc\nb -2 -2 -3 0\nr 1 2 1 0\n");
        CHECK(r.ok);
        CHECK(r.size == 3);
    }

    SUBCASE("rat: blocked implies rat, so the same addition verifies") {
        CheckReport r = checked(small_blockable(),
                                "p proof rat\nt -2 -2 -3 0\nr 1 2 1 0\n");
        CHECK(r.ok);
        CheckReport mixed = checked(
            small_blockable(),
            "p proof rat\nb -2 -2 -3 0\nt -3 -3 0\nr 1 2 1 0\n");
        CHECK(mixed.ok);
        CHECK(mixed.size == 4);
    }

    SUBCASE("sbc: singleton witness coincides with a blocked addition") {
        CheckReport r = checked(small_blockable(),
                                "p proof sbc\ns 1 -2 -2 -3 0\nr 1 2 1 0\n");
        CHECK(r.ok);
        CHECK(r.size == 3);
    }

    SUBCASE("ger: lambda prefix, then resolution over inputs and lambda") {
        // {1,2} is blocked for pivot 1 in PHP_1 (sole partner {-1,-2}).
        Cnf php = gen_php(1);
        CheckReport r =
            check(php, parse("p proof ger\nx 1 2 0\nr 1 3 1 -2 0\nr 2 5 2 0\n"));
        CHECK(r.ok);
        CHECK(r.size == 1 + 1 + 2);

        // Duplicate lambda listings are legal and both count for size.
        CheckReport dup = check(
            php,
            parse("p proof ger\nx 1 2 0\nx 1 2 0\nr 1 3 1 -2 0\nr 2 6 2 0\n"));
        CHECK(dup.ok);
        CHECK(dup.size == 2 + 1 + 2);
    }

    SUBCASE("er: triple clauses are addressable by id") {
        Cnf php = gen_php(1);
        // e 3 1 2 0 appends {-3,1}, {-3,2}, {3,-1,-2} as ids 4, 5, 6.
        CheckReport r = check(php, parse("p proof er\n"
                                         "e 3 1 2 0\n"
                                         "r 4 3 1 -3 -2 0\n"
                                         "r 5 7 2 -3 0\n"
                                         "r 6 8 3 -1 -2 0\n"
                                         "r 1 9 1 -2 0\n"
                                         "r 2 10 2 0\n"));
        CHECK(r.ok);
        CHECK(r.size == 3 * 1 + 1 + 5);
    }
}

TEST_CASE("rejected proofs report the failing entry and reason") {
    Cnf units = mk(1, {{1}, {-1}});

    SUBCASE("antecedent id out of range") {
        CheckReport r = checked(units, "p proof res\nr 1 9 1 0\n");
        CHECK(!r.ok);
        CHECK(r.failed_step == std::size_t{0});
        CHECK(r.reason == "antecedent id out of range");
        CHECK(std::string(r.verdict()) == "REJECTED");
        // A step may not reference its own id (ids are assigned after).
        CHECK(!checked(units, "p proof res\nr 1 3 1 0\n").ok);
    }

    SUBCASE("listed clause differs from the computed resolvent") {
        CheckReport r =
            checked(mk(2, {{1, 2}, {-1}}), "p proof res\nr 1 2 1 0\n");
        CHECK(!r.ok);
        CHECK(r.failed_step == std::size_t{0});
        CHECK(r.reason == "listed clause differs from the computed resolvent");
    }

    SUBCASE("pivot without opposite polarities") {
        CheckReport r =
            checked(mk(2, {{1, 2}, {-1}}), "p proof res\nr 1 2 2 0\n");
        CHECK(!r.ok);
        CHECK(r.reason ==
              "pivot does not occur with opposite polarities in the "
              "antecedents");
        // Same polarity on both sides fails the same way.
        CHECK(!checked(mk(2, {{1, 2}, {1}}), "p proof res\nr 1 2 1 2 0\n").ok);
    }

    SUBCASE("tautological listings and tautological resolvents") {
        Cnf g = mk(2, {{1, 2}, {-1, -2}});
        CheckReport listed = checked(g, "p proof res\nr 1 2 1 2 -2 0\n");
        CHECK(!listed.ok);
        CHECK(listed.reason == "tautological clause listing");
        CheckReport computed = checked(g, "p proof res\nr 1 2 1 2 0\n");
        CHECK(!computed.ok);
        CHECK(computed.reason == "resolvent is tautological");
    }

    SUBCASE("weakening must produce a superset") {
        CheckReport r = checked(mk(2, {{1, 2}}), "p proof res\nw 1 1 0\n");
        CHECK(!r.ok);
        CHECK(r.failed_step == std::size_t{0});
        CHECK(r.reason == "weakening antecedent is not a subset of the clause");
    }

    SUBCASE("new variables are rejected in bounded systems") {
        for (const char* sys : {"bc", "rat", "sbc", "ger"}) {
            CAPTURE(sys);
            CheckReport r = checked(
                units, std::string("p proof ") + sys + "\nw 1 1 7 0\n");
            CHECK(!r.ok);
            CHECK(r.reason == "new variable in derived clause");
        }
        // res and er have no such bound.
        CHECK(check_derivation(units, parse("p proof res\nw 1 1 7 0\n")).ok);
        CHECK(check_derivation(units, parse("p proof er\nw 1 1 7 0\n")).ok);
    }

    SUBCASE("blocked additions validate pivot membership and blockedness") {
        Cnf g = small_blockable();
        CheckReport missing = checked(g, "p proof bc\nb -2 -3 0\n");
        CHECK(!missing.ok);
        CHECK(missing.reason == "pivot literal is not in the clause");
        CheckReport notBlocked = checked(g, "p proof bc\nb -3 -3 0\n");
        CHECK(!notBlocked.ok);
        CHECK(notBlocked.reason == "clause is not blocked for the pivot");
    }

    SUBCASE("rat additions validate the resolution asymmetric tautology") {
        CheckReport r =
            checked(mk(2, {{-1, 2}, {-1, -2}}), "p proof rat\nt 1 1 0\n");
        CHECK(!r.ok);
        CHECK(r.failed_step == std::size_t{0});
        CHECK(r.reason ==
              "clause is not a resolution asymmetric tautology for the pivot");
    }

    SUBCASE("sbc additions validate witness containment and the predicate") {
        Cnf g = small_blockable();
        CheckReport sub = checked(g, "p proof sbc\ns 1 1 -2 -3 0\n");
        CHECK(!sub.ok);
        CHECK(sub.reason == "witness is not a subset of the clause");
        CheckReport pred = checked(mk(2, {{1, 2}}),
                                   "p proof sbc\ns 2 -1 -2 -1 -2 0\n");
        CHECK(!pred.ok);
        CHECK(pred.reason == "clause is not set-blocked for the witness");
    }

    SUBCASE("ger lambda entries are vetted before the steps") {
        Cnf php = gen_php(1);
        CheckReport fresh = check(php, parse("p proof ger\nx 1 5 0\n"));
        CHECK(!fresh.ok);
        CHECK(fresh.failed_step == std::size_t{0});
        CHECK(fresh.reason == "new variable in extension clause");

        CheckReport taut = check(php, parse("p proof ger\nx 1 -1 0\n"));
        CHECK(!taut.ok);
        CHECK(taut.reason == "tautological extension clause listing");

        // {-1} is not blocked in PHP_1 and blocks nothing else, so the
        // kernel of the joint set grows: not a blocked extension. The
        // failure is a property of the whole prefix and reports entry 0
        // even when a later clause is the culprit.
        CheckReport ext = check(
            php, parse("p proof ger\nx 1 2 0\nx -1 0\nr 1 3 1 -2 0\n"));
        CHECK(!ext.ok);
        CHECK(ext.failed_step == std::size_t{0});
        CHECK(ext.reason ==
              "extension clauses are not a blocked extension of the input");
    }

    SUBCASE("er triples must be fresh and over known variables") {
        Cnf units2 = mk(2, {{1}, {-1}, {2}});
        CheckReport stale = check(units2, parse("p proof er\ne 2 1 2 0\n"));
        CHECK(!stale.ok);
        CHECK(stale.failed_step == std::size_t{0});
        CHECK(stale.reason == "extension variable is not fresh");

        CheckReport reuse =
            check(units2, parse("p proof er\ne 3 1 2 0\ne 3 1 -2 0\n"));
        CHECK(!reuse.ok);
        CHECK(reuse.failed_step == std::size_t{1});

        CheckReport unknown = check(units2, parse("p proof er\ne 3 1 5 0\n"));
        CHECK(!unknown.ok);
        CHECK(unknown.reason == "extension literal over an unknown variable");

        CheckReport taut = check(units2, parse("p proof er\ne 3 1 -1 0\n"));
        CHECK(!taut.ok);
        CHECK(taut.reason == "tautological extension clause");
    }

    SUBCASE("hand-built proofs cannot smuggle prefixes across systems") {
        Proof withLambda;
        withLambda.system = System::kRes;
        withLambda.lambda.push_back(cl({1}));
        CheckReport r = check(mk(1, {{1}, {-1}}), withLambda);
        CHECK(!r.ok);
        CHECK(r.failed_step == std::size_t{0});
        CHECK(r.reason == "extension clauses are not allowed in this system");

        Proof withTriple;
        withTriple.system = System::kBc;
        withTriple.triples.push_back(ExtTriple{3, Lit(1), Lit(2)});
        CheckReport t = check(mk(2, {{1}, {-1}}), withTriple);
        CHECK(!t.ok);
        CHECK(t.reason == "extension triples are not allowed in this system");
    }

    SUBCASE("hand-built steps with kinds outside the system are rejected") {
        Proof p;
        p.system = System::kRes;
        ProofStep s;
        s.kind = StepKind::kAddBc;
        s.pivot = Lit(1);
        s.result = cl({1});
        p.steps.push_back(s);
        CheckReport r = check(mk(1, {{1}, {-1}}), p);
        CHECK(!r.ok);
        CHECK(r.failed_step == std::size_t{0});
        CHECK(r.reason == "step kind 'b' is not allowed in res proofs");
    }
}

TEST_CASE("unified failure indices count prefix entries before steps") {
    Cnf php = gen_php(1);

    // One lambda clause, then a broken step: the step is entry 1.
    CheckReport g =
        check(php, parse("p proof ger\nx 1 2 0\nr 1 9 1 0\n"));
    CHECK(!g.ok);
    CHECK(g.failed_step == std::size_t{1});

    // One triple (one entry, three ids), then a broken step: entry 1.
    CheckReport e = check(php, parse("p proof er\ne 3 1 2 0\nr 1 9 1 0\n"));
    CHECK(!e.ok);
    CHECK(e.failed_step == std::size_t{1});

    // Two triples, bad second step: entries 0,1 are triples, 2 is the
    // good first step, 3 is the failure.
    CheckReport e2 = check(php, parse("p proof er\n"
                                      "e 3 1 2 0\n"
                                      "e 4 3 1 0\n"
                                      "r 1 3 1 -2 0\n"
                                      "r 2 9 2 1 0\n"));
    CHECK(!e2.ok);
    CHECK(e2.failed_step == std::size_t{3});
}

TEST_CASE("re-deriving an existing clause is legal and consumes an id") {
    Cnf units = mk(1, {{1}, {-1}});
    // The empty clause is derived twice; the second copy gets id 4.
    CheckReport twice =
        checked(units, "p proof res\nr 1 2 1 0\nr 1 2 1 0\n");
    CHECK(twice.ok);
    CHECK(twice.size == 3);

    // Weakening onto an existing input clause consumes an id which
    // later steps can reference.
    Cnf g = mk(2, {{1}, {1, 2}});
    CheckReport dup = check_derivation(
        g, parse("p proof res\nw 1 1 2 0\nw 3 1 2 0\nw 4 1 2 0\n"));
    CHECK(dup.ok);

    // Weakening a clause onto itself is a legal no-op step.
    CHECK(check_derivation(g, parse("p proof res\nw 1 1 0\n")).ok);
}

TEST_CASE("check demands the empty clause; check_derivation does not") {
    Cnf g = small_blockable();
    Proof p = parse("p proof bc\nb -2 -2 -3 0\n");
    CheckReport full = check(g, p);
    CHECK(!full.ok);
    CHECK(!full.failed_step.has_value());
    CHECK(full.reason == "no empty clause derived");
    CheckReport frag = check_derivation(g, p);
    CHECK(frag.ok);
    CHECK(frag.size == full.size);

    // An input CNF that already contains the empty clause verifies the
    // empty proof.
    Cnf withEmpty(1);
    withEmpty.add(cl({1}));
    withEmpty.add(Clause());
    CHECK(check(withEmpty, parse("p proof res\n")).ok);
}

TEST_CASE("builder enforces mechanical validity and tracks ids") {
    Cnf g = small_blockable();

    SUBCASE("id bookkeeping") {
        ProofBuilder b(System::kBc, g);
        CHECK(b.num_inputs() == 3);
        CHECK(b.next_id() == 4);
        CHECK(b.clause_of(1) == cl({1}));
        CHECK(b.clause_of(3) == cl({2, 3}));
        CHECK_THROWS_AS(b.clause_of(0), DomainError);
        CHECK_THROWS_AS(b.clause_of(4), DomainError);
        CHECK(b.has_clause(cl({2, 3})));
        CHECK(!b.has_clause(cl({2})));
        CHECK(b.id_of(cl({-1})) == 2);
        CHECK_THROWS_AS(b.id_of(cl({3})), DomainError);

        std::size_t id = b.add_blocked(Lit(-2), cl({-2, -3}));
        CHECK(id == 4);
        CHECK(b.next_id() == 5);
        CHECK(b.formula().contains(cl({-2, -3})));
        std::size_t bot = b.add_resolve(1, 2, 1);
        CHECK(bot == 5);
        CHECK(b.clause_of(bot).empty());

        // Duplicate clauses keep their first id.
        std::size_t again = b.add_resolve(1, 2, 1);
        CHECK(again == 6);
        CHECK(b.id_of(Clause()) == 5);

        Proof proof = b.take_proof();
        CHECK(check(g, proof).ok);
        CHECK(proof_size(proof) == 4);
    }

    SUBCASE("mechanical rejections") {
        ProofBuilder b(System::kRes, g);
        CHECK_THROWS_AS(b.add_resolve(1, 9, 1), DomainError);
        CHECK_THROWS_AS(b.add_resolve(1, 3, 2), DomainError);  // no -2 in {1}
        CHECK_THROWS_AS(b.add_weaken(3, cl({2})), DomainError);
        CHECK_THROWS_AS(b.add_blocked(Lit(-2), cl({-2, -3})), DomainError);
        CHECK_THROWS_AS(b.add_rat(Lit(-2), cl({-2, -3})), DomainError);
        CHECK_THROWS_AS(b.add_set_blocked(cl({-2}), cl({-2, -3})), DomainError);
        CHECK_THROWS_AS(b.add_lambda(cl({1, 2})), DomainError);
        CHECK_THROWS_AS(b.add_triple(4, Lit(1), Lit(2)), DomainError);

        Cnf taut = mk(2, {{1, 2}, {-1, -2}});
        ProofBuilder t(System::kRes, taut);
        CHECK_THROWS_AS(t.add_resolve(1, 2, 1), DomainError);
    }

    SUBCASE("pivot and witness membership") {
        ProofBuilder b(System::kSbc, g);
        CHECK_THROWS_AS(b.add_blocked(Lit(-1), cl({-2, -3})), DomainError);
        CHECK_THROWS_AS(b.add_set_blocked(Clause(), cl({-2, -3})),
                        DomainError);
        CHECK_THROWS_AS(b.add_set_blocked(cl({1}), cl({-2, -3})), DomainError);
        ProofBuilder r(System::kRat, g);
        CHECK_THROWS_AS(r.add_rat(Lit(2), cl({-2, -3})), DomainError);
    }

    SUBCASE("prefix entries must precede steps") {
        Cnf php = gen_php(1);
        ProofBuilder b(System::kGer, php);
        b.add_resolve(1, 3, 1);
        CHECK_THROWS_AS(b.add_lambda(cl({1, 2})), DomainError);

        ProofBuilder e(System::kEr, php);
        e.add_resolve(1, 3, 1);
        CHECK_THROWS_AS(e.add_triple(3, Lit(1), Lit(2)), DomainError);
    }

    SUBCASE("lambda and triple validation") {
        Cnf php = gen_php(1);
        ProofBuilder b(System::kGer, php);
        CHECK_THROWS_AS(b.add_lambda(cl({1, 5})), DomainError);
        std::size_t lam = b.add_lambda(cl({1, 2}));
        CHECK(lam == 4);

        ProofBuilder e(System::kEr, php);
        CHECK_THROWS_AS(e.add_triple(2, Lit(1), Lit(2)), DomainError);
        CHECK_THROWS_AS(e.add_triple(3, Lit(1), Lit(5)), DomainError);
        CHECK_THROWS_AS(e.add_triple(3, Lit(1), Lit(-1)), DomainError);
        std::size_t first = e.add_triple(3, Lit(1), Lit(2));
        CHECK(first == 4);
        CHECK(e.clause_of(4) == cl({-3, 1}));
        CHECK(e.clause_of(5) == cl({-3, 2}));
        CHECK(e.clause_of(6) == cl({-1, -2, 3}));
        CHECK(e.next_id() == 7);
        // The extension variable joins the universe for later triples.
        std::size_t second = e.add_triple(4, Lit(-3), Lit(1));
        CHECK(second == 7);
        // Gaps in extension numbering are allowed: fresh only means
        // strictly above everything seen so far.
        std::size_t third = e.add_triple(9, Lit(4), Lit(2));
        CHECK(third == 10);
        CHECK_THROWS_AS(e.add_triple(5, Lit(1), Lit(2)), DomainError);
        CHECK(check_derivation(php, e.proof()).ok);
    }

    SUBCASE("the builder does not evaluate redundancy predicates") {
        ProofBuilder b(System::kBc, g);
        // {-3} is not blocked (its resolvent with {2,3} is {2}), but
        // the builder accepts it; check() is the authority.
        b.add_blocked(Lit(-3), cl({-3}));
        CheckReport r = check_derivation(g, b.proof());
        CHECK(!r.ok);
        CHECK(r.reason == "clause is not blocked for the pivot");
    }
}

TEST_CASE("hoisting front-loads blocked additions") {
    SUBCASE("a proof without additions is returned unchanged") {
        Cnf units = mk(1, {{1}, {-1}});
        Proof p = parse("p proof bc\nr 1 2 1 0\nr 1 2 1 0\n");
        Proof h = hoist_blocked_additions(units, p);
        CHECK(h == p);
    }

    SUBCASE("a proof with additions already in front is unchanged") {
        Cnf g = small_blockable();
        Proof p = parse("p proof bc\nb -2 -2 -3 0\nr 1 2 1 0\n");
        CHECK(hoist_blocked_additions(g, p) == p);
    }

    SUBCASE("interleaved additions move to the front with ids remapped") {
        Cnf g = mk(5, {{1}, {-1}, {2, 3}, {4, 5}});
        Proof p = parse(
            "p proof bc\n"
            "w 1 1 3 0\n"          // id 5
            "b -2 -2 -3 0\n"       // id 6
            "r 5 2 1 3 0\n"        // id 7
            "b -4 -4 -5 0\n"       // id 8
            "w 7 3 5 0\n"          // id 9
            "r 1 2 1 0\n");        // id 10
        REQUIRE(check(g, p).ok);

        Proof h = hoist_blocked_additions(g, p);
        REQUIRE(h.steps.size() == 6);
        CHECK(h.steps[0].kind == StepKind::kAddBc);
        CHECK(*h.steps[0].result == cl({-2, -3}));
        CHECK(h.steps[1].kind == StepKind::kAddBc);
        CHECK(*h.steps[1].result == cl({-4, -5}));
        CHECK(h.steps[2].kind == StepKind::kWeaken);
        CHECK(h.steps[2].id_a == 1);
        CHECK(*h.steps[2].result == cl({1, 3}));
        CHECK(h.steps[3].kind == StepKind::kResolve);
        CHECK(h.steps[3].id_a == 7);  // the weakening's new id
        CHECK(h.steps[3].id_b == 2);
        CHECK(h.steps[4].kind == StepKind::kWeaken);
        CHECK(h.steps[4].id_a == 8);  // the resolvent's new id
        CHECK(h.steps[5].kind == StepKind::kResolve);
        CHECK(*h.steps[5].result == Clause());

        CHECK(check(g, h).ok);
        CHECK(proof_size(h) == proof_size(p));

        // The derived clause multiset is preserved.
        auto results = [](const Proof& pr) {
            std::vector<Clause> out;
            for (const ProofStep& s : pr.steps) out.push_back(*s.result);
            std::sort(out.begin(), out.end(), clause_less);
            return out;
        };
        CHECK(results(h) == results(p));

        // Hoisting is idempotent.
        CHECK(hoist_blocked_additions(g, h) == h);
    }

    SUBCASE("unverified and foreign-system proofs are refused") {
        Cnf g = small_blockable();
        Proof broken = parse("p proof bc\nb -3 -3 0\nr 1 2 1 0\n");
        CHECK_THROWS_AS(hoist_blocked_additions(g, broken), InputNotVerified);
        Proof rat = parse("p proof rat\nt -2 -2 -3 0\nr 1 2 1 0\n");
        REQUIRE(check(g, rat).ok);
        CHECK_THROWS_AS(hoist_blocked_additions(g, rat), DomainError);
        Proof res = parse("p proof res\nr 1 2 1 0\n");
        CHECK_THROWS_AS(hoist_blocked_additions(mk(1, {{1}, {-1}}), res),
                        DomainError);
    }
}

namespace {

// Replays a verified ger proof as a bc proof when the input CNF is its
// own kernel: the lambda clauses are exactly what blocked-clause
// elimination removes from cnf ∪ lambda, so adding them back in
// reverse elimination order is a valid AddBC prefix; the steps carry
// over with lambda ids remapped to the matching additions.
Proof ger_to_bc(const Cnf& cnf, const Proof& ger) {
    REQUIRE(ger.system == System::kGer);
    const std::size_t m = cnf.size();
    const std::size_t lam_n = ger.lambda.size();

    Cnf joint = cnf;
    for (const auto& entry : ger.lambda) {
        REQUIRE(entry.has_value());
        joint.add(*entry);
    }
    KernelResult kr = kernel(joint);
    REQUIRE(kr.kernel.same_clauses(cnf));
    for (const Clause& gone : kr.elimination_order)
        REQUIRE(!cnf.contains(gone));

    ProofBuilder b(System::kBc, cnf);
    for (auto it = kr.elimination_order.rbegin();
         it != kr.elimination_order.rend(); ++it) {
        std::optional<Lit> pivot;
        for (Lit l : *it) {
            if (is_blocked(*it, l, b.formula())) {
                pivot = l;
                break;
            }
        }
        REQUIRE(pivot.has_value());
        b.add_blocked(*pivot, *it);
    }
    REQUIRE(b.next_id() == m + kr.elimination_order.size() + 1);

    auto remap = [&](std::size_t id) -> std::size_t {
        if (id <= m) return id;
        if (id <= m + lam_n) return b.id_of(*ger.lambda[id - m - 1]);
        return id;  // derived ids line up when every lambda clause is added
    };
    for (const ProofStep& s : ger.steps) {
        REQUIRE(s.result.has_value());
        if (s.kind == StepKind::kResolve) {
            b.add_resolve(remap(s.id_a), remap(s.id_b), s.pivot_var);
        } else {
            REQUIRE(s.kind == StepKind::kWeaken);
            b.add_weaken(remap(s.id_a), *s.result);
        }
    }
    return b.take_proof();
}

}  // namespace

TEST_CASE("verified ger proofs replay as equal-size bc proofs") {
    SUBCASE("single extension clause over PHP_1") {
        Cnf php = gen_php(1);
        Proof ger =
            parse("p proof ger\nx 1 2 0\nr 1 3 1 -2 0\nr 2 5 2 0\n");
        REQUIRE(check(php, ger).ok);

        Proof bc = ger_to_bc(php, ger);
        CheckReport r = check(php, bc);
        CHECK(r.ok);
        CHECK(proof_size(bc) == proof_size(ger));
        REQUIRE(!bc.steps.empty());
        CHECK(bc.steps[0].kind == StepKind::kAddBc);
        CHECK(*bc.steps[0].result == cl({1, 2}));
    }

    SUBCASE("two extension clauses over PHP_2, with a step using one") {
        Cnf php = gen_php(2);
        REQUIRE(php.size() == 9);
        // "Hole j is full" clauses are blocked: every partner is a
        // same-hole exclusion axiom and resolving yields a tautology.
        Clause hole1 = cl({1, 3, 5});
        Clause hole2 = cl({2, 4, 6});
        Cnf lambda(php.num_vars());
        lambda.add(hole1);
        lambda.add(hole2);
        REQUIRE(is_blocked_extension(php, lambda));

        Proof ref = refute_resolution(php);
        REQUIRE(check(php, ref).ok);

        // ger ids: inputs 1..9, lambda 10..11, weakening 12, then the
        // refutation's derived clauses shifted by three.
        Proof ger;
        ger.system = System::kGer;
        ger.lambda.push_back(hole1);
        ger.lambda.push_back(hole2);
        ProofStep weaken;
        weaken.kind = StepKind::kWeaken;
        weaken.id_a = 10;
        weaken.result = cl({1, 3, 5, -2});
        ger.steps.push_back(weaken);
        auto shift = [&](std::size_t id) {
            return id <= 9 ? id : id + 3;
        };
        for (const ProofStep& s : ref.steps) {
            ProofStep t = s;
            t.id_a = shift(t.id_a);
            if (t.kind == StepKind::kResolve) t.id_b = shift(t.id_b);
            ger.steps.push_back(t);
        }
        REQUIRE(check(php, ger).ok);
        CHECK(proof_size(ger) == 2 + 1 + ger.steps.size());

        // Elimination removes the canonically first blocked clause
        // each round: hole1 (starting with literal 1) before hole2.
        KernelResult kr = kernel(
            [&] {
                Cnf joint = php;
                joint.add(hole1);
                joint.add(hole2);
                return joint;
            }());
        REQUIRE(kr.elimination_order ==
                std::vector<Clause>{hole1, hole2});

        Proof bc = ger_to_bc(php, ger);
        CheckReport r = check(php, bc);
        CHECK(r.ok);
        CHECK(proof_size(bc) == proof_size(ger));
        // The additions land in reverse elimination order, so the
        // weakening's antecedent must have been remapped to hole1's
        // new id (the second addition).
        REQUIRE(bc.steps.size() == 2 + ger.steps.size());
        CHECK(*bc.steps[0].result == hole2);
        CHECK(*bc.steps[1].result == hole1);
        CHECK(bc.steps[2].kind == StepKind::kWeaken);
        CHECK(bc.steps[2].id_a == 11);
    }
}
