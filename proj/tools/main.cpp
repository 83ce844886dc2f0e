// redproof — command-line surface for the clausal proof toolkit.
//
// Subcommands: gen, prove, transform, build, check, simulate,
// restrict, kernel, stats. Exit codes: 0 success (check: VERIFIED),
// 1 semantic failure (check: REJECTED), 2 usage or parse error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "clausal/builders.hpp"
#include "clausal/core.hpp"
#include "clausal/oracle.hpp"
#include "clausal/proof.hpp"
#include "clausal/redundancy.hpp"
#include "clausal/simulation.hpp"

namespace {

using namespace clausal;

// Usage-level problems discovered after argument parsing (bad -n for a
// family, refusing to overwrite without --force, ...). Exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int g_exit = 0;
bool g_quiet = false;

void info(const std::string& line) {
    if (!g_quiet) std::cout << line << "\n";
}

// All file outputs go through here: refuse to overwrite unless --force,
// write to a temporary sibling, rename into place.
void write_file(const std::string& path, bool force,
                const std::function<void(std::ostream&)>& writer) {
    namespace fs = std::filesystem;
    if (!force && fs::exists(path))
        throw UsageError("output file '" + path +
                         "' exists (use --force to overwrite)");
    fs::path tmp = fs::path(path);
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + tmp.string() +
                                     "' for writing");
        writer(out);
        out.flush();
        if (!out)
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, fs::path(path));
}

std::string csv_header() { return "family,n,t,cnf_clauses,proof_size"; }

std::string csv_row(const std::string& family, int n, std::size_t t,
                    std::size_t cnf_clauses, std::size_t proof_sz) {
    return family + "," + std::to_string(n) + "," + std::to_string(t) + "," +
           std::to_string(cnf_clauses) + "," + std::to_string(proof_sz);
}

std::size_t php_clause_count(int n) {
    std::size_t nn = static_cast<std::size_t>(n);
    return (nn + 1) + nn * (nn * (nn + 1) / 2);
}

std::size_t bphp_clause_count(int n) {
    std::size_t nn = static_cast<std::size_t>(n);
    return (nn * (nn + 1) / 2) * nn;
}

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

ErProof load_er(const std::string& path) {
    Proof p = parse_proof_file(path);
    if (p.system != System::kEr)
        throw DomainError("'" + path + "' is not an er proof (system is " +
                          to_string(p.system) + ")");
    return ErProof::from_proof(p);
}

void cmd_gen(const std::string& family, int n, const std::string& out,
             bool force, bool stats) {
    if (family == "bphp" && !is_power_of_two(n))
        throw UsageError("bphp requires n to be a power of two, at least 2");
    Cnf cnf = family == "php" ? gen_php(n) : gen_bphp(n);
    write_file(out, force, [&](std::ostream& s) { write_dimacs(cnf, s); });
    info("wrote " + out + " (" + std::to_string(cnf.size()) + " clauses, " +
         std::to_string(cnf.num_vars()) + " variables)");
    if (stats) {
        std::cout << csv_header() << "\n"
                  << csv_row(family, n, 0, cnf.size(), 0) << "\n";
    }
}

void cmd_prove(const std::string& what, int n, const std::string& out,
               const std::string& cnf_out, bool force, bool stats) {
    Cnf php = gen_php(n);
    Proof proof;
    std::size_t t = 0;
    if (what == "er-php") {
        ErProof er = gen_cook_er_php(n);
        t = er.t();
        proof = er.to_proof();
    } else {
        proof = build_sbc_proof_of_php(n);
    }
    write_file(out, force, [&](std::ostream& s) { write_proof(proof, s); });
    info("wrote " + out + " (size " + std::to_string(proof_size(proof)) + ")");
    if (!cnf_out.empty()) {
        write_file(cnf_out, force,
                   [&](std::ostream& s) { write_dimacs(php, s); });
        info("wrote " + cnf_out + " (" + std::to_string(php.size()) +
             " clauses)");
    }
    if (stats) {
        std::cout << csv_header() << "\n"
                  << csv_row("php", n, t, php.size(), proof_size(proof))
                  << "\n";
    }
}

void cmd_transform(const std::string& what, const std::string& cnf_path,
                   const std::string& er_path, const std::string& out,
                   const std::string& pairs_out, bool force) {
    Cnf gamma = parse_dimacs_file(cnf_path);
    ErProof er = load_er(er_path);
    if (what == "g") {
        Cnf g = transform_g(gamma, er);
        write_file(out, force, [&](std::ostream& s) { write_dimacs(g, s); });
        info("wrote " + out + " (" + std::to_string(g.size()) + " clauses)");
    } else {
        auto [h, pairs] = transform_h(gamma, er);
        write_file(out, force, [&](std::ostream& s) { write_dimacs(h, s); });
        info("wrote " + out + " (" + std::to_string(h.size()) + " clauses)");
        if (!pairs_out.empty()) {
            write_file(pairs_out, force, [&](std::ostream& s) {
                write_pair_allocation(pairs, s);
            });
            info("wrote " + pairs_out + " (" +
                 std::to_string(pairs.pairs.size()) + " pairs)");
        }
    }
}

void cmd_build(const std::string& what, const std::string& cnf_path,
               const std::string& er_path, const std::string& out,
               bool force) {
    Cnf gamma = parse_dimacs_file(cnf_path);
    ErProof er = load_er(er_path);
    Proof proof;
    if (what == "rat-of-g") {
        proof = build_rat_proof_of_g(gamma, er);
    } else {
        PairAllocation pairs = transform_h(gamma, er).second;
        proof = what == "ger-of-h" ? build_ger_proof_of_h(gamma, er, pairs)
                                   : build_sbc_proof_of_h(gamma, er, pairs);
    }
    write_file(out, force, [&](std::ostream& s) { write_proof(proof, s); });
    info("wrote " + out + " (size " + std::to_string(proof_size(proof)) + ")");
}

void cmd_check(const std::string& system, const std::string& cnf_path,
               const std::string& proof_path) {
    auto sys = system_from_string(system);
    if (!sys)
        throw UsageError("unknown system '" + system +
                         "' (expected res, bc, rat, sbc, ger, or er)");
    Cnf cnf = parse_dimacs_file(cnf_path);
    Proof proof = parse_proof_file(proof_path);
    if (proof.system != *sys)
        throw UsageError("proof file is a " + to_string(proof.system) +
                         " proof, not " + system);
    CheckReport report = check(cnf, proof);
    if (report.ok) {
        info(std::string(report.verdict()) + " (size " +
             std::to_string(report.size) + ")");
        g_exit = 0;
    } else {
        std::string line = std::string(report.verdict()) + ": " +
                           report.reason;
        if (report.failed_step)
            line += " (step " + std::to_string(*report.failed_step) + ")";
        info(line);
        g_exit = 1;
    }
}

void cmd_simulate(const std::string& cnf_path, const std::string& proof_path,
                  const std::string& out, const std::string& report_path,
                  bool force) {
    Cnf cnf = parse_dimacs_file(cnf_path);
    Proof proof = parse_proof_file(proof_path);
    TranslationResult tr = translate_rat_to_bc(cnf, proof);
    write_file(out, force, [&](std::ostream& s) { write_proof(tr.proof, s); });
    info("wrote " + out + " (size " + std::to_string(proof_size(tr.proof)) +
         ")");
    if (!report_path.empty()) {
        nlohmann::json j;
        j["reports"] = nlohmann::json::array();
        for (const SimulationReport& r : tr.reports)
            j["reports"].push_back({{"sigma_size", r.sigma_size},
                                    {"mu_size", r.mu_size},
                                    {"refutation_size", r.refutation_size},
                                    {"n", r.n},
                                    {"bound", r.bound},
                                    {"actual", r.actual}});
        write_file(report_path, force,
                   [&](std::ostream& s) { s << j.dump(2) << "\n"; });
        info("wrote " + report_path + " (" +
             std::to_string(tr.reports.size()) + " simulated steps)");
    }
}

void cmd_restrict(const std::string& cnf_path, const std::string& pairs_path,
                  const std::string& proof_path, const std::string& out,
                  bool force) {
    Cnf gamma = parse_dimacs_file(cnf_path);
    PairAllocation pairs = parse_pair_allocation_file(pairs_path);
    Proof proof = parse_proof_file(proof_path);
    Proof restricted = restrict_h_rat_proof(gamma, pairs, proof);
    write_file(out, force,
               [&](std::ostream& s) { write_proof(restricted, s); });
    info("wrote " + out + " (size " + std::to_string(proof_size(restricted)) +
         ")");
}

void cmd_kernel(const std::string& cnf_path) {
    Cnf cnf = parse_dimacs_file(cnf_path);
    KernelResult result = kernel(cnf);
    std::cout << "kernel size: " << result.kernel.size() << " of "
              << cnf.size() << " clauses\n";
    std::cout << "eliminated: " << result.elimination_order.size() << "\n";
    for (const Clause& c : result.elimination_order) {
        for (Lit l : c) std::cout << l.code << " ";
        std::cout << "0\n";
    }
}

void cmd_stats(const std::string& family, int from, int to) {
    std::cout << csv_header() << "\n";
    for (int n = from; n <= to; ++n) {
        if (family == "php") {
            std::cout << csv_row("php", n, cook_triple_count(n),
                                 php_clause_count(n), sbc_php_proof_size(n))
                      << "\n";
        } else if (is_power_of_two(n)) {
            std::cout << csv_row("bphp", n, 0, bphp_clause_count(n), 0)
                      << "\n";
        }
    }
}

void cmd_oracle_sat(const std::string& cnf_path) {
    Cnf cnf = parse_dimacs_file(cnf_path);
    std::cout << (sat_brute(cnf) ? "SAT" : "UNSAT") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generators, transformations, and verifiers for "
                 "resolution proofs with redundancy rules"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a formula family");
    std::string gen_family;
    int gen_n = 0;
    std::string gen_out;
    bool gen_force = false, gen_stats = false;
    gen->add_option("family", gen_family, "Formula family")
        ->required()
        ->check(CLI::IsMember({"php", "bphp"}));
    gen->add_option("-n", gen_n, "Size parameter")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("-o", gen_out, "Output DIMACS path")->required();
    gen->add_flag("--force", gen_force, "Overwrite existing outputs");
    gen->add_flag("--stats", gen_stats, "Print a CSV stats row");
    gen->add_flag("--quiet", g_quiet, "Suppress informational output");
    gen->callback(
        [&] { cmd_gen(gen_family, gen_n, gen_out, gen_force, gen_stats); });

    // prove
    auto* prove = app.add_subcommand("prove", "Build a refutation of PHP_n");
    std::string prove_what;
    int prove_n = 0;
    std::string prove_out, prove_cnf;
    bool prove_force = false, prove_stats = false;
    prove->add_option("what", prove_what, "Proof to construct")
        ->required()
        ->check(CLI::IsMember({"er-php", "sbc-php"}));
    prove->add_option("-n", prove_n, "Size parameter")
        ->required()
        ->check(CLI::PositiveNumber);
    prove->add_option("-o", prove_out, "Output proof path")->required();
    prove->add_option("--cnf", prove_cnf, "Also write the formula here");
    prove->add_flag("--force", prove_force, "Overwrite existing outputs");
    prove->add_flag("--stats", prove_stats, "Print a CSV stats row");
    prove->add_flag("--quiet", g_quiet, "Suppress informational output");
    prove->callback([&] {
        cmd_prove(prove_what, prove_n, prove_out, prove_cnf, prove_force,
                  prove_stats);
    });

    // transform
    auto* transform =
        app.add_subcommand("transform", "Apply the G or H transformation");
    std::string tr_what, tr_cnf, tr_er, tr_out, tr_pairs;
    bool tr_force = false;
    transform->add_option("what", tr_what, "Transformation")
        ->required()
        ->check(CLI::IsMember({"g", "h"}));
    transform->add_option("--cnf", tr_cnf, "Input DIMACS path")->required();
    transform->add_option("--er", tr_er, "er proof of the input")->required();
    transform->add_option("-o", tr_out, "Output DIMACS path")->required();
    transform->add_option("--pairs", tr_pairs,
                          "Pair-allocation JSON output (h only)");
    transform->add_flag("--force", tr_force, "Overwrite existing outputs");
    transform->add_flag("--quiet", g_quiet, "Suppress informational output");
    transform->callback([&] {
        if (tr_what == "g" && !tr_pairs.empty())
            throw UsageError("--pairs only applies to 'transform h'");
        cmd_transform(tr_what, tr_cnf, tr_er, tr_out, tr_pairs, tr_force);
    });

    // build
    auto* build =
        app.add_subcommand("build", "Build a proof of a transformed formula");
    std::string b_what, b_cnf, b_er, b_out;
    bool b_force = false;
    build->add_option("what", b_what, "Proof to construct")
        ->required()
        ->check(CLI::IsMember({"rat-of-g", "ger-of-h", "sbc-of-h"}));
    build->add_option("--cnf", b_cnf, "Base DIMACS path")->required();
    build->add_option("--er", b_er, "er proof of the base")->required();
    build->add_option("-o", b_out, "Output proof path")->required();
    build->add_flag("--force", b_force, "Overwrite existing outputs");
    build->add_flag("--quiet", g_quiet, "Suppress informational output");
    build->callback([&] { cmd_build(b_what, b_cnf, b_er, b_out, b_force); });

    // check
    auto* chk = app.add_subcommand("check", "Verify a proof file");
    std::string c_system, c_cnf, c_proof;
    chk->add_option("--system", c_system, "Proof system")->required();
    chk->add_option("--cnf", c_cnf, "Input DIMACS path")->required();
    chk->add_option("proof", c_proof, "Proof file")->required();
    chk->add_flag("--quiet", g_quiet, "Suppress informational output");
    chk->callback([&] { cmd_check(c_system, c_cnf, c_proof); });

    // simulate
    auto* sim = app.add_subcommand(
        "simulate", "Translate RAT additions into blocked-clause derivations");
    std::string s_what, s_cnf, s_proof, s_out, s_report;
    bool s_force = false;
    sim->add_option("what", s_what, "Translation")
        ->required()
        ->check(CLI::IsMember({"rat-to-bc"}));
    sim->add_option("--cnf", s_cnf, "Input DIMACS path")->required();
    sim->add_option("proof", s_proof, "rat proof file")->required();
    sim->add_option("-o", s_out, "Output bc proof path")->required();
    sim->add_option("--report", s_report, "Per-step JSON report path");
    sim->add_flag("--force", s_force, "Overwrite existing outputs");
    sim->add_flag("--quiet", g_quiet, "Suppress informational output");
    sim->callback([&] { cmd_simulate(s_cnf, s_proof, s_out, s_report, s_force); });

    // restrict
    auto* res = app.add_subcommand(
        "restrict", "Restrict a rat proof of H(Γ) back to a proof of Γ");
    std::string r_what, r_cnf, r_pairs, r_proof, r_out;
    bool r_force = false;
    res->add_option("what", r_what, "Restriction")
        ->required()
        ->check(CLI::IsMember({"h-proof"}));
    res->add_option("--cnf", r_cnf, "Base DIMACS path")->required();
    res->add_option("--pairs", r_pairs, "Pair-allocation JSON")->required();
    res->add_option("proof", r_proof, "rat proof of the transformed formula")
        ->required();
    res->add_option("-o", r_out, "Output rat proof path")->required();
    res->add_flag("--force", r_force, "Overwrite existing outputs");
    res->add_flag("--quiet", g_quiet, "Suppress informational output");
    res->callback(
        [&] { cmd_restrict(r_cnf, r_pairs, r_proof, r_out, r_force); });

    // kernel
    auto* ker = app.add_subcommand(
        "kernel", "Blocked-clause kernel of a formula");
    std::string k_cnf;
    ker->add_option("cnf", k_cnf, "Input DIMACS path")->required();
    ker->callback([&] { cmd_kernel(k_cnf); });

    // stats
    auto* stats = app.add_subcommand("stats", "CSV size table for a family");
    std::string st_family;
    int st_from = 0, st_to = 0;
    stats->add_option("--family", st_family, "Formula family")
        ->required()
        ->check(CLI::IsMember({"php", "bphp"}));
    stats->add_option("--n-from", st_from, "First n")
        ->required()
        ->check(CLI::PositiveNumber);
    stats->add_option("--n-to", st_to, "Last n")
        ->required()
        ->check(CLI::PositiveNumber);
    stats->callback([&] { cmd_stats(st_family, st_from, st_to); });

    // oracle (internal helper, hidden from help)
    auto* oracle = app.add_subcommand("oracle", "Brute-force helpers");
    oracle->group("");
    std::string o_what, o_cnf;
    oracle->add_option("what", o_what)->required()->check(
        CLI::IsMember({"sat"}));
    oracle->add_option("cnf", o_cnf)->required();
    oracle->callback([&] { cmd_oracle_sat(o_cnf); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return g_exit;
}
