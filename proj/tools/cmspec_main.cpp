// cmspec: verify and re-derive the spectral algebraic relations of the
// elliptic Calogero-Moser quantum integrals (A2 and B2 root systems).
//
//   cmspec verify  --system a2|b2|both --check NAME|all [options]
//   cmspec derive  --system a2|b2 --target A1|A2|A3|B1|B2 [options]
//   cmspec selftest [options]
//   cmspec cache   --cache-dir PATH [--list|--clear]
//
// Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 derivation mismatch,
// 4 derivation failure, 64 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include "cmspec/cache.hpp"
#include "cmspec/parallel.hpp"
#include "cmspec/relations.hpp"
#include "cmspec/selftest.hpp"

#include <fstream>
#include <iostream>

using namespace cmspec;

namespace {

struct RunConfig {
    std::string system = "both";
    std::string check = "all";
    std::string target;
    long precision_bits = 256;
    int trials = 3;
    std::uint64_t seed = 1;
    std::vector<std::string> context_args;
    std::string cache_dir;
    std::string report_path;
    int threads = hardware_threads();
    bool timings = false;

    std::vector<std::pair<Rational, Rational>> contexts;
};

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitDeriveMismatch = 3;
constexpr int kExitDeriveFailure = 4;
constexpr int kExitUsage = 64;

void parse_contexts(RunConfig& cfg) {
    if (cfg.context_args.empty()) {
        cfg.contexts = {{Rational(4), Rational(0)}, {Rational(0), Rational(4)},
                        {Rational(7, 3), Rational(5, 7)}};
        return;
    }
    for (const auto& s : cfg.context_args) {
        auto comma = s.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--context expects \"g2num/g2den,g3num/g3den\"");
        Rational g2 = Rational::from_string(s.substr(0, comma));
        Rational g3 = Rational::from_string(s.substr(comma + 1));
        cfg.contexts.emplace_back(g2, g3);
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.precision_bits < 64) throw CLI::ValidationError("precision_bits must be >= 64");
    if (cfg.trials < 3) throw CLI::ValidationError("trials must be >= 3");
    if (cfg.contexts.empty()) throw CLI::ValidationError("at least one context required");
    for (const auto& [g2, g3] : cfg.contexts)
        if (!nondegenerate(g2, g3))
            throw CLI::ValidationError("degenerate context (g2^3 = 27 g3^2): " + g2.to_string() +
                                       "," + g3.to_string());
}

Workspace make_workspace(const RunConfig& cfg, std::shared_ptr<OperatorCache>& cache_out) {
    Workspace ws;
    ws.env.contexts.clear();
    for (const auto& [g2, g3] : cfg.contexts)
        ws.env.contexts.emplace_back(g2, g3, cfg.precision_bits);
    ws.env.trials = cfg.trials;
    ws.env.seed = cfg.seed;
    ws.env.precision_bits = cfg.precision_bits;
    ws.env.threads = cfg.threads;
    ws.threads = cfg.threads;
    if (!cfg.cache_dir.empty()) {
        auto cache = std::make_shared<OperatorCache>(cfg.cache_dir);
        cache_out = cache;
        ws.cache_load = [cache](const std::string& key) { return cache->load(key); };
        ws.cache_store = [cache](const std::string& key, const DiffOp& op) {
            cache->store(key, op);
        };
    }
    return ws;
}

std::string config_echo(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["system"] = cfg.system;
    j["check"] = cfg.check;
    if (!cfg.target.empty()) j["target"] = cfg.target;
    j["precision_bits"] = cfg.precision_bits;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    nlohmann::ordered_json ctxs = nlohmann::ordered_json::array();
    for (const auto& [g2, g3] : cfg.contexts) {
        nlohmann::ordered_json c;
        c["g2"] = g2.to_string();
        c["g3"] = g3.to_string();
        ctxs.push_back(c);
    }
    j["contexts"] = ctxs;
    j["threads"] = cfg.threads;
    return j.dump();
}

void emit_reports(const RunConfig& cfg, const std::vector<VerificationReport>& reports) {
    std::string text = reports_to_json(config_echo(cfg), reports, !cfg.timings);
    if (cfg.report_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.report_path, std::ios::trunc);
        out << text;
        std::cerr << "report written to " << cfg.report_path << "\n";
    }
}

void progress_line(const std::string& what) { std::cerr << what << "\n"; }

int status_to_exit(const std::vector<VerificationReport>& reports) {
    bool any_fail = false, any_inconclusive = false;
    for (const auto& r : reports) {
        if (r.status == "fail") any_fail = true;
        if (r.status == "inconclusive") any_inconclusive = true;
    }
    if (any_fail) return kExitFail;
    if (any_inconclusive) return kExitInconclusive;
    return kExitPass;
}

int run_verify(const RunConfig& cfg) {
    std::shared_ptr<OperatorCache> cache;
    Workspace ws = make_workspace(cfg, cache);
    std::vector<VerificationReport> reports;

    std::vector<std::string> systems;
    if (cfg.system == "both") {
        systems = {"a2", "b2"};
    } else {
        systems = {cfg.system};
    }
    auto want = [&](const std::string& name) { return cfg.check == "all" || cfg.check == name; };

    for (const std::string& sys : systems) {
        if (want("commutators")) {
            progress_line("[" + sys + "] commutators");
            reports.push_back(verify_commutators(sys, ws).report);
        }
        if (sys == "a2") {
            A2Coefficients A = build_A_coefficients();
            if (want("a2-cubic") || want("cubic")) {
                for (const std::string inst : {"a2_I12", "a2_I23", "a2_I31"}) {
                    progress_line("[a2] cubic relation with I = " + inst.substr(3));
                    auto rc = verify_relation("a2-cubic:" + inst.substr(3), "a2",
                                              a2_cubic_relation(A), a2_binding(inst), ws);
                    reports.push_back(rc.report);
                }
            }
            if (want("a2-pair") || want("pair")) {
                progress_line("[a2] pair relation (I = I12, J = I23)");
                auto rc = verify_relation("a2-pair", "a2", a2_pair_relation(A),
                                          a2_binding("a2_I12", "a2_I23"), ws);
                reports.push_back(rc.report);
            }
            if (want("sv-remark")) {
                progress_line("[a2] reduction to the plane");
                reports.push_back(sv_remark_check().report);
            }
            if (want("separation")) {
                SymbolPoly sym_sum = (a2_I(12) + a2_I(23) + a2_I(31)).principal_symbol();
                SymbolPoly l4 = (a2_I(12) + a2_I(23).scaled(Rational(2))).principal_symbol();
                SeparationResult s1 = separation_check("a2", sym_sum, cfg.seed + 7);
                SeparationResult s2 = separation_check("a2", l4, cfg.seed + 7);
                VerificationReport r = s1.report;
                r.check = "separation";
                r.notes.clear();
                r.notes.push_back("symbol(I12+I23+I31): " + std::to_string(s1.distinct_values) +
                                  " distinct of " + std::to_string(s1.orbit_size));
                r.notes.push_back("symbol(I12+2I23): " + std::to_string(s2.distinct_values) +
                                  " distinct of " + std::to_string(s2.orbit_size));
                r.status = (s1.distinct_values == 1 && s2.distinct_values == 6) ? "pass" : "fail";
                reports.push_back(r);
            }
            if (want("independence")) {
                reports.push_back(symbol_independence_check("a2", cfg.seed + 11).report);
            }
        } else {
            if (want("b2-quartic") || want("quartic") || want("b2-sum") || want("sum")) {
                progress_line("[b2] deriving B1/B2 (derived coefficients are the verified ones)");
                DerivationOutcome b1;
                DerivationOutcome b2;
                try {
                    b1 = run_derivation("b2", "B1", ws);
                    b2 = run_derivation("b2", "B2", ws);
                } catch (const DescentError& e) {
                    VerificationReport r;
                    r.check = "b2-derivation";
                    r.system = "b2";
                    r.status = "fail";
                    r.notes.push_back(e.what());
                    reports.push_back(r);
                    continue;
                }
                if (want("b2-quartic") || want("quartic")) {
                    progress_line("[b2] quartic relation");
                    auto rc = verify_relation(
                        "b2-quartic", "b2",
                        b2_quartic_relation(b1.derived, b2.derived), b2_binding(), ws);
                    reports.push_back(rc.report);
                }
                if (want("b2-sum") || want("sum")) {
                    progress_line("[b2] sum relation");
                    auto rc = verify_relation("b2-sum", "b2", b2_sum_relation(b1.derived),
                                              b2_binding(), ws);
                    reports.push_back(rc.report);
                }
            }
            if (want("independence")) {
                reports.push_back(symbol_independence_check("b2", cfg.seed + 11).report);
            }
            if (want("separation")) {
                SeparationResult s1 = separation_check("b2", b2_Ix().principal_symbol(), cfg.seed + 7);
                SeparationResult s2 = separation_check("b2", b2_L3().principal_symbol(), cfg.seed + 7);
                VerificationReport r = s1.report;
                r.notes.clear();
                r.notes.push_back("symbol(Ix): " + std::to_string(s1.distinct_values) +
                                  " distinct of " + std::to_string(s1.orbit_size));
                r.notes.push_back("symbol(Ix+2Iy): " + std::to_string(s2.distinct_values) +
                                  " distinct of " + std::to_string(s2.orbit_size));
                r.status = (s2.distinct_values == s2.orbit_size) ? "pass" : "fail";
                reports.push_back(r);
            }
        }
    }
    emit_reports(cfg, reports);
    return status_to_exit(reports);
}

int run_derive(const RunConfig& cfg) {
    std::shared_ptr<OperatorCache> cache;
    Workspace ws = make_workspace(cfg, cache);
    std::string system = cfg.system;
    if (system == "both") system = (cfg.target[0] == 'A') ? "a2" : "b2";
    DerivationOutcome out;
    try {
        out = run_derivation(system, cfg.target, ws);
    } catch (const DescentError& e) {
        std::cerr << "derivation failed: " << e.what() << "\n";
        return kExitDeriveFailure;
    }
    std::cout << "derived " << cfg.target << ":\n" << out.derived.to_text();
    if (out.exact_match()) {
        std::cout << "diff vs printed formula: empty (exact match)\n";
    } else {
        std::cout << "diff vs printed formula (" << out.diff.size() << " monomials):\n";
        for (const auto& line : out.diff) std::cout << "  " << line << "\n";
    }
    std::vector<VerificationReport> reports = {out.express.report};
    emit_reports(cfg, reports);
    return out.exact_match() ? kExitPass : kExitDeriveMismatch;
}

int run_selftest_cmd(const RunConfig& cfg) {
    auto results = run_selftest(cfg.precision_bits, cfg.seed, cfg.threads);
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
                  << (r.detail.empty() ? "" : " - " + r.detail) << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "selftest: all suites passed\n" : "selftest: FAILURES\n");
    return all ? kExitPass : kExitFail;
}

int run_cache_cmd(const RunConfig& cfg, bool list, bool clear) {
    if (cfg.cache_dir.empty()) {
        std::cerr << "cache: --cache-dir required\n";
        return kExitUsage;
    }
    std::filesystem::path dir(cfg.cache_dir);
    if (clear) {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
        std::cout << "cache cleared\n";
        return kExitPass;
    }
    if (list) {
        if (std::filesystem::exists(dir))
            for (const auto& e : std::filesystem::directory_iterator(dir))
                std::cout << e.path().filename().string() << " ("
                          << std::filesystem::file_size(e.path()) << " bytes)\n";
        return kExitPass;
    }
    std::cerr << "cache: nothing to do (use --list or --clear)\n";
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification and derivation of elliptic Calogero-Moser spectral relations"};
    app.require_subcommand(1);

    RunConfig cfg;
    bool cache_list = false, cache_clear = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--precision-bits", cfg.precision_bits, "working precision in bits (>= 64)");
        cmd->add_option("--trials", cfg.trials, "sample points per context (>= 3)");
        cmd->add_option("--seed", cfg.seed, "sampling seed");
        cmd->add_option("--context", cfg.context_args,
                        "curve invariants as \"g2,g3\" rationals, e.g. \"4/1,0/1\" (repeatable)");
        cmd->add_option("--cache-dir", cfg.cache_dir, "operator cache directory");
        cmd->add_option("--report", cfg.report_path, "write the JSON report here");
        cmd->add_option("--threads", cfg.threads, "worker threads");
        cmd->add_flag("--timings", cfg.timings, "include wall-clock timings in reports");
    };

    CLI::App* verify = app.add_subcommand("verify", "run verification checks");
    verify->add_option("--system", cfg.system, "a2 | b2 | both")
        ->check(CLI::IsMember({"a2", "b2", "both"}));
    verify->add_option("--check", cfg.check,
                       "commutators | a2-cubic | a2-pair | b2-quartic | b2-sum | sv-remark | "
                       "separation | independence | all");
    add_common(verify);

    CLI::App* derive = app.add_subcommand("derive", "re-derive a relation coefficient");
    derive->add_option("--system", cfg.system, "a2 | b2")->check(CLI::IsMember({"a2", "b2", "both"}));
    derive->add_option("--target", cfg.target, "A1 | A2 | A3 | B1 | B2")
        ->required()
        ->check(CLI::IsMember({"A1", "A2", "A3", "B1", "B2"}));
    add_common(derive);

    CLI::App* selftest = app.add_subcommand("selftest", "run the engine invariant suites");
    add_common(selftest);

    CLI::App* cache = app.add_subcommand("cache", "inspect or clear the operator cache");
    cache->add_option("--cache-dir", cfg.cache_dir, "operator cache directory");
    cache->add_flag("--list", cache_list, "list entries");
    cache->add_flag("--clear", cache_clear, "remove all entries");

    try {
        app.parse(argc, argv);
        parse_contexts(cfg);
        validate(cfg);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::Error& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(verify)) {
            const std::set<std::string> known = {"all",        "commutators", "a2-cubic",
                                                 "cubic",      "a2-pair",     "pair",
                                                 "b2-quartic", "quartic",     "b2-sum",
                                                 "sum",        "sv-remark",   "separation",
                                                 "independence"};
            if (!known.count(cfg.check)) {
                std::cerr << "unknown check: " << cfg.check << "\n";
                return kExitUsage;
            }
            return run_verify(cfg);
        }
        if (app.got_subcommand(derive)) return run_derive(cfg);
        if (app.got_subcommand(selftest)) return run_selftest_cmd(cfg);
        if (app.got_subcommand(cache)) return run_cache_cmd(cfg, cache_list, cache_clear);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
