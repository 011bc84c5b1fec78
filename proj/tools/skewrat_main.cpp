#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>

#include "skewrat/analysis.hpp"
#include "skewrat/cocycle.hpp"
#include "skewrat/errors.hpp"
#include "skewrat/genfun.hpp"
#include "skewrat/io.hpp"
#include "skewrat/mcf.hpp"
#include "skewrat/rat.hpp"
#include "skewrat/verify.hpp"
#include "skewrat/visits.hpp"

namespace {

using namespace skewrat;

struct Output {
    std::string path;  // empty = stdout
    std::string config;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void emit(const std::string& content) const {
        if (path.empty()) {
            std::cout << content;
            return;
        }
        io::write_file(path, content);
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - started)
                              .count();
        io::write_file(path + ".manifest.json", io::manifest_json(config, ms));
    }
};

mcf::DigitSequence resolve_digits(const std::string& digits_json, const std::string& beta,
                                  int beta_digits) {
    if (!digits_json.empty()) {
        if (!beta.empty()) throw UsageError("give either --digits or --beta, not both");
        return io::digits_from_json(digits_json);
    }
    if (beta.empty()) throw UsageError("one of --digits or --beta is required");
    if (beta_digits < 1) throw UsageError("--beta needs a positive --digit-count");
    return mcf::expand(beta, beta_digits);
}

std::string canonical_config(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream out;
    for (const auto& [k, v] : kv) out << k << "=" << v << ";";
    return out.str();
}

int run_cli(int argc, char** argv) {
    CLI::App app{"renormalization objects of discrepancy skew products and flip-type ARWs"};
    app.require_subcommand(1);

    std::string digits_json, beta, out_path, format = "csv";
    int digit_count = 0;

    auto add_digit_opts = [&](CLI::App* cmd) {
        cmd->add_option("--digits", digits_json, "digit sequence literal {\"prefix\":[],\"tail\":[]}");
        cmd->add_option("--beta", beta, "decimal beta in (0,1)");
        cmd->add_option("--digit-count", digit_count, "digits to expand from --beta");
    };

    // ---- expand ----
    auto* cmd_expand = app.add_subcommand("expand", "minus-CF digits of a decimal beta");
    std::string ex_beta;
    int ex_digits = 20;
    unsigned ex_bits = 256;
    cmd_expand->add_option("--beta", ex_beta, "decimal beta in (0,1)")->required();
    cmd_expand->add_option("--digits", ex_digits, "number of digits");
    cmd_expand->add_option("--precision", ex_bits, "starting precision in bits");
    cmd_expand->add_option("--out", out_path, "output path");
    cmd_expand->add_option("--format", format, "csv|json");

    // ---- blocks ----
    auto* cmd_blocks = app.add_subcommand("blocks", "substitution / sign / orbit blocks");
    int level = 1, flavor = 0;
    std::string kind = "bits";
    bool rle = false;
    std::int64_t cap = cocycle::kDefaultBlockCap;
    add_digit_opts(cmd_blocks);
    cmd_blocks->add_option("--level", level, "renormalization level")->required();
    cmd_blocks->add_option("--kind", kind, "bits|signs|orbit");
    cmd_blocks->add_option("--flavor", flavor, "0 or 1");
    cmd_blocks->add_flag("--rle", rle, "run-length encoded output");
    cmd_blocks->add_option("--cap-block", cap, "materialized block cap");
    cmd_blocks->add_option("--out", out_path, "output path");

    // ---- visits ----
    auto* cmd_visits = app.add_subcommand("visits", "visit distributions at a level");
    bool simplified = false;
    std::string checkpoint, resume;
    add_digit_opts(cmd_visits);
    cmd_visits->add_option("--level", level, "renormalization level")->required();
    cmd_visits->add_option("--flavor", flavor, "0 or 1");
    cmd_visits->add_flag("--simplified", simplified, "emit V instead of U");
    cmd_visits->add_option("--checkpoint", checkpoint, "write frame JSON here");
    cmd_visits->add_option("--resume", resume, "resume frame from JSON");
    cmd_visits->add_option("--out", out_path, "output path");

    // ---- genfun ----
    auto* cmd_genfun = app.add_subcommand("genfun", "temporal laws and circle integrals");
    std::string op = "law";
    std::int64_t grid = 0;
    add_digit_opts(cmd_genfun);
    cmd_genfun->add_option("--level", level, "renormalization level")->required();
    cmd_genfun->add_option("--flavor", flavor, "0 or 1");
    cmd_genfun->add_option("--op", op, "law|l2|l1|trace");
    cmd_genfun->add_option("--grid", grid, "quadrature grid (l1/trace)");
    cmd_genfun->add_option("--out", out_path, "output path");

    // ---- rat ----
    auto* cmd_rat = app.add_subcommand("rat", "alpha-RAT sequences and simulation");
    cmd_rat->require_subcommand(1);
    auto* rat_corpus = cmd_rat->add_subcommand("corpus", "export the alpha-RAT sequence");
    int levels = 8;
    add_digit_opts(rat_corpus);
    rat_corpus->add_option("--levels", levels, "sequence length");
    rat_corpus->add_option("--out", out_path, "output path");
    auto* rat_pred = cmd_rat->add_subcommand("predicates", "classification of spec-RATs");
    add_digit_opts(rat_pred);
    rat_pred->add_option("--levels", levels, "levels to inspect");
    rat_pred->add_option("--out", out_path, "output path");
    auto* rat_sim = cmd_rat->add_subcommand("simulate", "Monte Carlo of a RAT corpus");
    std::string corpus_path;
    int sim_n = 100;
    std::uint64_t trials = 1000, seed = 0;
    bool marginal_only = false;
    rat_sim->add_option("--corpus", corpus_path, "RAT corpus JSON")->required();
    rat_sim->add_option("--n", sim_n, "steps per trial");
    rat_sim->add_option("--trials", trials, "number of trials");
    rat_sim->add_option("--seed", seed, "master seed (required)")->required();
    rat_sim->add_flag("--marginal", marginal_only, "emit coordinate-0 marginal only");
    rat_sim->add_option("--out", out_path, "output path");

    // ---- experiment ----
    auto* cmd_exp = app.add_subcommand("experiment", "desk-scale experiments");
    cmd_exp->require_subcommand(1);
    bool plot = false;
    auto* exp_rail = cmd_exp->add_subcommand("railways", "sup/integral scaling of Psi_n");
    std::int64_t nmax = 10000;
    std::int64_t psi_cap = analysis::kDefaultPsiCap;
    add_digit_opts(exp_rail);
    exp_rail->add_option("--nmax", nmax, "largest n");
    exp_rail->add_option("--cap-psi", psi_cap, "psi size cap");
    exp_rail->add_flag("--plot", plot, "emit x,y pairs (n vs ratio2)");
    exp_rail->add_option("--out", out_path, "output path");
    auto* exp_wrllt = cmd_exp->add_subcommand("wrllt", "integral |Phi|^p along nu_k");
    int wr_K = 30, wr_p = 2;
    add_digit_opts(exp_wrllt);
    exp_wrllt->add_option("--levels", wr_K, "grouped levels K");
    exp_wrllt->add_option("--p", wr_p, "1 or 2");
    exp_wrllt->add_flag("--plot", plot, "emit x,y pairs (k vs scaled0)");
    exp_wrllt->add_option("--out", out_path, "output path");
    auto* exp_clt = cmd_exp->add_subcommand("clt", "temporal CLT for quadratic alpha");
    int clt_K = 2, clt_L = 1, clt_n = 40;
    add_digit_opts(exp_clt);
    exp_clt->add_option("--offset", clt_K, "level offset K");
    exp_clt->add_option("--period", clt_L, "level period L");
    exp_clt->add_option("--nmax", clt_n, "number of scales");
    exp_clt->add_flag("--plot", plot, "emit x,y pairs (n vs ks)");
    exp_clt->add_option("--out", out_path, "output path");

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "run a named invariant suite");
    std::string suite;
    verify::SuiteConfig vcfg;
    std::string v_digits;
    cmd_verify->add_option("suite", suite, "suite name")->required();
    cmd_verify->add_option("--digits", v_digits, "digit sequence literal");
    cmd_verify->add_option("--max-len", vcfg.max_len, "materialized length cap");
    cmd_verify->add_option("--levels", vcfg.levels, "levels to advance");
    cmd_verify->add_option("--instances", vcfg.instances, "random instances");
    cmd_verify->add_option("--count", vcfg.count, "random RAT count");
    cmd_verify->add_option("--grid", vcfg.grid, "norm grid");
    cmd_verify->add_option("--seed", vcfg.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Output output;
    output.path = out_path;

    if (*cmd_expand) {
        output.config = canonical_config({{"cmd", "expand"},
                                          {"beta", ex_beta},
                                          {"digits", std::to_string(ex_digits)},
                                          {"precision", std::to_string(ex_bits)}});
        auto digits = mcf::expand(ex_beta, ex_digits, ex_bits);
        if (format == "json") {
            output.emit(io::digits_to_json(digits) + "\n");
        } else {
            std::ostringstream csv;
            csv << "k,digit\n";
            for (size_t i = 0; i < digits.prefix.size(); ++i)
                csv << (i + 1) << "," << digits.prefix[i] << "\n";
            output.emit(csv.str());
        }
        return 0;
    }

    if (*cmd_blocks) {
        auto digits = resolve_digits(digits_json, beta, digit_count);
        output.config = canonical_config({{"cmd", "blocks"},
                                          {"digits", io::digits_to_json(digits)},
                                          {"level", std::to_string(level)},
                                          {"kind", kind},
                                          {"flavor", std::to_string(flavor)}});
        cocycle::SymbolBlock block;
        if (kind == "bits") {
            auto [b0, b1] = cocycle::substitution_blocks(digits, level, cap);
            block = flavor == 0 ? b0 : b1;
        } else if (kind == "signs") {
            auto sb = cocycle::sign_blocks(digits, level, cap);
            block = flavor == 0 ? sb.B0 : sb.B1;
        } else if (kind == "orbit") {
            auto [s0, s1] = cocycle::orbit_block(digits, level, cap);
            block = flavor == 0 ? s0 : s1;
        } else {
            throw UsageError("unknown block kind " + kind);
        }
        output.emit(rle ? io::block_rle(block) + "\n" : io::block_csv(block));
        return 0;
    }

    if (*cmd_visits) {
        visits::Frame frame;
        mcf::DigitSequence digits;
        if (!resume.empty()) {
            frame = io::frame_from_json(io::read_file(resume));
            digits = resolve_digits(digits_json, beta, digit_count);
        } else {
            digits = resolve_digits(digits_json, beta, digit_count);
            frame = visits::initial_frame();
        }
        output.config = canonical_config({{"cmd", "visits"},
                                          {"digits", io::digits_to_json(digits)},
                                          {"level", std::to_string(level)},
                                          {"flavor", std::to_string(flavor)},
                                          {"simplified", simplified ? "1" : "0"}});
        while (frame.state.level < level)
            frame = visits::advance(frame, digits.digit(frame.state.level + 1));
        if (!checkpoint.empty()) io::write_file(checkpoint, io::frame_to_json(frame));
        const auto& U = flavor == 0 ? frame.U0 : frame.U1;
        output.emit(io::visits_csv(simplified ? frame.v(flavor) : U));
        return 0;
    }

    if (*cmd_genfun) {
        auto digits = resolve_digits(digits_json, beta, digit_count);
        output.config = canonical_config({{"cmd", "genfun"},
                                          {"digits", io::digits_to_json(digits)},
                                          {"level", std::to_string(level)},
                                          {"flavor", std::to_string(flavor)},
                                          {"op", op}});
        auto frame = visits::frame_at(digits, level);
        auto law = genfun::temporal_law(frame.v(flavor));
        if (op == "law") {
            output.emit(io::law_csv(law));
        } else if (op == "l2") {
            Rat v = genfun::l2_integral(law.poly());
            output.emit("l2,num,den\n" + std::string("value,") + numerator(v).str() + "," +
                        denominator(v).str() + "\n");
        } else if (op == "l1") {
            auto poly = law.poly();
            auto r = genfun::l1_integral(poly, grid > 0 ? grid : genfun::default_l1_grid(poly));
            std::ostringstream csv;
            csv.precision(17);
            csv << "value,error_bound\n" << r.value << "," << r.error_bound << "\n";
            output.emit(csv.str());
        } else if (op == "trace") {
            output.emit(io::eval_trace_csv(law.poly(), grid > 0 ? static_cast<int>(grid) : 2048));
        } else {
            throw UsageError("unknown genfun op " + op);
        }
        return 0;
    }

    if (*rat_corpus) {
        auto digits = resolve_digits(digits_json, beta, digit_count);
        output.config = canonical_config({{"cmd", "rat corpus"},
                                          {"digits", io::digits_to_json(digits)},
                                          {"levels", std::to_string(levels)}});
        output.emit(io::rats_to_json(rat::alpha_rat_sequence(digits, levels)) + "\n");
        return 0;
    }

    if (*rat_pred) {
        auto digits = resolve_digits(digits_json, beta, digit_count);
        output.config = canonical_config({{"cmd", "rat predicates"},
                                          {"digits", io::digits_to_json(digits)},
                                          {"levels", std::to_string(levels)}});
        std::ostringstream csv;
        csv << "k,n,parity,irreducible,mean_contractive,balanced,adapted,partially,kappa\n";
        cocycle::RenormState st = cocycle::initial_state();
        for (int k = 1; k <= levels; ++k) {
            const int n = digits.digit(k);
            auto F = rat::spec_rat(n, st.eps0, st.l0, st.l1);
            auto p = rat::predicates(F);
            csv << k << "," << n << "," << (st.eps0 ? "odd" : "even") << "," << p.irreducible
                << "," << p.mean_contractive << "," << p.balanced << "," << p.adapted << ","
                << p.partially_adapted << "," << rat_string(p.kappa) << "\n";
            st = cocycle::renorm_advance(st, n);
        }
        output.emit(csv.str());
        return 0;
    }

    if (*rat_sim) {
        output.config = canonical_config({{"cmd", "rat simulate"},
                                          {"corpus", corpus_path},
                                          {"n", std::to_string(sim_n)},
                                          {"trials", std::to_string(trials)},
                                          {"seed", std::to_string(seed)}});
        auto seq = io::rats_from_json(io::read_file(corpus_path));
        auto law = rat::simulate(seq, sim_n, trials, seed);
        std::ostringstream csv;
        if (marginal_only) {
            csv << "x,count\n";
            for (const auto& [x, c] : law.marginal(0)) csv << x << "," << c << "\n";
        } else {
            csv << "point,count\n";
            for (const auto& [x, c] : law.counts) {
                for (size_t i = 0; i < x.size(); ++i) csv << (i ? " " : "") << x[i];
                csv << "," << c << "\n";
            }
        }
        output.emit(csv.str());
        return 0;
    }

    if (*exp_rail) {
        auto digits = resolve_digits(digits_json, beta, digit_count);
        output.config = canonical_config({{"cmd", "experiment railways"},
                                          {"digits", io::digits_to_json(digits)},
                                          {"nmax", std::to_string(nmax)}});
        std::vector<std::int64_t> ns;
        for (std::int64_t n = 10; n < nmax; n = std::max(n + 1, n * 5 / 4)) ns.push_back(n);
        ns.push_back(nmax);
        auto rows = analysis::railways_report(digits, ns, psi_cap);
        if (plot) {
            std::ostringstream xy;
            xy.precision(17);
            xy << "x,y\n";
            for (const auto& r : rows) xy << r.n << "," << r.ratio2 << "\n";
            output.emit(xy.str());
        } else {
            output.emit(io::railways_csv(rows));
        }
        return 0;
    }

    if (*exp_wrllt) {
        auto digits = resolve_digits(digits_json, beta, digit_count);
        output.config = canonical_config({{"cmd", "experiment wrllt"},
                                          {"digits", io::digits_to_json(digits)},
                                          {"levels", std::to_string(wr_K)},
                                          {"p", std::to_string(wr_p)}});
        auto rows = analysis::wrllt_report(digits, wr_K, wr_p);
        if (plot) {
            std::ostringstream xy;
            xy.precision(17);
            xy << "x,y\n";
            for (const auto& r : rows) xy << r.k << "," << r.scaled[0] << "\n";
            output.emit(xy.str());
        } else {
            output.emit(io::wrllt_csv(rows));
        }
        return 0;
    }

    if (*exp_clt) {
        auto digits = resolve_digits(digits_json, beta, digit_count);
        output.config = canonical_config({{"cmd", "experiment clt"},
                                          {"digits", io::digits_to_json(digits)},
                                          {"offset", std::to_string(clt_K)},
                                          {"period", std::to_string(clt_L)},
                                          {"nmax", std::to_string(clt_n)}});
        auto rows = analysis::clt_report(digits, clt_K, clt_L, clt_n);
        if (plot) {
            std::ostringstream xy;
            xy.precision(17);
            xy << "x,y\n";
            for (const auto& r : rows) xy << r.n << "," << r.ks << "\n";
            output.emit(xy.str());
        } else {
            output.emit(io::clt_csv(rows));
        }
        return 0;
    }

    if (*cmd_verify) {
        if (!v_digits.empty()) vcfg.digits = io::digits_from_json(v_digits);
        auto results = verify::run_suite(suite, vcfg);
        bool ok = verify::all_pass(results);
        std::ostringstream report;
        for (const auto& r : results)
            report << (r.pass ? "PASS" : "FAIL") << " " << r.name
                   << (r.detail.empty() ? "" : "  [" + r.detail + "]") << "\n";
        report << (ok ? "OK" : "FAILED") << " " << suite << "\n";
        std::cout << report.str();
        return ok ? 0 : 1;
    }

    throw UsageError("no subcommand selected");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const skewrat::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const skewrat::BlockTooLarge& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const skewrat::StateBlowup& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const skewrat::GridTooCoarse& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const skewrat::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
