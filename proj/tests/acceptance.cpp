// Acceptance runner: every criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "skewrat/analysis.hpp"
#include "skewrat/genfun.hpp"
#include "skewrat/io.hpp"
#include "skewrat/mcf.hpp"
#include "skewrat/rat.hpp"
#include "skewrat/verify.hpp"
#include "skewrat/visits.hpp"

using namespace skewrat;

namespace {

struct Corpus {
    std::string name;
    mcf::DigitSequence digits;
};

const std::vector<Corpus> kCorpora = {
    {"tail[3]", {{}, std::vector<int>{3}}},
    {"tail[2,3]", {{}, std::vector<int>{2, 3}}},
    {"prefix[5,2,2,3]+tail[3]", {{5, 2, 2, 3}, std::vector<int>{3}}},
    {"remark2[5,4,4,...]", {{5}, std::vector<int>{4}}},
};

int g_failures = 0;

void report(int criterion, const std::string& label, bool pass, double seconds,
            double budget_seconds, const std::string& detail) {
    const bool in_budget = seconds <= budget_seconds;
    if (!(pass && in_budget)) ++g_failures;
    std::printf("%s  criterion %2d: %s (%.1f s%s)%s%s\n", pass && in_budget ? "PASS" : "FAIL",
                criterion, label.c_str(), seconds,
                in_budget ? "" : ", OVER BUDGET", detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
}

template <typename F>
void run(int criterion, const std::string& label, double budget_seconds, F&& body) {
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(criterion, label, pass, seconds, budget_seconds, detail);
}

bool suites_pass(const std::vector<std::string>& names, const verify::SuiteConfig& cfg,
                 std::string& detail) {
    for (const auto& name : names) {
        auto results = verify::run_suite(name, cfg);
        if (!verify::all_pass(results)) {
            for (const auto& r : results)
                if (!r.pass) detail = name + ": " + r.name + " " + r.detail;
            return false;
        }
    }
    return true;
}

rat::FlipRat balanced_adapted_rat() {
    std::vector<rat::RowAtom> row = {
        {0, 1, Rat(0), Rat(1, 8)}, {0, 1, Rat(2), Rat(1, 8)}, {0, -1, Rat(1), Rat(1, 4)},
        {1, 1, Rat(1), Rat(1, 8)}, {1, 1, Rat(-1), Rat(1, 8)}, {1, -1, Rat(0), Rat(1, 4)}};
    return rat::FlipRat::from_rows({row, row});
}

std::string sh(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    return std::to_string(WEXITSTATUS(status));
}

}  // namespace

int main() {
    // 1. Substitution exactness: Theorems 2.1/2.2 vs direct psi/phi up to 1e5.
    for (size_t c = 0; c < kCorpora.size(); ++c) {
        run(1, "substitution exactness on " + kCorpora[c].name, 60.0, [&](std::string& detail) {
            verify::SuiteConfig cfg;
            cfg.digits = kCorpora[c].digits;
            cfg.max_len = 100'000;
            return suites_pass({"thm21", "thm22", "orbit"}, cfg, detail);
        });
    }

    // 2. Visit-recursion exactness vs the brute-force oracle.
    for (size_t c = 0; c < kCorpora.size(); ++c) {
        run(2, "visit recursion exactness on " + kCorpora[c].name, 120.0,
            [&](std::string& detail) {
                verify::SuiteConfig cfg;
                cfg.digits = kCorpora[c].digits;
                cfg.max_len = 100'000;
                cfg.levels = 12;
                return suites_pass({"visits", "simplified"}, cfg, detail);
            });
    }

    // 3. (Biohazard) exactness of the alpha-ARW laws, k <= 8.
    run(3, "alpha-ARW laws equal the temporal laws (k <= 8)", 120.0, [&](std::string& detail) {
        for (const auto& corpus : kCorpora) {
            verify::SuiteConfig cfg;
            cfg.digits = corpus.digits;
            cfg.levels = 8;
            if (!suites_pass({"biohazard", "phistep"}, cfg, detail)) {
                detail = corpus.name + " " + detail;
                return false;
            }
        }
        return true;
    });

    // 4. Structural predicate classification of spec-RATs.
    run(4, "spec-RAT classification table", 60.0, [&](std::string& detail) {
        for (const auto& corpus : kCorpora) {
            verify::SuiteConfig cfg;
            cfg.digits = corpus.digits;
            cfg.levels = 24;
            if (!suites_pass({"predicates"}, cfg, detail)) {
                detail = corpus.name + " " + detail;
                return false;
            }
        }
        return true;
    });

    // 5. Variance sandwich and orthogonality on 100 random centered sequences.
    run(5, "variance theorem sandwich + orthogonality", 300.0, [&](std::string& detail) {
        verify::SuiteConfig cfg;
        cfg.instances = 100;
        cfg.seed = 7;
        return suites_pass({"variance"}, cfg, detail);
    });

    // 6. Matrix norm bound, lattice invariance, char-poly evenness.
    run(6, "RAT-CF norm and symmetry properties", 300.0, [&](std::string& detail) {
        verify::SuiteConfig cfg;
        cfg.count = 1000;
        cfg.grid = 4096;
        cfg.seed = 42;
        return suites_pass({"norms"}, cfg, detail);
    });

    // 7. WRLLT band for tail [3], K = 30, both exponents.
    run(7, "WRLLT band I_p(k) sqrt(k) within factor 3", 600.0, [&](std::string& detail) {
        for (int p : {1, 2}) {
            auto rows = analysis::wrllt_report(kCorpora[0].digits, 30, p);
            double lo = 1e300, hi = 0;
            for (const auto& row : rows) {
                if (row.k < 5) continue;
                for (int i = 0; i < 2; ++i) {
                    lo = std::min(lo, row.scaled[i]);
                    hi = std::max(hi, row.scaled[i]);
                }
            }
            detail += "p=" + std::to_string(p) + " band " + std::to_string(hi / lo) + "; ";
            if (!(hi / lo <= 3.0)) return false;
        }
        return true;
    });

    // 8. Railways bands for alpha = (3 - sqrt 5)/4 up to n = 1e4.
    run(8, "railways ratios bounded", 900.0, [&](std::string& detail) {
        std::vector<std::int64_t> ns;
        for (std::int64_t n = 10; n < 10000; n = std::max(n + 1, n * 9 / 8)) ns.push_back(n);
        ns.push_back(10000);
        auto rows = analysis::railways_report(kCorpora[0].digits, ns);
        double max_r1 = 0, lo = 1e300, hi = 0;
        for (const auto& row : rows) {
            max_r1 = std::max(max_r1, row.ratio1);
            if (row.n >= 100) {
                lo = std::min(lo, row.ratio2);
                hi = std::max(hi, row.ratio2);
            }
        }
        detail = "max ratio1 " + std::to_string(max_r1) + ", ratio2 band " +
                 std::to_string(hi / lo);
        return max_r1 <= 10.0 && hi / lo <= 3.0;
    });

    // 9. Theorem 5.1 CLT for one balanced adapted RAT iterated iid.
    run(9, "iid CLT against Normal(0, gamma_F)", 300.0, [&](std::string& detail) {
        auto F = balanced_adapted_rat();
        auto spec = rat::spectral(F);
        const int n = 10000;
        const std::uint64_t trials = 100000;
        auto sim = rat::simulate({F}, n, trials, 20260809);
        const double scale = std::sqrt(spec.gamma * n);
        for (int coord = 0; coord < 2; ++coord) {
            auto marg = sim.marginal(coord);
            double ks = 0, cdf = 0;
            for (const auto& [value, count] : marg) {
                double target = analysis::normal_cdf(static_cast<double>(value) / scale);
                ks = std::max(ks, std::abs(cdf - target));
                cdf += static_cast<double>(count) / static_cast<double>(trials);
                ks = std::max(ks, std::abs(cdf - target));
            }
            detail += "coord " + std::to_string(coord) + " KS " + std::to_string(ks) + "; ";
            if (!(ks < 0.02)) return false;
        }
        detail += "gamma " + std::to_string(spec.gamma);
        return true;
    });

    // 10. Prop 5.2 CLT for quadratic alpha: exact temporal laws vs normal.
    run(10, "temporal CLT for tail [3]", 300.0, [&](std::string& detail) {
        auto rows = analysis::clt_report(kCorpora[0].digits, 2, 3, 19);
        const size_t last = rows.size() - 1;
        detail = "final KS " + std::to_string(rows[last].ks);
        return rows[last].ks < 0.05 && rows[last].ks < rows[last - 1].ks &&
               rows[last - 1].ks < rows[last - 2].ks;
    });

    // 11. Reproducibility: identical configs give byte-identical artifacts.
    run(11, "byte-identical artifacts across reruns", 300.0, [&](std::string& detail) {
        const std::string cli = SKEWRAT_CLI_PATH;
        const std::string dir = "/tmp/skewrat_acceptance";
        if (std::system(("mkdir -p " + dir).c_str()) != 0) return false;
        auto corpus = dir + "/corpus.json";
        if (sh(cli + " rat corpus --digits '{\"tail\":[2,3]}' --levels 8 --out " + corpus +
               " 2>/dev/null") != "0")
            return false;
        for (const auto& args : std::vector<std::string>{
                 " rat simulate --corpus " + corpus + " --n 64 --trials 5000 --seed 9 --out ",
                 " experiment railways --digits '{\"tail\":[3]}' --nmax 500 --out ",
                 " experiment wrllt --digits '{\"tail\":[2,3]}' --levels 8 --p 1 --out "}) {
            auto out1 = dir + "/a.csv", out2 = dir + "/b.csv";
            if (sh(cli + args + out1 + " 2>/dev/null") != "0") return false;
            if (sh(cli + args + out2 + " 2>/dev/null") != "0") return false;
            if (io::read_file(out1) != io::read_file(out2)) {
                detail = "mismatch for" + args;
                return false;
            }
        }
        return true;
    });

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ACCEPTANCE OK" : "ACCEPTANCE FAILED",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
