#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "skewrat/analysis.hpp"
#include "skewrat/cocycle.hpp"
#include "skewrat/errors.hpp"
#include "skewrat/genfun.hpp"
#include "skewrat/verify.hpp"
#include "skewrat/visits.hpp"

using namespace skewrat;

namespace {

const mcf::DigitSequence kThrees{{}, std::vector<int>{3}};
const mcf::DigitSequence kTwoThree{{}, std::vector<int>{2, 3}};

std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("psi at the first few levels") {
    auto psi1 = analysis::psi_exact(kThrees, 1);
    CHECK(psi1.sup() == 1);
    CHECK(psi1.integral() == 1);

    // phi_1 never vanishes, so Psi_2 is still constant 1
    auto psi2 = analysis::psi_exact(kThrees, 2);
    CHECK(psi2.sup() == 1);
    CHECK(psi2.integral() == 1);

    // Psi_3 adds the measure of {phi_2 = 0}, two arcs of total length 2 alpha
    auto psi3 = analysis::psi_exact(kThrees, 3);
    Rat alpha = analysis::psi_alpha(kThrees, 3);
    CHECK(psi3.integral() == 1 + 2 * alpha);
    CHECK(psi3.sup() == 2);
}

TEST_CASE("psi_3 integral against grid sampling") {
    auto psi3 = analysis::psi_exact(kThrees, 3);
    Rat alpha = analysis::psi_alpha(kThrees, 3);
    const int grid = 20011;
    std::int64_t hits = 0;
    for (int j = 0; j < grid; ++j) {
        Rat x(j, grid);
        std::int64_t count = 0;
        for (int k = 0; k < 3; ++k)
            if (cocycle::cocycle_sum(alpha, k, x) == 0) ++count;
        hits += count;
    }
    CHECK(std::abs(static_cast<double>(hits) / grid - to_double(psi3.integral())) < 1e-3);
}

TEST_CASE("psi agrees with direct counting at random points") {
    const std::int64_t n = 200;
    auto psi = analysis::psi_exact(kTwoThree, n);
    Rat alpha = analysis::psi_alpha(kTwoThree, n);
    std::uint64_t state = 7;
    for (int trial = 0; trial < 1000; ++trial) {
        Rat x(static_cast<std::int64_t>(splitmix(state) % 99991), 99991);
        std::int64_t direct = 0;
        for (std::int64_t k = 0; k < n; ++k)
            if (cocycle::cocycle_sum(alpha, k, x) == 0) ++direct;
        REQUIRE(psi.value_at(x) == direct);
    }
}

TEST_CASE("railways report snapshots match single shots") {
    auto rows = analysis::railways_report(kThrees, {10, 50, 200});
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        // the sweep uses one convergent for all n; a fresh psi uses its own,
        // so integrals agree to the convergent error while sups match exactly
        auto fresh = analysis::psi_exact(kThrees, row.n);
        CHECK(std::abs(to_double(fresh.integral()) - to_double(row.integral)) <
              1e-6 * to_double(row.integral));
        CHECK(fresh.sup() == row.sup);
        CHECK(row.ratio1 >= 1.0);  // sup dominates the mean
    }
    CHECK(rows[0].integral < rows[1].integral);  // integral nondecreasing
    CHECK(rows[1].integral < rows[2].integral);
}

TEST_CASE("railways cap guard") {
    CHECK_THROWS_AS(analysis::railways_report(kThrees, {1000}, 100), BlockTooLarge);
}

TEST_CASE("wrllt rows respect Cauchy-Schwarz") {
    auto rows2 = analysis::wrllt_report(kThrees, 8, 2);
    auto rows1 = analysis::wrllt_report(kThrees, 8, 1);
    REQUIRE(rows1.size() == rows2.size());
    for (size_t i = 0; i < rows1.size(); ++i)
        for (int c = 0; c < 2; ++c)
            CHECK(rows1[i].integral[c] - rows1[i].bound[c] <=
                  std::sqrt(rows2[i].integral[c]) + 1e-12);
}

TEST_CASE("wrllt scaling stays in a narrow band on the remark-2 stream") {
    mcf::DigitSequence remark2{{5}, std::vector<int>{4}};
    auto rows = analysis::wrllt_report(remark2, 12, 2);
    double lo = 1e300, hi = 0;
    for (const auto& row : rows) {
        if (row.k < 3) continue;
        for (int c = 0; c < 2; ++c) {
            lo = std::min(lo, row.scaled[c]);
            hi = std::max(hi, row.scaled[c]);
        }
    }
    CHECK(hi / lo < 3.0);
}

TEST_CASE("normal cdf reference points") {
    CHECK(analysis::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(analysis::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
    CHECK(analysis::normal_cdf(-8.0) < 1e-14);
}

TEST_CASE("ks distance of a symmetric two-point law") {
    genfun::TemporalLaw law;
    law.probabilities[-1] = Rat(1, 2);
    law.probabilities[1] = Rat(1, 2);
    // standardized atoms at -1, +1; the CDF jumps 0 -> 1/2 at z = -1
    double expect = 0.5 - analysis::normal_cdf(-1.0);
    CHECK(analysis::ks_to_normal(law) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("clt report converges for the all-threes stream") {
    auto rows = analysis::clt_report(kThrees, 2, 3, 19);
    REQUIRE(rows.size() == 19);
    // exact-law contract: level = offset + period * n
    for (const auto& row : rows) CHECK(row.level == 2 + 3 * row.n);
    const size_t last = rows.size() - 1;
    CHECK(rows[last].ks < 0.05);
    CHECK(rows[last].ks < rows[last - 1].ks);
    CHECK(rows[last - 1].ks < rows[last - 2].ks);
    // the fitted scale stabilizes
    CHECK(rows[last].c_hat == doctest::Approx(rows[last - 1].c_hat).epsilon(0.05));
}

TEST_CASE("supporting invariant suites") {
    verify::SuiteConfig cfg;
    cfg.digits = kTwoThree;
    cfg.levels = 8;
    for (const char* name : {"sublemma", "visitlemma", "chain"})
        CHECK(verify::all_pass(verify::run_suite(name, cfg)));
}

TEST_CASE("clt report demands periodic digits") {
    mcf::DigitSequence finite{{3, 3, 3, 3}, std::nullopt};
    CHECK_THROWS_AS(analysis::clt_report(finite, 1, 1, 2), Error);
}
