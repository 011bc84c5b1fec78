#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "skewrat/cocycle.hpp"
#include "skewrat/errors.hpp"
#include "skewrat/mcf.hpp"

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

TEST_CASE("jump on exact rationals") {
    CHECK(cocycle::jump(Rat(0)) == 1);
    CHECK(cocycle::jump(Rat(1, 2)) == -1);
    CHECK(cocycle::jump(Rat(3, 4)) == -1);
    CHECK(cocycle::jump(Rat(499, 1000)) == 1);
    CHECK(cocycle::jump(Rat(-1, 4)) == -1);  // reduces to 3/4
}

TEST_CASE("jump on floats flags boundary ambiguity") {
    CHECK(cocycle::jump(0.25) == 1);
    CHECK(cocycle::jump(0.75) == -1);
    CHECK_THROWS_AS(cocycle::jump(0.5 + 1e-14), BoundaryAmbiguity);
    CHECK_THROWS_AS(cocycle::jump(1e-14), BoundaryAmbiguity);
}

TEST_CASE("cocycle_sum at alpha = (3-sqrt5)/4") {
    Rat alpha = mcf::evaluate(kThrees, 20) / 2;
    CHECK(cocycle::cocycle_sum(alpha, 0, Rat(1, 3)) == 0);
    CHECK(cocycle::cocycle_sum(alpha, 3, Rat(0)) == 3);
    CHECK(cocycle::cocycle_sum(alpha, 6, Rat(0)) == 0);
}

TEST_CASE("psi_direct small values") {
    CHECK(cocycle::psi_direct(kThrees, 1) == 0);
    CHECK(cocycle::psi_direct(kThrees, 2) == 0);
    CHECK(cocycle::psi_direct(kThrees, 3) == 1);
}

TEST_CASE("substitution blocks at low levels") {
    auto [b0, b1] = cocycle::substitution_blocks(kThrees, 0);
    CHECK(b0.data == std::vector<std::int64_t>{0});
    CHECK(b1.data == std::vector<std::int64_t>{1});

    auto [c0, c1] = cocycle::substitution_blocks(kThrees, 1);
    CHECK(c0.data == std::vector<std::int64_t>{0, 0, 1});
    CHECK(c1.data == std::vector<std::int64_t>{0, 1});

    auto [d0, d1] = cocycle::substitution_blocks(kTwoThree, 1);  // n_1 = 2
    CHECK(d0.data == std::vector<std::int64_t>{0, 1});
    CHECK(d1.data == std::vector<std::int64_t>{1});
}

TEST_CASE("sign blocks and parities at low levels") {
    auto sb0 = cocycle::sign_blocks(kThrees, 0);
    CHECK(sb0.B0.data == std::vector<std::int64_t>{1});
    CHECK(sb0.B1.data == std::vector<std::int64_t>{-1});
    CHECK(sb0.eps0 == 0);
    CHECK(sb0.eps1 == 1);

    auto sb1 = cocycle::sign_blocks(kThrees, 1);
    CHECK(sb1.B0.data == std::vector<std::int64_t>{1, 1, -1});
    CHECK(sb1.eps0 == 1);  // sum of b_1(0) = 0+0+1
    CHECK(sb1.eps1 == 1);
}

TEST_CASE("orbit blocks follow the brute-force cocycle") {
    auto [S0, S1] = cocycle::orbit_block(kThrees, 1);
    CHECK(S0.data == std::vector<std::int64_t>{1, 2, 3});
    CHECK(S1.data == std::vector<std::int64_t>{1, 2});

    auto [T0, T1] = cocycle::orbit_block(kThrees, 2);
    CHECK(T0.data == std::vector<std::int64_t>{1, 2, 3, 2, 1, 0, 1, 2});
    CHECK(T1.data == std::vector<std::int64_t>{1, 2, 3, 2, 1});

    // last entries realize the position sums
    auto st = cocycle::renorm_state(kThrees, 2);
    CHECK(T0.data.back() == st.s0);
    CHECK(T1.data.back() == st.s1);

    // oracle: partial sums of the jump orbit
    Rat alpha = mcf::evaluate(kThrees, 25) / 2;
    for (size_t m = 1; m <= T0.data.size(); ++m)
        CHECK(T0.data[m - 1] == cocycle::cocycle_sum(alpha, static_cast<std::int64_t>(m), Rat(0)));
}

TEST_CASE("orbit block of flavor 1 is frozen by digit 2") {
    // digits [3,2,...]: at level 1 the parity is (1,1) and n_2 = 2
    mcf::DigitSequence d{{3, 2}, std::vector<int>{3}};
    auto lv1 = cocycle::orbit_block(d, 1);
    auto lv2 = cocycle::orbit_block(d, 2);
    CHECK(lv2.second.data == lv1.second.data);
}

TEST_CASE("renorm transitions follow the parity diagram") {
    auto st = cocycle::initial_state();
    CHECK(st.eps0 == 0);
    CHECK(st.eps1 == 1);
    CHECK(st.s0 == 1);
    CHECK(st.s1 == 1);
    CHECK(st.T == -1);

    // (0,1) --B(N)--> (1,1)
    auto st1 = cocycle::renorm_advance(st, 3);
    CHECK(st1.eps0 == 1);
    CHECK(st1.eps1 == 1);
    CHECK(st1.s0 == 3);
    CHECK(st1.s1 == 2);
    CHECK(st1.T == -3);

    // (1,1) --odd N, A(1)--> (1,0), increment +1
    auto st2 = cocycle::renorm_advance(st1, 3);
    CHECK(st2.eps0 == 1);
    CHECK(st2.eps1 == 0);
    CHECK(st2.T - st1.T == 1);

    // (1,0) --even N, A(0)--> self loop, increment +1
    auto loop = cocycle::renorm_advance(st2, 4);
    CHECK(loop.eps0 == 1);
    CHECK(loop.eps1 == 0);
    CHECK(loop.T - st2.T == 1);

    // (0,1) --B(N)--> (1,1) has increment -(N-1)
    auto st3 = cocycle::renorm_advance(st2, 3);  // (1,0) -> (0,1)
    CHECK(st3.eps0 == 0);
    auto st4 = cocycle::renorm_advance(st3, 5);
    CHECK(st4.T - st3.T == -4);
}

TEST_CASE("increment identities hold along random digit streams") {
    // renorm_advance cross-checks the Prop 3.2 increments and the position
    // trichotomy internally on every step; drive it hard
    std::uint64_t state = 555;
    for (int trial = 0; trial < 10000; ++trial) {
        cocycle::RenormState st = cocycle::initial_state();
        for (int k = 0; k < 30; ++k)
            CHECK_NOTHROW(st = cocycle::renorm_advance(st, 2 + static_cast<int>(splitmix(state) % 5)));
    }
}

TEST_CASE("renorm state agrees with materialized blocks on random streams") {
    std::uint64_t state = 2024;
    for (int trial = 0; trial < 40; ++trial) {
        mcf::DigitSequence d;
        for (int i = 0; i < 30; ++i) d.prefix.push_back(2 + static_cast<int>(splitmix(state) % 4));
        cocycle::RenormState st = cocycle::initial_state();
        for (int k = 1; k <= 30; ++k) st = cocycle::renorm_advance(st, d.digit(k));

        int k_small = 1 + static_cast<int>(splitmix(state) % 5);
        auto sb = cocycle::sign_blocks(d, k_small);
        auto stk = cocycle::renorm_state(d, k_small);
        CHECK(sb.eps0 == stk.eps0);
        CHECK(sb.eps1 == stk.eps1);
        CHECK(sb.B0.size() == stk.l0);
        CHECK(sb.B1.size() == stk.l1);
        auto orbit = cocycle::orbit_block(d, k_small);
        CHECK(orbit.first.data.back() == stk.s0);
        CHECK(orbit.second.data.back() == stk.s1);
    }
}

TEST_CASE("substitution blocks match psi_direct up to moderate length") {
    for (const auto& digits : {kThrees, kTwoThree}) {
        int k = 0;
        while (true) {
            auto st = cocycle::renorm_state(digits, k);
            if (st.l0 > 400) break;
            auto [b0, b1] = cocycle::substitution_blocks(digits, k);
            for (std::int64_t n = 1; n <= b0.size(); ++n)
                REQUIRE(b0.data[static_cast<size_t>(n - 1)] == cocycle::psi_direct(digits, n));
            ++k;
        }
    }
}

TEST_CASE("sign blocks match the jump orbit shifted by one") {
    for (const auto& digits : {kThrees, kTwoThree}) {
        auto sb = cocycle::sign_blocks(digits, 4);
        Rat alpha = mcf::evaluate(digits, 20) / 2;
        for (std::int64_t j = 0; j < sb.B0.size(); ++j)
            REQUIRE(sb.B0.data[static_cast<size_t>(j)] ==
                    cocycle::jump(frac(Rat(j + 1) * alpha)));
    }
}

TEST_CASE("block cap raises BlockTooLarge") {
    CHECK_THROWS_AS(cocycle::substitution_blocks(kThrees, 40, 1000), BlockTooLarge);
    CHECK_THROWS_AS(cocycle::orbit_block(kThrees, 40, 1000), BlockTooLarge);
}
