#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "skewrat/errors.hpp"
#include "skewrat/mcf.hpp"

using namespace skewrat;

namespace {

// Decimal expansion of a rational in (0,1) to `digits` places, for feeding
// exact convergents back into expand().
std::string decimal_string(const Rat& x, int digits) {
    Int scaled = (numerator(x) * pow(Int(10), static_cast<unsigned>(digits))) / denominator(x);
    std::string s = scaled.str();
    if (static_cast<int>(s.size()) < digits) s.insert(0, static_cast<size_t>(digits) - s.size(), '0');
    return "0." + s;
}

std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

mcf::DigitSequence random_periodic(std::uint64_t& state) {
    mcf::DigitSequence d;
    const int plen = static_cast<int>(splitmix(state) % 4);
    for (int i = 0; i < plen; ++i) d.prefix.push_back(2 + static_cast<int>(splitmix(state) % 5));
    std::vector<int> tail;
    const int tlen = 1 + static_cast<int>(splitmix(state) % 4);
    for (int i = 0; i < tlen; ++i) tail.push_back(2 + static_cast<int>(splitmix(state) % 5));
    tail[static_cast<size_t>(splitmix(state) % tail.size())] = 3 + static_cast<int>(splitmix(state) % 4);
    d.tail = tail;
    d.validate();
    return d;
}

}  // namespace

TEST_CASE("expand: golden ratio digits are 2,3,3,3,...") {
    auto d = mcf::expand("0.6180339887498948482045868343656381177203091798057628621354486227", 30);
    REQUIRE(d.prefix.size() == 30);
    CHECK(d.prefix[0] == 2);
    for (size_t i = 1; i < d.prefix.size(); ++i) CHECK(d.prefix[i] == 3);
}

TEST_CASE("expand: (3-sqrt5)/2 digits are all 3") {
    auto d = mcf::expand("0.3819660112501051517954131656343618822796908201942371378645513773", 30);
    for (int v : d.prefix) CHECK(v == 3);
}

TEST_CASE("expand: rational 1/2 exhausts precision after [2]") {
    try {
        mcf::expand("0.5", 10);
        FAIL("expected PrecisionExhausted");
    } catch (const PrecisionExhausted& e) {
        CHECK(e.partial_digits == std::vector<int>{2});
    }
}

TEST_CASE("evaluate: small finite expansions") {
    mcf::DigitSequence d23{{2, 3}, std::nullopt};
    CHECK(mcf::evaluate(d23, 1) == Rat(1, 2));
    CHECK(mcf::evaluate(d23, 2) == Rat(3, 5));
    mcf::DigitSequence d33{{3, 3}, std::nullopt};
    CHECK(mcf::evaluate(d33, 2) == Rat(3, 8));
}

TEST_CASE("badness certificates") {
    mcf::DigitSequence golden{{2}, std::vector<int>{3}};
    auto cert = mcf::badness(golden);
    CHECK(cert.max_digit == 3);
    CHECK(cert.max_run_of_2s == 1);
    CHECK(!cert.window.has_value());

    mcf::DigitSequence threes{{}, std::vector<int>{3}};
    auto cert3 = mcf::badness(threes);
    CHECK(cert3.max_digit == 3);
    CHECK(cert3.max_run_of_2s == 0);

    mcf::DigitSequence runs{{5, 2, 2, 2, 3}, std::nullopt};
    auto certw = mcf::badness(runs, 5);
    CHECK(certw.max_digit == 5);
    CHECK(certw.max_run_of_2s == 3);

    // a run crossing the tail wrap is seen exactly: ...2,3,[2,2],3,2...
    mcf::DigitSequence wrap{{}, std::vector<int>{2, 3, 2}};
    CHECK(mcf::badness(wrap).max_run_of_2s == 2);
}

TEST_CASE("canonical subsequence examples") {
    mcf::DigitSequence threes{{}, std::vector<int>{3}};
    auto nu = mcf::canonical_subsequence(threes, 2);
    CHECK(nu.indices == std::vector<std::int64_t>{4, 8});

    mcf::DigitSequence mixed{{3, 2, 3, 2, 3, 3, 2, 3, 3, 3, 3}, std::nullopt};
    CHECK(mcf::canonical_subsequence(mixed, 1).indices == std::vector<std::int64_t>{6});

    mcf::DigitSequence alt{{}, std::vector<int>{2, 3}};
    CHECK(mcf::canonical_subsequence(alt, 1).indices == std::vector<std::int64_t>{8});

    mcf::DigitSequence finite{{3, 3, 3}, std::nullopt};
    CHECK_THROWS_AS(mcf::canonical_subsequence(finite, 1), InsufficientDigits);
}

TEST_CASE("round trip: expand(evaluate) reproduces periodic digits") {
    std::uint64_t state = 12345;
    for (int trial = 0; trial < 10; ++trial) {
        auto d = random_periodic(state);
        Rat beta = mcf::evaluate(d, 70);
        auto back = mcf::expand(decimal_string(beta, 160), 50, 1024);
        for (int k = 1; k <= 50; ++k) CHECK(back.digit(k) == d.digit(k));
    }
}

TEST_CASE("expand never emits a digit below 2") {
    std::uint64_t state = 777;
    for (int trial = 0; trial < 8; ++trial) {
        auto d = random_periodic(state);
        auto back = mcf::expand(decimal_string(mcf::evaluate(d, 60), 140), 40, 1024);
        for (int v : back.prefix) CHECK(v >= 2);
    }
}

TEST_CASE("convergents increase with strictly decreasing steps") {
    mcf::DigitSequence d{{2}, std::vector<int>{2, 2, 3}};
    Rat prev_gap = 1;
    Int prev_q = 0;
    for (int k = 1; k <= 40; ++k) {
        auto [p, q] = mcf::convergent(d, k);
        CHECK(q > prev_q);
        prev_q = q;
        if (k >= 2) {
            Rat gap = mcf::evaluate(d, k) - mcf::evaluate(d, k - 1);
            CHECK(gap > 0);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
    }
}

TEST_CASE("canonical gaps are syndetic for BAD periodic digits") {
    std::uint64_t state = 99;
    for (int trial = 0; trial < 6; ++trial) {
        auto d = random_periodic(state);
        auto cert = mcf::badness(d);
        auto nu = mcf::canonical_subsequence(d, 40);
        const std::int64_t bound = 4 * (cert.max_run_of_2s + 1) +
                                   static_cast<std::int64_t>(d.prefix.size());
        std::int64_t prev = 0;
        for (auto v : nu.indices) {
            CHECK(v - prev <= bound);
            prev = v;
        }
    }
}

TEST_CASE("digit sequence validation") {
    CHECK_THROWS_AS((mcf::DigitSequence{{1, 3}, std::nullopt}.validate()), Error);
    CHECK_THROWS_AS((mcf::DigitSequence{{}, std::vector<int>{2, 2}}.validate()), Error);
    CHECK_THROWS_AS((mcf::DigitSequence{{}, std::vector<int>{}}.validate()), Error);
    CHECK_NOTHROW((mcf::DigitSequence{{2, 2, 2}, std::vector<int>{2, 3}}.validate()));
}
