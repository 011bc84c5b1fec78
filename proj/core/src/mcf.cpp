#include "skewrat/mcf.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>

namespace skewrat::mcf {

namespace mp = boost::multiprecision;
using BigFloat = mp::mpfr_float;

int DigitSequence::digit(std::int64_t k) const {
    if (k < 1) throw Error("digit index must be >= 1");
    if (k <= static_cast<std::int64_t>(prefix.size())) return prefix[static_cast<size_t>(k - 1)];
    if (!tail) {
        throw InsufficientDigits("digit " + std::to_string(k) + " requested, only " +
                                 std::to_string(prefix.size()) + " available");
    }
    const auto& t = *tail;
    return t[static_cast<size_t>((k - 1 - static_cast<std::int64_t>(prefix.size())) % t.size())];
}

std::optional<std::int64_t> DigitSequence::available() const {
    if (tail) return std::nullopt;
    return static_cast<std::int64_t>(prefix.size());
}

void DigitSequence::validate() const {
    for (int d : prefix)
        if (d < 2) throw Error("minus-CF digit < 2 in prefix");
    if (tail) {
        if (tail->empty()) throw Error("periodic tail must be nonempty");
        bool all2 = true;
        for (int d : *tail) {
            if (d < 2) throw Error("minus-CF digit < 2 in tail");
            if (d != 2) all2 = false;
        }
        if (all2) throw Error("all-2 tail encodes a rational beta");
    }
}

namespace {

struct PrecisionGuard {
    unsigned saved;
    explicit PrecisionGuard(unsigned bits) : saved(BigFloat::default_precision()) {
        // boost mpfr precision is counted in decimal digits
        BigFloat::default_precision(static_cast<unsigned>(bits * 0.3010299957) + 2);
    }
    ~PrecisionGuard() { BigFloat::default_precision(saved); }
};

// One expansion attempt at fixed precision; returns digits or nullopt when
// the residual degenerates before k_max digits.
std::optional<std::vector<int>> try_expand(const std::string& beta_decimal, int k_max,
                                           unsigned bits, std::vector<int>& partial) {
    PrecisionGuard guard(bits);
    BigFloat beta(beta_decimal);
    if (beta <= 0 || beta >= 1) throw Error("beta must lie in (0,1)");

    BigFloat tol = pow(BigFloat(2), -static_cast<int>(bits / 2));
    std::vector<int> digits;
    digits.reserve(static_cast<size_t>(k_max));
    for (int k = 0; k < k_max; ++k) {
        if (beta < tol || beta > 1 - tol) {
            partial = digits;
            return std::nullopt;
        }
        BigFloat inv = 1 / beta;
        BigFloat n = ceil(inv);
        long nk = n.convert_to<long>();
        if (nk < 2) throw Error("internal: minus-CF digit < 2");
        if (nk > (1L << 30)) {
            partial = digits;
            return std::nullopt;  // absurd digit: beta was within noise of 0
        }
        digits.push_back(static_cast<int>(nk));
        beta = BigFloat(nk) - inv;
    }
    return digits;
}

}  // namespace

DigitSequence expand(const std::string& beta_decimal, int k_max, unsigned start_bits,
                     unsigned max_bits) {
    if (k_max < 1) throw Error("k_max must be >= 1");
    std::vector<int> partial;
    for (unsigned bits = start_bits; bits <= max_bits; bits *= 2) {
        auto digits = try_expand(beta_decimal, k_max, bits, partial);
        if (digits) {
            DigitSequence out{*digits, std::nullopt};
            out.validate();
            return out;
        }
    }
    throw PrecisionExhausted("residual indistinguishable from 0 or 1 after " +
                                 std::to_string(partial.size()) + " digits",
                             partial);
}

std::pair<Int, Int> convergent(const DigitSequence& digits, int k) {
    if (k < 1) throw Error("convergent order must be >= 1");
    // p_0 = 0, q_0 = 1; p_1 = 1, q_1 = n_1; u_k = n_k u_{k-1} - u_{k-2}.
    Int p_prev = 0, q_prev = 1;
    Int p = 1, q = digits.digit(1);
    for (int j = 2; j <= k; ++j) {
        int n = digits.digit(j);
        Int p_next = n * p - p_prev;
        Int q_next = n * q - q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    return {p, q};
}

Rat evaluate(const DigitSequence& digits, int k) {
    auto [p, q] = convergent(digits, k);
    return Rat(p, q);
}

int order_for_denominator(const DigitSequence& digits, const Int& bound, int extra) {
    Int q_prev = 1, q = digits.digit(1);
    int k = 1;
    while (q < bound) {
        ++k;
        int n = digits.digit(k);  // throws InsufficientDigits when exhausted
        Int q_next = n * q - q_prev;
        q_prev = q;
        q = q_next;
    }
    for (int j = 0; j < extra; ++j) digits.digit(k + j + 1);  // availability check
    return k + extra;
}

BadnessCertificate badness(const DigitSequence& digits, std::optional<std::int64_t> window) {
    digits.validate();
    std::int64_t n_inspect;
    if (window) {
        if (*window < 1) throw Error("window must be >= 1");
        n_inspect = *window;
        if (!digits.periodic() &&
            n_inspect > static_cast<std::int64_t>(digits.prefix.size()))
            throw InsufficientDigits("window exceeds available digits");
    } else {
        if (!digits.periodic())
            throw Error("exact certificate requires a periodic DigitSequence");
        // prefix plus two periods covers every run and every digit value
        n_inspect = static_cast<std::int64_t>(digits.prefix.size() + 2 * digits.tail->size());
    }

    BadnessCertificate cert;
    cert.window = window;
    int run = 0;
    for (std::int64_t k = 1; k <= n_inspect; ++k) {
        int d = digits.digit(k);
        cert.max_digit = std::max(cert.max_digit, d);
        if (d == 2) {
            ++run;
            cert.max_run_of_2s = std::max(cert.max_run_of_2s, run);
        } else {
            run = 0;
        }
    }
    return cert;
}

CanonicalSubsequence canonical_subsequence(const DigitSequence& digits, int K) {
    if (K < 1) throw Error("K must be >= 1");
    CanonicalSubsequence out;
    out.indices.reserve(static_cast<size_t>(K));
    auto avail = digits.available();
    std::int64_t k = 0;
    int big = 0;  // digits > 2 since the previous nu
    while (static_cast<int>(out.indices.size()) < K) {
        ++k;
        if (avail && k > *avail)
            throw InsufficientDigits("fewer than 4K digits > 2 available");
        if (digits.digit(k) > 2) ++big;
        if (big == 4) {
            out.indices.push_back(k);
            big = 0;
        }
    }
    return out;
}

}  // namespace skewrat::mcf
