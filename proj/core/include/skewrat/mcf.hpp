#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewrat/errors.hpp"
#include "skewrat/numeric.hpp"

namespace skewrat::mcf {

// Digits n_k >= 2 of the minus continued fraction
//   beta = 1/(n_1 - 1/(n_2 - ...)),   beta = 2*alpha in (0,1).
// An optional tail is repeated periodically after the prefix.
struct DigitSequence {
    std::vector<int> prefix;
    std::optional<std::vector<int>> tail;

    bool periodic() const { return tail.has_value(); }

    // 1-indexed digit access; throws InsufficientDigits past a finite prefix.
    int digit(std::int64_t k) const;

    // Number of digits available, or nullopt when periodic (unbounded).
    std::optional<std::int64_t> available() const;

    // Throws Error unless every digit >= 2 and a tail, if present, is
    // nonempty and not all-2 (an all-2 tail encodes a rational beta).
    void validate() const;

    bool operator==(const DigitSequence&) const = default;
};

struct BadnessCertificate {
    int max_digit = 2;
    int max_run_of_2s = 0;
    // nullopt means exact over the full periodic sequence.
    std::optional<std::int64_t> window;
};

// nu_1 < nu_2 < ...; each gap (nu_k, nu_{k+1}] holds exactly four digits > 2
// with nu_{k+1} minimal.
struct CanonicalSubsequence {
    std::vector<std::int64_t> indices;
};

// Minus-CF digits of beta given as a decimal string, via the map
// n = ceil(1/beta), beta' = n - 1/beta.  Works at `start_bits` of mpfr
// precision, doubling up to `max_bits` when the residual becomes
// indistinguishable from 0 or 1; then throws PrecisionExhausted carrying
// the digits found so far.
DigitSequence expand(const std::string& beta_decimal, int k_max,
                     unsigned start_bits = 256, unsigned max_bits = 4096);

// Convergent p_k/q_k of the first k digits.  Denominators are strictly
// increasing and the convergents increase to beta.
std::pair<Int, Int> convergent(const DigitSequence& digits, int k);
Rat evaluate(const DigitSequence& digits, int k);

// Smallest order k with q_k >= bound (requires enough digits).
int order_for_denominator(const DigitSequence& digits, const Int& bound, int extra = 0);

// Max digit and max run of consecutive 2s.  window = nullopt needs a
// periodic sequence and gives the exact (whole-sequence) certificate.
BadnessCertificate badness(const DigitSequence& digits,
                           std::optional<std::int64_t> window = std::nullopt);

CanonicalSubsequence canonical_subsequence(const DigitSequence& digits, int K);

}  // namespace skewrat::mcf
