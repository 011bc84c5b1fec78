#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace skewrat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expansion ran out of workable bits (rational input, or precision cap hit).
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg, std::vector<int> partial = {})
        : Error(msg), partial_digits(std::move(partial)) {}
    std::vector<int> partial_digits;
};

struct InsufficientDigits : Error {
    using Error::Error;
};
struct BoundaryAmbiguity : Error {
    using Error::Error;
};
struct BlockTooLarge : Error {
    using Error::Error;
};
struct ParityViolation : Error {
    using Error::Error;
};
struct MassMismatch : Error {
    using Error::Error;
};
struct HalfIntegerWeight : Error {
    using Error::Error;
};
struct GridTooCoarse : Error {
    using Error::Error;
};
struct StateBlowup : Error {
    using Error::Error;
};
struct CenteringViolation : Error {
    using Error::Error;
};
struct NotAperiodic : Error {
    using Error::Error;
};
struct EigenGapTooSmall : Error {
    using Error::Error;
};
struct GroupingAssertionFailed : Error {
    using Error::Error;
};
struct UsageError : Error {
    using Error::Error;
};

}  // namespace skewrat
