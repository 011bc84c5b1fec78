#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewrat/mcf.hpp"
#include "skewrat/rat.hpp"

namespace skewrat::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteConfig {
    mcf::DigitSequence digits{{}, std::vector<int>{3}};
    std::int64_t max_len = 100'000;
    int levels = 8;
    int instances = 100;
    int count = 1000;
    int grid = 4096;
    std::uint64_t seed = 7;
};

std::vector<std::string> suite_names();

// Runs one named invariant suite; throws UsageError on an unknown name.
std::vector<CheckResult> run_suite(const std::string& name, const SuiteConfig& cfg);

bool all_pass(const std::vector<CheckResult>& results);

// Deterministic random flip RAT on Z^d (splitmix64-driven, platform stable).
rat::FlipRat random_flip_rat(std::uint64_t& state, int d, int max_offset);

}  // namespace skewrat::verify
