#pragma once

#include <cstdint>
#include <vector>

#include "skewrat/genfun.hpp"
#include "skewrat/mcf.hpp"
#include "skewrat/numeric.hpp"

namespace skewrat::analysis {

inline constexpr std::int64_t kDefaultPsiCap = 100'000;

// Nonnegative integer step function on [0,1); arcs are [b_i, b_{i+1}) with
// wraparound on the last one.
struct StepFunction {
    std::vector<Rat> breakpoints;
    std::vector<std::int64_t> values;

    Rat integral() const;
    std::int64_t sup() const;
    std::int64_t value_at(const Rat& x) const;
};

// Psi_n(x) = #{0 <= k <= n-1 : phi_k(x) = 0}, built incrementally over the
// common refinement of {-k alpha} and {1/2 - k alpha}.
StepFunction psi_exact(const mcf::DigitSequence& digits, std::int64_t n,
                       std::int64_t cap = kDefaultPsiCap);

// The exact rational alpha used by psi_exact for this (digits, n).
Rat psi_alpha(const mcf::DigitSequence& digits, std::int64_t n);

struct RailwaysRow {
    std::int64_t n = 0;
    std::int64_t sup = 0;
    Rat integral;
    double ratio1 = 0;  // sup / integral
    double ratio2 = 0;  // integral * sqrt(ln n) / n
};

// One incremental sweep with snapshots at each requested n.
std::vector<RailwaysRow> railways_report(const mcf::DigitSequence& digits,
                                         const std::vector<std::int64_t>& n_list,
                                         std::int64_t cap = kDefaultPsiCap);

struct WrlltRow {
    int k = 0;
    std::int64_t nu_k = 0;
    double integral[2] = {0, 0};  // I_p at coordinates 0, 1
    double scaled[2] = {0, 0};    // I_p * sqrt(k)
    double bound[2] = {0, 0};     // certified quadrature error (p = 1 only)
};

// I_p(k) = circle integral of |Phi_{nu_k}^(i)|^p along the canonical
// subsequence; p = 2 exact by Parseval, p = 1 quadrature with bound.
std::vector<WrlltRow> wrllt_report(const mcf::DigitSequence& digits, int K, int p);

struct CltRow {
    int n = 0;
    int level = 0;
    double mu_hat = 0;
    double c_hat = 0;
    double ks = 0;
};

// Temporal laws at scales l_{K+Ln}(0) standardized by their own mean/sd,
// with Kolmogorov-Smirnov distance to the standard normal.
std::vector<CltRow> clt_report(const mcf::DigitSequence& digits, int K_offset, int L_period,
                               int n_max);

double normal_cdf(double x);
double ks_to_normal(const genfun::TemporalLaw& law);

}  // namespace skewrat::analysis
