#pragma once

#include <complex>
#include <cstdint>
#include <map>

#include "skewrat/numeric.hpp"
#include "skewrat/visits.hpp"

namespace skewrat::genfun {

// Sparse Laurent polynomial with exact rational coefficients, evaluated on
// the unit circle Z = e^{i theta}.  Zero coefficients are never stored.
class LaurentPoly {
public:
    LaurentPoly() = default;

    static LaurentPoly constant(const Rat& c);
    static LaurentPoly monomial(std::int64_t e, const Rat& c);
    // phi_N(Z) = (1/N) sum_{k<N} Z^k; phi_0 = phi_{-1} = 0.
    static LaurentPoly fejer(std::int64_t N);
    // phi_N(Z^2), the even-lattice Fejer factor.
    static LaurentPoly fejer_squared_arg(std::int64_t N);
    static LaurentPoly from_counts(const std::map<std::int64_t, Int>& counts);

    const std::map<std::int64_t, Rat>& coefficients() const { return coef_; }
    Rat at(std::int64_t e) const;
    void set(std::int64_t e, const Rat& c);
    bool empty() const { return coef_.empty(); }

    LaurentPoly& operator+=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;

    LaurentPoly scaled(const Rat& c) const;
    LaurentPoly shifted(std::int64_t m) const;  // multiply by Z^m
    LaurentPoly reflected() const;              // Z -> Z^{-1}

    std::complex<double> eval(double theta) const;
    Rat eval_at_one() const;

    std::int64_t min_exp() const;
    std::int64_t max_exp() const;
    std::int64_t span() const;

    bool operator==(const LaurentPoly&) const = default;

private:
    std::map<std::int64_t, Rat> coef_;
};

// Exact probability law P_k^(i) = V_k^(i) / l_k(i) on the integers.
struct TemporalLaw {
    std::map<std::int64_t, Rat> probabilities;
    int level = 0;
    int flavor = 0;

    Rat mass() const;
    Rat mean() const;
    Rat variance() const;
    LaurentPoly poly() const;
    bool operator==(const TemporalLaw&) const = default;
};

TemporalLaw temporal_law(const visits::VisitDistribution& V);

Rat q_weight(std::int64_t N);  // q_N = 1 - floor(N/2)/N, q_0 = 0

// p_{k+1}(i) = (n-1-i) l_k(0) / l_{k+1}(i) from the length recursion.
Rat p_weight(int n_next, int i, const Int& l0_prev, const Int& l1_prev);

// One generating-function transition for coordinate i.
LaurentPoly phi_step(const LaurentPoly& f0, const LaurentPoly& f1, int n_next, int eps, int i,
                     const Int& l0_prev, const Int& l1_prev);

// Parseval: integral over the circle of |p|^2 for real-coefficient p.
Rat l2_integral(const LaurentPoly& p);

struct L1Result {
    double value = 0;
    double error_bound = 0;
};

// Certified trapezoidal estimate of the circle integral of |p|.
L1Result l1_integral(const LaurentPoly& p, std::int64_t grid);
std::int64_t default_l1_grid(const LaurentPoly& p);

// Both sides of the Visit Lemma inequalities at one frame.  The Psi-side
// numbers are supplied by the caller (computed in `analysis`).
struct VisitLemmaReport {
    Rat psi_l0_integral;       // integral of Psi_{l_k(0)}
    Rat rhs41;                 // (1/4 l_k(0)) * integral |U_hat^(1)|^2
    bool holds41 = false;
    Int psi_l1_sup;            // sup of Psi_{l_k(1)}
    L1Result u_l1[2];          // integral |U_hat^(i)|, i = 0,1
    bool holds42[2] = {false, false};
};

VisitLemmaReport visit_lemma_report(const visits::Frame& frame, const Rat& psi_l0_integral,
                                    const Int& psi_l1_sup);

}  // namespace skewrat::genfun
