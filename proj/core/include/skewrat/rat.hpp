#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "skewrat/genfun.hpp"
#include "skewrat/mcf.hpp"
#include "skewrat/numeric.hpp"

namespace skewrat::rat {

// One realization of a flip-type random affine transformation: a sign
// matrix with exactly one nonzero entry per row, an offset vector, and the
// probability of drawing this pair.
struct Atom {
    std::vector<std::int8_t> a;  // d x d row-major, entries in {-1,0,1}
    std::vector<Rat> b;          // offsets; rational after centering
    Rat p;
};

struct SpecInfo {
    int parity = 0;       // 0 = even (eps_{k-1} = 0 equations), 1 = odd
    int coefficient = 2;  // n(F); 2 is trivial
    bool trivial() const { return coefficient == 2; }
};

// A row atom for the independent-coupling product construction.
struct RowAtom {
    int coord = 0;
    int sign = 1;
    Rat offset;
    Rat prob;
};

class FlipRat {
public:
    FlipRat(int d, std::vector<Atom> atoms, std::optional<SpecInfo> info = std::nullopt);

    static FlipRat identity(int d);
    // Joint law with independent rows (the default coupling hook).
    static FlipRat from_rows(const std::vector<std::vector<RowAtom>>& rows,
                             std::optional<SpecInfo> info = std::nullopt);

    int dim() const { return d_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<SpecInfo>& spec_info() const { return spec_; }
    bool discrete() const;

    Rat target_prob(int k, int l) const;          // P(L(k,a) = l)
    Rat sign_prob(int k, int l, int sign) const;  // P(a_{k,l} = sign)
    // Law of b_k conditioned on a_{k,l} = sign (empty if impossible).
    std::map<Rat, Rat> offset_law(int k, int l, int sign) const;

    std::vector<Rat> mean_matrix() const;  // E(a), row-major
    Rat mean_matrix_norm() const;          // ||E(a)||, max abs row sum
    std::vector<Rat> mean_offset() const;  // E(b)
    Rat max_offset_norm() const;           // max over atoms of ||b||_inf
    Rat min_atom_prob() const;

private:
    int d_;
    std::vector<Atom> atoms_;
    std::optional<SpecInfo> spec_;
};

// ---- spec-RAT constructors -------------------------------------------------

// The alpha-RAT step taken verbatim from the construction displays (its
// classification table is the one checked by `predicates`).
FlipRat spec_rat(int n_k, int eps_prev, const Int& l0_prev, const Int& l1_prev);

// The step whose RAT-CF equals the generating-function transition of the
// temporal laws; this is the one an alpha-ARW must use.
FlipRat alpha_step_rat(int n_k, int eps_prev, const Int& l0_prev, const Int& l1_prev);

// F_1..F_K generating an alpha-ARW: ARW law of X^(k) equals P_k^(i) exactly.
std::vector<FlipRat> alpha_rat_sequence(const mcf::DigitSequence& digits, int K);

// ---- composition and characteristic matrices -------------------------------

// F_outer after F_inner, independent atoms, merged on equal (a, b).
FlipRat compose(const FlipRat& outer, const FlipRat& inner);

// 2d x 2d matrix of Laurent polynomials driving the linear recursion of
// coordinate characteristic functions of (X, -X).  Discrete RATs only.
struct RatCf {
    int d = 1;
    std::vector<genfun::LaurentPoly> entries;  // (2d)^2 row-major

    const genfun::LaurentPoly& at(int row, int col) const { return entries[row * 2 * d + col]; }
    std::vector<Rat> base_matrix() const;  // P(0), row-major
    double norm(double theta) const;       // max abs row sum at Z = e^{i theta}
    // Coefficients of det(P(theta) - lambda I) as polynomials in Z.
    std::vector<genfun::LaurentPoly> char_poly_coefficients() const;
};

RatCf rat_cf(const FlipRat& F);

// ||P_F(theta)||, computed directly from the atoms (rational offsets ok).
double cf_norm(const FlipRat& F, double theta);

// ---- structural predicates ---------------------------------------------------

struct Predicates {
    bool irreducible = false;
    bool mean_contractive = false;
    bool balanced = false;
    bool adapted = false;
    bool strongly_adapted = false;
    bool partially_adapted = false;
    std::vector<int> adapted_rows;
    Rat kappa;  // min over rows of the conditional-variance row sums
};

Predicates predicates(const FlipRat& F);

struct PeriodicityGroup {
    enum class Kind { full_line, lattice, trivial, union_of_lattices };
    Kind kind = Kind::trivial;
    // Gamma = (2 pi / divisor) Z when kind == lattice; divisor 0 on full_line.
    Rat divisor;
    std::vector<Rat> row_divisors;  // per-row lattice divisor, 0 = full line
    // gcd of the row divisors: every member is a period of the norm.
    Rat common_divisor;

    bool contains(const Rat& theta_over_two_pi) const;
};

PeriodicityGroup periodicity_group(const FlipRat& F);

// ---- centering, grouping, compactness ---------------------------------------

struct CenteredSequence {
    std::vector<FlipRat> rats;
    std::vector<std::vector<Rat>> means;  // c_n = E(X^(n)), n = 1..N
};

CenteredSequence center(const std::vector<FlipRat>& seq);

// Canonical grouping G_k = F_{nu_k} o ... o F_{nu_{k-1}+1}; asserts each G_k
// is adapted and mean contractive.
std::vector<FlipRat> group(const std::vector<FlipRat>& seq, const mcf::CanonicalSubsequence& nu);

struct CompactnessReport {
    Rat min_atom;   // 1/M of condition (i)
    Rat max_b_inf;  // condition (ii)
    std::vector<Rat> r_trajectory;
    Rat r_min;
};

CompactnessReport compactness_report(const std::vector<FlipRat>& collection);
CompactnessReport compactness_report(const std::vector<FlipRat>& collection,
                                     const mcf::DigitSequence& digits, int levels);

// r_k = l_k(1)/l_k(0), k = 0..K.
std::vector<Rat> length_ratio_trajectory(const mcf::DigitSequence& digits, int K);

// ---- exact laws, simulation, variance ----------------------------------------

struct ArwDistribution {
    std::map<std::vector<Rat>, Rat> law;
    int step = 0;

    Rat mass() const;
    std::vector<Rat> mean(int d) const;
    Rat second_moment(int k) const;
    std::map<Rat, Rat> marginal(int k) const;
    // Marginal as a temporal law; requires integer support.
    genfun::TemporalLaw marginal_law(int k) const;
};

ArwDistribution exact_arw_law(const std::vector<FlipRat>& seq, int n,
                              std::int64_t state_cap = 10'000'000);

struct EmpiricalLaw {
    std::map<std::vector<std::int64_t>, std::uint64_t> counts;
    std::uint64_t trials = 0;

    std::map<std::int64_t, std::uint64_t> marginal(int k) const;
};

// Streaming Monte Carlo; steps cycle through `seq`; fixed seed gives
// bit-identical counts.  Discrete RATs only.
EmpiricalLaw simulate(const std::vector<FlipRat>& seq, int n, std::uint64_t trials,
                      std::uint64_t seed);

struct VarianceCheck {
    std::vector<Rat> lower, observed, upper;  // per coordinate
    bool sandwich_holds = false;
    bool orthogonal = false;  // cross moments of the Y decomposition vanish
};

VarianceCheck variance_check(const std::vector<FlipRat>& centered_seq, int n);

// ---- spectral data -----------------------------------------------------------

std::complex<double> dominant_eigenvalue(const FlipRat& F, double theta);

struct Spectral {
    std::vector<std::pair<double, std::complex<double>>> lambda_samples;
    double gamma = 0;  // -lambda''(0) by Richardson second differences
    Rat kappa;
};

Spectral spectral(const FlipRat& F, double h = 1e-4);

}  // namespace skewrat::rat
