#include "skewrat/rat.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <random>
#include <string>

#include "skewrat/cocycle.hpp"
#include "skewrat/errors.hpp"

namespace skewrat::rat {

namespace {

int nonzero_column(const Atom& atom, int d, int row) {
    int col = -1;
    for (int l = 0; l < d; ++l) {
        if (atom.a[static_cast<size_t>(row) * d + l] != 0) {
            if (col >= 0) throw Error("flip row with two nonzero entries");
            col = l;
        }
    }
    if (col < 0) throw Error("flip row with no nonzero entry");
    return col;
}

}  // namespace

FlipRat::FlipRat(int d, std::vector<Atom> atoms, std::optional<SpecInfo> info)
    : d_(d), spec_(info) {
    if (d < 1) throw Error("dimension must be >= 1");
    // merge duplicates on the canonical (a, b) key
    std::map<std::pair<std::vector<std::int8_t>, std::vector<Rat>>, Rat> merged;
    Rat total = 0;
    for (auto& atom : atoms) {
        if (atom.a.size() != static_cast<size_t>(d) * d || atom.b.size() != static_cast<size_t>(d))
            throw Error("atom shape mismatch");
        if (atom.p <= 0) continue;
        for (int k = 0; k < d; ++k) (void)nonzero_column(atom, d, k);
        total += atom.p;
        merged[{atom.a, atom.b}] += atom.p;
    }
    if (total != 1) throw Error("atom probabilities sum to " + rat_string(total) + ", not 1");
    atoms_.reserve(merged.size());
    for (auto& [key, p] : merged) atoms_.push_back(Atom{key.first, key.second, p});
}

FlipRat FlipRat::identity(int d) {
    Atom atom;
    atom.a.assign(static_cast<size_t>(d) * d, 0);
    for (int k = 0; k < d; ++k) atom.a[static_cast<size_t>(k) * d + k] = 1;
    atom.b.assign(static_cast<size_t>(d), Rat(0));
    atom.p = 1;
    return FlipRat(d, {atom});
}

FlipRat FlipRat::from_rows(const std::vector<std::vector<RowAtom>>& rows,
                           std::optional<SpecInfo> info) {
    const int d = static_cast<int>(rows.size());
    std::vector<Atom> atoms;
    std::vector<size_t> idx(static_cast<size_t>(d), 0);
    while (true) {
        Atom atom;
        atom.a.assign(static_cast<size_t>(d) * d, 0);
        atom.b.assign(static_cast<size_t>(d), Rat(0));
        atom.p = 1;
        for (int k = 0; k < d; ++k) {
            const RowAtom& ra = rows[static_cast<size_t>(k)][idx[static_cast<size_t>(k)]];
            atom.a[static_cast<size_t>(k) * d + ra.coord] = static_cast<std::int8_t>(ra.sign);
            atom.b[static_cast<size_t>(k)] = ra.offset;
            atom.p *= ra.prob;
        }
        if (atom.p > 0) atoms.push_back(std::move(atom));
        int row = d - 1;
        while (row >= 0) {
            if (++idx[static_cast<size_t>(row)] < rows[static_cast<size_t>(row)].size()) break;
            idx[static_cast<size_t>(row)] = 0;
            --row;
        }
        if (row < 0) break;
    }
    return FlipRat(d, std::move(atoms), info);
}

bool FlipRat::discrete() const {
    for (const auto& atom : atoms_)
        for (const auto& v : atom.b)
            if (denominator(v) != 1) return false;
    return true;
}

Rat FlipRat::target_prob(int k, int l) const {
    Rat s = 0;
    for (const auto& atom : atoms_)
        if (atom.a[static_cast<size_t>(k) * d_ + l] != 0) s += atom.p;
    return s;
}

Rat FlipRat::sign_prob(int k, int l, int sign) const {
    Rat s = 0;
    for (const auto& atom : atoms_)
        if (atom.a[static_cast<size_t>(k) * d_ + l] == sign) s += atom.p;
    return s;
}

std::map<Rat, Rat> FlipRat::offset_law(int k, int l, int sign) const {
    std::map<Rat, Rat> law;
    Rat total = 0;
    for (const auto& atom : atoms_)
        if (atom.a[static_cast<size_t>(k) * d_ + l] == sign) {
            law[atom.b[static_cast<size_t>(k)]] += atom.p;
            total += atom.p;
        }
    if (total != 0)
        for (auto& [v, p] : law) p /= total;
    return law;
}

std::vector<Rat> FlipRat::mean_matrix() const {
    std::vector<Rat> m(static_cast<size_t>(d_) * d_, Rat(0));
    for (const auto& atom : atoms_)
        for (int k = 0; k < d_; ++k)
            for (int l = 0; l < d_; ++l)
                m[static_cast<size_t>(k) * d_ + l] +=
                    atom.p * atom.a[static_cast<size_t>(k) * d_ + l];
    return m;
}

Rat FlipRat::mean_matrix_norm() const {
    auto m = mean_matrix();
    Rat best = 0;
    for (int k = 0; k < d_; ++k) {
        Rat row = 0;
        for (int l = 0; l < d_; ++l) row += rat_abs(m[static_cast<size_t>(k) * d_ + l]);
        best = std::max(best, row);
    }
    return best;
}

std::vector<Rat> FlipRat::mean_offset() const {
    std::vector<Rat> m(static_cast<size_t>(d_), Rat(0));
    for (const auto& atom : atoms_)
        for (int k = 0; k < d_; ++k) m[static_cast<size_t>(k)] += atom.p * atom.b[static_cast<size_t>(k)];
    return m;
}

Rat FlipRat::max_offset_norm() const {
    Rat best = 0;
    for (const auto& atom : atoms_)
        for (const auto& v : atom.b) best = std::max(best, rat_abs(v));
    return best;
}

Rat FlipRat::min_atom_prob() const {
    Rat best = 1;
    for (const auto& atom : atoms_) best = std::min(best, atom.p);
    return best;
}

// ---- spec-RAT constructors -------------------------------------------------

namespace {

// Uniform law on {2m - (N-1) : 0 <= m <= N-1}, the coin of (Radioactivity).
std::vector<RowAtom> scatter_atoms(int coord, int sign, std::int64_t N, const Rat& total_prob,
                                   std::int64_t extra_shift) {
    std::vector<RowAtom> out;
    for (std::int64_t m = 0; m < N; ++m)
        out.push_back(RowAtom{coord, sign, Rat(2 * m - (N - 1) + extra_shift), total_prob / N});
    return out;
}

}  // namespace

FlipRat spec_rat(int n_k, int eps_prev, const Int& l0_prev, const Int& l1_prev) {
    if (n_k < 2) throw Error("digit must be >= 2");
    const int n = n_k;
    SpecInfo info{eps_prev == 0 ? 0 : 1, n};
    std::vector<std::vector<RowAtom>> rows(2);
    for (int i = 0; i < 2; ++i) {
        const Rat p = genfun::p_weight(n, i, l0_prev, l1_prev);
        auto& row = rows[static_cast<size_t>(i)];
        if (eps_prev == 0) {
            // a-row (x, 1-x); b-row x N_{n-1-i} + (1-x)(n-1-i); for n = 2 the
            // second coordinate keeps b = 0 per the trivial display.
            if (p != 0) {
                auto scatter = scatter_atoms(0, 1, n - 1 - i, p, 0);
                row.insert(row.end(), scatter.begin(), scatter.end());
            }
            const Rat off = (n == 2) ? Rat(1 - i) : Rat(n - 1 - i);
            row.push_back(RowAtom{1, 1, off, Rat(1) - p});
        } else {
            // sign coin y_{n-i} from the displays; offsets are 1 throughout
            const Rat q = genfun::q_weight(n - i);
            const int coord1_sign = ((n - 1 - i) % 2 == 0) ? 1 : -1;
            if (p != 0) {
                if (q != 0) row.push_back(RowAtom{0, 1, Rat(1), p * q});
                if (q != 1) row.push_back(RowAtom{0, -1, Rat(1), p * (Rat(1) - q)});
            }
            row.push_back(RowAtom{1, coord1_sign, Rat(1), Rat(1) - p});
        }
    }
    return FlipRat::from_rows(rows, info);
}

FlipRat alpha_step_rat(int n_k, int eps_prev, const Int& l0_prev, const Int& l1_prev) {
    if (n_k < 2) throw Error("digit must be >= 2");
    const int n = n_k;
    SpecInfo info{eps_prev == 0 ? 0 : 1, n};
    std::vector<std::vector<RowAtom>> rows(2);
    for (int i = 0; i < 2; ++i) {
        const Rat p = genfun::p_weight(n, i, l0_prev, l1_prev);
        auto& row = rows[static_cast<size_t>(i)];
        if (eps_prev == 0) {
            // offsets 2j-(n-1), j = 0..n-2-i: the shifted Fejer coin
            if (p != 0)
                for (std::int64_t j = 0; j <= n - 2 - i; ++j)
                    row.push_back(RowAtom{0, 1, Rat(2 * j - (n - 1)), p / (n - 1 - i)});
            row.push_back(RowAtom{1, 1, Rat(n - 2 * i - 1), Rat(1) - p});
        } else if ((n - 1 - i) % 2 == 0) {
            if (p != 0) {
                row.push_back(RowAtom{0, 1, Rat(1), p / 2});
                row.push_back(RowAtom{0, -1, Rat(1), p / 2});
            }
            row.push_back(RowAtom{1, 1, Rat(1), Rat(1) - p});
        } else {
            const Rat q = genfun::q_weight(n - i - 1);
            if (p != 0) {
                if (q != 0) row.push_back(RowAtom{0, 1, Rat(1), p * q});
                if (q != 1) row.push_back(RowAtom{0, -1, Rat(1), p * (Rat(1) - q)});
            }
            row.push_back(RowAtom{1, -1, Rat(1), Rat(1) - p});
        }
    }
    return FlipRat::from_rows(rows, info);
}

std::vector<FlipRat> alpha_rat_sequence(const mcf::DigitSequence& digits, int K) {
    std::vector<FlipRat> seq;
    seq.reserve(static_cast<size_t>(K));
    cocycle::RenormState state = cocycle::initial_state();
    for (int k = 1; k <= K; ++k) {
        const int n = digits.digit(k);
        FlipRat F = alpha_step_rat(n, state.eps0, state.l0, state.l1);
        if (k == 1) {
            // The temporal-law chain starts at the point mass on phi_1(0)=1;
            // the walk starts at 0, so the first step absorbs that unit.
            std::vector<Atom> shifted = F.atoms();
            for (auto& atom : shifted)
                for (auto& v : atom.b) v += 1;
            F = FlipRat(2, std::move(shifted), F.spec_info());
        }
        seq.push_back(std::move(F));
        state = cocycle::renorm_advance(state, n);
    }
    return seq;
}

// ---- composition -------------------------------------------------------------

FlipRat compose(const FlipRat& outer, const FlipRat& inner) {
    if (outer.dim() != inner.dim()) throw Error("dimension mismatch in compose");
    const int d = outer.dim();
    std::vector<Atom> atoms;
    atoms.reserve(outer.atoms().size() * inner.atoms().size());
    for (const auto& ao : outer.atoms())
        for (const auto& ai : inner.atoms()) {
            Atom prod;
            prod.a.assign(static_cast<size_t>(d) * d, 0);
            prod.b.assign(static_cast<size_t>(d), Rat(0));
            prod.p = ao.p * ai.p;
            for (int k = 0; k < d; ++k) {
                int l = nonzero_column(ao, d, k);
                int sign = ao.a[static_cast<size_t>(k) * d + l];
                int m = nonzero_column(ai, d, l);
                prod.a[static_cast<size_t>(k) * d + m] =
                    static_cast<std::int8_t>(sign * ai.a[static_cast<size_t>(l) * d + m]);
                prod.b[static_cast<size_t>(k)] =
                    Rat(sign) * ai.b[static_cast<size_t>(l)] + ao.b[static_cast<size_t>(k)];
            }
            atoms.push_back(std::move(prod));
        }
    return FlipRat(d, std::move(atoms));
}

// ---- characteristic matrices ---------------------------------------------------

RatCf rat_cf(const FlipRat& F) {
    if (!F.discrete()) throw Error("rat_cf needs integer offsets");
    const int d = F.dim();
    RatCf cf;
    cf.d = d;
    cf.entries.assign(static_cast<size_t>(4) * d * d, genfun::LaurentPoly{});
    for (const auto& atom : F.atoms()) {
        for (int k = 0; k < d; ++k) {
            const int l = nonzero_column(atom, d, k);
            const int delta = atom.a[static_cast<size_t>(k) * d + l];
            const std::int64_t off = numerator(atom.b[static_cast<size_t>(k)]).convert_to<std::int64_t>();
            for (int i = 0; i < 2; ++i) {
                const int eps = 1 - 2 * i;                  // row block sign
                const int j = (delta == 1) ? i : 1 - i;     // column block
                const int row = i * d + k, col = j * d + l;
                auto& entry = cf.entries[static_cast<size_t>(row) * 2 * d + col];
                const std::int64_t e = static_cast<std::int64_t>(eps) * off;
                entry.set(e, entry.at(e) + atom.p);
            }
        }
    }
    return cf;
}

std::vector<Rat> RatCf::base_matrix() const {
    std::vector<Rat> m(entries.size());
    for (size_t i = 0; i < entries.size(); ++i) m[i] = entries[i].eval_at_one();
    return m;
}

double RatCf::norm(double theta) const {
    double best = 0;
    for (int r = 0; r < 2 * d; ++r) {
        double row = 0;
        for (int c = 0; c < 2 * d; ++c) row += std::abs(at(r, c).eval(theta));
        best = std::max(best, row);
    }
    return best;
}

namespace {

// Determinant of a k x k matrix of Laurent polynomials by Leibniz expansion;
// fine for the 2d <= 6 sizes used here.
genfun::LaurentPoly poly_det(const std::vector<const genfun::LaurentPoly*>& m, int k) {
    if (k == 1) return *m[0];
    genfun::LaurentPoly det;
    std::vector<const genfun::LaurentPoly*> minor(static_cast<size_t>(k - 1) * (k - 1));
    for (int c = 0; c < k; ++c) {
        for (int r = 1; r < k; ++r) {
            int mc = 0;
            for (int cc = 0; cc < k; ++cc) {
                if (cc == c) continue;
                minor[static_cast<size_t>(r - 1) * (k - 1) + mc++] = m[static_cast<size_t>(r) * k + cc];
            }
        }
        genfun::LaurentPoly term = (*m[static_cast<size_t>(c)]) * poly_det(minor, k - 1);
        if (c % 2 == 1) term = genfun::LaurentPoly{} - term;
        det += term;
    }
    return det;
}

}  // namespace

std::vector<genfun::LaurentPoly> RatCf::char_poly_coefficients() const {
    const int n = 2 * d;
    // det(P - lambda I) = sum_j (-1)^j E_{n-j}(P) lambda^j
    std::vector<genfun::LaurentPoly> coef(static_cast<size_t>(n) + 1);
    coef[static_cast<size_t>(n)] =
        genfun::LaurentPoly::constant(n % 2 == 0 ? Rat(1) : Rat(-1));
    std::vector<int> subset;
    // iterate over nonempty subsets of rows/cols for principal minors
    for (int mask = 1; mask < (1 << n); ++mask) {
        subset.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) subset.push_back(i);
        const int m = static_cast<int>(subset.size());
        std::vector<const genfun::LaurentPoly*> sub(static_cast<size_t>(m) * m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                sub[static_cast<size_t>(r) * m + c] = &at(subset[static_cast<size_t>(r)],
                                                          subset[static_cast<size_t>(c)]);
        genfun::LaurentPoly minor_det = poly_det(sub, m);
        const int j = n - m;  // lambda power this minor feeds
        if (j % 2 == 1) minor_det = genfun::LaurentPoly{} - minor_det;
        coef[static_cast<size_t>(j)] += minor_det;
    }
    return coef;
}

double cf_norm(const FlipRat& F, double theta) {
    const int d = F.dim();
    double best = 0;
    for (int k = 0; k < d; ++k) {
        // sum over (l, sign) groups of |sum_atoms p e^{i theta b_k}|
        std::map<std::pair<int, int>, std::complex<double>> groups;
        for (const auto& atom : F.atoms()) {
            const int l = nonzero_column(atom, d, k);
            const int sign = atom.a[static_cast<size_t>(k) * d + l];
            groups[{l, sign}] += to_double(atom.p) *
                                 std::polar(1.0, theta * to_double(atom.b[static_cast<size_t>(k)]));
        }
        double row = 0;
        for (const auto& [key, z] : groups) row += std::abs(z);
        best = std::max(best, row);
    }
    return best;
}

// ---- predicates ----------------------------------------------------------------

namespace {

// kappa contribution of one row: sum over (l, sign) of P * Var(b | a_{k,l}=sign).
Rat row_kappa(const FlipRat& F, int k) {
    const int d = F.dim();
    Rat total = 0;
    for (int l = 0; l < d; ++l)
        for (int sign : {1, -1}) {
            Rat mass = 0, m1 = 0, m2 = 0;
            for (const auto& atom : F.atoms())
                if (atom.a[static_cast<size_t>(k) * d + l] == sign) {
                    mass += atom.p;
                    m1 += atom.p * atom.b[static_cast<size_t>(k)];
                    m2 += atom.p * atom.b[static_cast<size_t>(k)] * atom.b[static_cast<size_t>(k)];
                }
            if (mass != 0) total += m2 - m1 * m1 / mass;
        }
    return total;
}

}  // namespace

Predicates predicates(const FlipRat& F) {
    const int d = F.dim();
    Predicates out;
    out.irreducible = true;
    out.balanced = true;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            if (F.target_prob(k, l) == 0) out.irreducible = false;
            if (F.sign_prob(k, l, 1) == 0 || F.sign_prob(k, l, -1) == 0) out.balanced = false;
        }
    out.mean_contractive = F.mean_matrix_norm() < 1;

    out.kappa = Rat(1);
    bool first = true;
    for (int k = 0; k < d; ++k) {
        Rat rk = row_kappa(F, k);
        if (rk > 0) out.adapted_rows.push_back(k);
        if (first || rk < out.kappa) out.kappa = rk;
        first = false;
    }
    out.adapted = static_cast<int>(out.adapted_rows.size()) == d;
    out.partially_adapted = !out.adapted_rows.empty();

    if (out.balanced && !(out.irreducible && out.mean_contractive))
        throw Error("internal: balance must imply irreducibility and mean contractivity");
    if (out.adapted != (out.kappa > 0))
        throw Error("internal: kappa criterion disagrees with row adaptedness");

    out.strongly_adapted = out.adapted && periodicity_group(F).kind == PeriodicityGroup::Kind::trivial;
    return out;
}

bool PeriodicityGroup::contains(const Rat& theta_over_two_pi) const {
    switch (kind) {
        case Kind::full_line: return true;
        case Kind::trivial: return denominator(theta_over_two_pi) == 1;
        case Kind::lattice: {
            Rat scaled = theta_over_two_pi * divisor;
            return denominator(scaled) == 1;
        }
        case Kind::union_of_lattices: {
            for (const auto& dr : row_divisors) {
                if (dr == 0) return true;
                if (denominator(Rat(theta_over_two_pi * dr)) == 1) return true;
            }
            return false;
        }
    }
    return false;
}

PeriodicityGroup periodicity_group(const FlipRat& F) {
    const int d = F.dim();
    PeriodicityGroup out;
    out.row_divisors.reserve(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) {
        // Gamma_row = intersection over conditionals of Gamma_b = (2pi/delta)Z
        // with delta the gcd of the conditional's offset differences.
        bool any_nonconstant = false;
        Rat divisor = 0;  // gcd accumulates; 0 = every conditional constant
        for (int l = 0; l < d; ++l)
            for (int sign : {1, -1}) {
                auto law = F.offset_law(k, l, sign);
                if (law.empty()) continue;
                Rat base = law.begin()->first, delta = 0;
                for (const auto& [v, p] : law) delta = rat_gcd(delta, v - base);
                if (delta != 0) {
                    any_nonconstant = true;
                    // intersecting lattices multiplies the divisor constraint:
                    // t*delta1 in Z and t*delta2 in Z <=> t*gcd' in Z with
                    // 1/gcd' = lcm(1/delta1, 1/delta2)
                    divisor = (divisor == 0) ? delta
                                             : Rat(1) / rat_lcm(Rat(1) / divisor, Rat(1) / delta);
                }
            }
        out.row_divisors.push_back(any_nonconstant ? divisor : Rat(0));
    }

    bool any_full = false;
    for (const auto& dr : out.row_divisors)
        if (dr == 0) any_full = true;
    if (any_full) {
        out.kind = PeriodicityGroup::Kind::full_line;
        out.divisor = 0;
        out.common_divisor = 0;
        return out;
    }

    Rat common = 0;
    for (const auto& dr : out.row_divisors) common = rat_gcd(common, dr);
    out.common_divisor = common;

    // the union collapses to a lattice iff one row divisor is a multiple of all
    Rat best = 0;
    for (const auto& dr : out.row_divisors) best = std::max(best, dr);
    bool collapses = true;
    for (const auto& dr : out.row_divisors)
        if (denominator(Rat(best / dr)) != 1) collapses = false;
    if (!collapses) {
        out.kind = PeriodicityGroup::Kind::union_of_lattices;
        out.divisor = 0;
        return out;
    }
    out.divisor = best;
    out.kind = (best <= 1) ? PeriodicityGroup::Kind::trivial : PeriodicityGroup::Kind::lattice;
    return out;
}

// ---- centering, grouping, compactness ------------------------------------------

CenteredSequence center(const std::vector<FlipRat>& seq) {
    CenteredSequence out;
    out.rats.reserve(seq.size());
    out.means.reserve(seq.size());
    if (seq.empty()) return out;
    const int d = seq.front().dim();
    std::vector<Rat> c_prev(static_cast<size_t>(d), Rat(0));
    for (const auto& F : seq) {
        if (F.dim() != d) throw Error("dimension mismatch in center");
        auto ea = F.mean_matrix();
        auto eb = F.mean_offset();
        std::vector<Rat> c(static_cast<size_t>(d), Rat(0));
        for (int k = 0; k < d; ++k) {
            c[static_cast<size_t>(k)] = eb[static_cast<size_t>(k)];
            for (int l = 0; l < d; ++l)
                c[static_cast<size_t>(k)] += ea[static_cast<size_t>(k) * d + l] * c_prev[static_cast<size_t>(l)];
        }
        std::vector<Atom> atoms = F.atoms();
        for (auto& atom : atoms)
            for (int k = 0; k < d; ++k) {
                Rat adj = atom.b[static_cast<size_t>(k)] - c[static_cast<size_t>(k)];
                const int l = nonzero_column(atom, d, k);
                adj += Rat(atom.a[static_cast<size_t>(k) * d + l]) * c_prev[static_cast<size_t>(l)];
                atom.b[static_cast<size_t>(k)] = adj;
            }
        out.rats.emplace_back(d, std::move(atoms), F.spec_info());
        out.means.push_back(c);
        c_prev = std::move(c);
    }
    return out;
}

std::vector<FlipRat> group(const std::vector<FlipRat>& seq, const mcf::CanonicalSubsequence& nu) {
    std::vector<FlipRat> out;
    std::int64_t lo = 0;
    for (std::int64_t hi : nu.indices) {
        if (hi > static_cast<std::int64_t>(seq.size()))
            throw Error("sequence shorter than the subsequence");
        FlipRat G = seq[static_cast<size_t>(lo)];
        for (std::int64_t j = lo + 1; j < hi; ++j) G = compose(seq[static_cast<size_t>(j)], G);
        auto pred = predicates(G);
        if (!pred.adapted)
            throw GroupingAssertionFailed("grouped RAT over (" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "] is not adapted");
        if (!pred.mean_contractive)
            throw GroupingAssertionFailed("grouped RAT over (" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "] is not mean contractive");
        out.push_back(std::move(G));
        lo = hi;
    }
    return out;
}

std::vector<Rat> length_ratio_trajectory(const mcf::DigitSequence& digits, int K) {
    std::vector<Rat> out;
    out.reserve(static_cast<size_t>(K) + 1);
    cocycle::RenormState st = cocycle::initial_state();
    out.push_back(Rat(st.l1, st.l0));
    for (int k = 1; k <= K; ++k) {
        st = cocycle::renorm_advance(st, digits.digit(k));
        out.push_back(Rat(st.l1, st.l0));
    }
    return out;
}

CompactnessReport compactness_report(const std::vector<FlipRat>& collection) {
    if (collection.empty()) throw Error("empty collection");
    CompactnessReport rep;
    rep.min_atom = 1;
    rep.max_b_inf = 0;
    for (const auto& F : collection) {
        rep.min_atom = std::min(rep.min_atom, F.min_atom_prob());
        rep.max_b_inf = std::max(rep.max_b_inf, F.max_offset_norm());
    }
    rep.r_min = 0;
    return rep;
}

CompactnessReport compactness_report(const std::vector<FlipRat>& collection,
                                     const mcf::DigitSequence& digits, int levels) {
    CompactnessReport rep = compactness_report(collection);
    rep.r_trajectory = length_ratio_trajectory(digits, levels);
    rep.r_min = rep.r_trajectory.front();
    for (const auto& r : rep.r_trajectory) rep.r_min = std::min(rep.r_min, r);
    return rep;
}

// ---- exact laws -----------------------------------------------------------------

Rat ArwDistribution::mass() const {
    Rat s = 0;
    for (const auto& [x, p] : law) s += p;
    return s;
}

std::vector<Rat> ArwDistribution::mean(int d) const {
    std::vector<Rat> m(static_cast<size_t>(d), Rat(0));
    for (const auto& [x, p] : law)
        for (int k = 0; k < d; ++k) m[static_cast<size_t>(k)] += p * x[static_cast<size_t>(k)];
    return m;
}

Rat ArwDistribution::second_moment(int k) const {
    Rat s = 0;
    for (const auto& [x, p] : law) s += p * x[static_cast<size_t>(k)] * x[static_cast<size_t>(k)];
    return s;
}

std::map<Rat, Rat> ArwDistribution::marginal(int k) const {
    std::map<Rat, Rat> out;
    for (const auto& [x, p] : law) out[x[static_cast<size_t>(k)]] += p;
    return out;
}

genfun::TemporalLaw ArwDistribution::marginal_law(int k) const {
    genfun::TemporalLaw law_out;
    law_out.level = step;
    law_out.flavor = k;
    for (const auto& [v, p] : marginal(k)) {
        if (denominator(v) != 1) throw Error("marginal support is not integral");
        law_out.probabilities[numerator(v).convert_to<std::int64_t>()] = p;
    }
    return law_out;
}

ArwDistribution exact_arw_law(const std::vector<FlipRat>& seq, int n, std::int64_t state_cap) {
    if (n < 0) throw Error("n must be >= 0");
    if (seq.empty() && n > 0) throw Error("empty RAT sequence");
    const int d = seq.empty() ? 1 : seq.front().dim();
    ArwDistribution dist;
    dist.law[std::vector<Rat>(static_cast<size_t>(d), Rat(0))] = 1;
    for (int step = 0; step < n; ++step) {
        const FlipRat& F = seq[static_cast<size_t>(step % static_cast<int>(seq.size()))];
        if (static_cast<std::int64_t>(dist.law.size()) *
                static_cast<std::int64_t>(F.atoms().size()) >
            state_cap)
            throw StateBlowup("exact law would exceed " + std::to_string(state_cap) +
                              " states at step " + std::to_string(step + 1));
        std::map<std::vector<Rat>, Rat> next;
        for (const auto& [x, p] : dist.law)
            for (const auto& atom : F.atoms()) {
                std::vector<Rat> y(static_cast<size_t>(d));
                for (int k = 0; k < d; ++k) {
                    const int l = nonzero_column(atom, d, k);
                    y[static_cast<size_t>(k)] =
                        Rat(atom.a[static_cast<size_t>(k) * d + l]) * x[static_cast<size_t>(l)] +
                        atom.b[static_cast<size_t>(k)];
                }
                next[y] += p * atom.p;
            }
        dist.law = std::move(next);
        dist.step = step + 1;
    }
    return dist;
}

// ---- simulation -----------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct CompiledRat {
    struct CompiledAtom {
        std::array<int, 8> coord;
        std::array<int, 8> sign;
        std::array<std::int64_t, 8> off;
        double cum;
    };
    int d;
    std::vector<CompiledAtom> atoms;
};

CompiledRat compile(const FlipRat& F) {
    if (!F.discrete()) throw Error("simulate needs integer offsets");
    const int d = F.dim();
    if (d > 8) throw Error("simulate supports d <= 8");
    CompiledRat out;
    out.d = d;
    double cum = 0;
    for (const auto& atom : F.atoms()) {
        CompiledRat::CompiledAtom ca{};
        for (int k = 0; k < d; ++k) {
            const int l = nonzero_column(atom, d, k);
            ca.coord[static_cast<size_t>(k)] = l;
            ca.sign[static_cast<size_t>(k)] = atom.a[static_cast<size_t>(k) * d + l];
            ca.off[static_cast<size_t>(k)] =
                numerator(atom.b[static_cast<size_t>(k)]).convert_to<std::int64_t>();
        }
        cum += to_double(atom.p);
        ca.cum = cum;
        out.atoms.push_back(ca);
    }
    out.atoms.back().cum = 1.0 + 1e-9;  // guard against rounding at the top
    return out;
}

}  // namespace

EmpiricalLaw simulate(const std::vector<FlipRat>& seq, int n, std::uint64_t trials,
                      std::uint64_t seed) {
    if (seq.empty()) throw Error("empty RAT sequence");
    if (trials < 1) throw Error("trials must be >= 1");
    const int d = seq.front().dim();
    std::vector<CompiledRat> compiled;
    compiled.reserve(seq.size());
    for (const auto& F : seq) compiled.push_back(compile(F));

    std::uint64_t sm = seed;
    std::mt19937_64 rng(splitmix64(sm));
    EmpiricalLaw out;
    out.trials = trials;
    std::vector<std::int64_t> x(static_cast<size_t>(d));
    std::vector<std::int64_t> y(static_cast<size_t>(d));
    constexpr double kInv = 1.0 / 18446744073709551616.0;  // 2^-64
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::fill(x.begin(), x.end(), 0);
        for (int step = 0; step < n; ++step) {
            const CompiledRat& cr = compiled[static_cast<size_t>(step) % compiled.size()];
            const double u = static_cast<double>(rng()) * kInv;
            size_t idx = 0;
            while (u > cr.atoms[idx].cum) ++idx;
            const auto& ca = cr.atoms[idx];
            for (int k = 0; k < d; ++k)
                y[static_cast<size_t>(k)] =
                    ca.sign[static_cast<size_t>(k)] * x[static_cast<size_t>(ca.coord[static_cast<size_t>(k)])] +
                    ca.off[static_cast<size_t>(k)];
            std::swap(x, y);
        }
        ++out.counts[x];
    }
    return out;
}

std::map<std::int64_t, std::uint64_t> EmpiricalLaw::marginal(int k) const {
    std::map<std::int64_t, std::uint64_t> out;
    for (const auto& [x, c] : counts) out[x[static_cast<size_t>(k)]] += c;
    return out;
}

// ---- variance -------------------------------------------------------------------

namespace {

// E(b_L * a_{L,J}) per row: the mixed moment matrix of one RAT.
std::vector<Rat> mixed_moment(const FlipRat& F) {
    const int d = F.dim();
    std::vector<Rat> m(static_cast<size_t>(d) * d, Rat(0));
    for (const auto& atom : F.atoms())
        for (int L = 0; L < d; ++L) {
            const int J = nonzero_column(atom, d, L);
            m[static_cast<size_t>(L) * d + J] += atom.p * atom.b[static_cast<size_t>(L)] *
                                                 atom.a[static_cast<size_t>(L) * d + J];
        }
    return m;
}

std::vector<Rat> target_matrix(const FlipRat& F) {
    const int d = F.dim();
    std::vector<Rat> m(static_cast<size_t>(d) * d, Rat(0));
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) m[static_cast<size_t>(k) * d + l] = F.target_prob(k, l);
    return m;
}

std::vector<Rat> mat_mul(const std::vector<Rat>& A, const std::vector<Rat>& B, int d) {
    std::vector<Rat> C(static_cast<size_t>(d) * d, Rat(0));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            if (A[static_cast<size_t>(i) * d + k] == 0) continue;
            for (int j = 0; j < d; ++j)
                C[static_cast<size_t>(i) * d + j] +=
                    A[static_cast<size_t>(i) * d + k] * B[static_cast<size_t>(k) * d + j];
        }
    return C;
}

}  // namespace

VarianceCheck variance_check(const std::vector<FlipRat>& centered_seq, int n) {
    if (n < 1 || n > static_cast<int>(centered_seq.size()))
        throw Error("need 1 <= n <= sequence length");
    const int d = centered_seq.front().dim();
    for (int m = 0; m < n; ++m) {
        auto eb = centered_seq[static_cast<size_t>(m)].mean_offset();
        for (const auto& v : eb)
            if (v != 0) throw CenteringViolation("E(b) != 0 at step " + std::to_string(m + 1));
    }

    VarianceCheck out;
    // sandwich bounds from per-step offset second moments
    Rat lo = 0, hi = 0;
    for (int m = 0; m < n; ++m) {
        const auto& F = centered_seq[static_cast<size_t>(m)];
        Rat step_min, step_max;
        for (int L = 0; L < d; ++L) {
            Rat e2 = 0;
            for (const auto& atom : F.atoms())
                e2 += atom.p * atom.b[static_cast<size_t>(L)] * atom.b[static_cast<size_t>(L)];
            if (L == 0) {
                step_min = e2;
                step_max = e2;
            } else {
                step_min = std::min(step_min, e2);
                step_max = std::max(step_max, e2);
            }
        }
        lo += step_min;
        hi += step_max;
    }

    auto law = exact_arw_law(centered_seq, n);
    auto mean = law.mean(d);
    for (const auto& v : mean)
        if (v != 0) throw CenteringViolation("exact law mean nonzero");
    out.sandwich_holds = true;
    for (int k = 0; k < d; ++k) {
        Rat obs = law.second_moment(k);
        out.lower.push_back(lo);
        out.observed.push_back(obs);
        out.upper.push_back(hi);
        if (obs < lo || obs > hi) out.sandwich_holds = false;
    }

    // orthogonality of Y^(n,nu)_K = (a^n_{nu+1} b^(nu))_K across nu
    out.orthogonal = true;
    for (int K = 0; K < d && out.orthogonal; ++K) {
        for (int mu = 2; mu <= n && out.orthogonal; ++mu) {
            // pi(L) = P(chain K -> L over steps n..mu+1)
            std::vector<Rat> pi(static_cast<size_t>(d), Rat(0));
            pi[static_cast<size_t>(K)] = 1;
            for (int t = n; t > mu; --t) {
                auto T = target_matrix(centered_seq[static_cast<size_t>(t - 1)]);
                std::vector<Rat> next(static_cast<size_t>(d), Rat(0));
                for (int L = 0; L < d; ++L)
                    for (int M = 0; M < d; ++M)
                        next[static_cast<size_t>(M)] += pi[static_cast<size_t>(L)] *
                                                        T[static_cast<size_t>(L) * d + M];
                pi = std::move(next);
            }
            // w = pi * mixed_moment(F_mu): signed weights after step mu
            auto mm = mixed_moment(centered_seq[static_cast<size_t>(mu - 1)]);
            std::vector<Rat> w(static_cast<size_t>(d), Rat(0));
            for (int L = 0; L < d; ++L)
                for (int J = 0; J < d; ++J)
                    w[static_cast<size_t>(J)] +=
                        pi[static_cast<size_t>(L)] * mm[static_cast<size_t>(L) * d + J];
            for (int nu = mu - 1; nu >= 1; --nu) {
                // cross moment E(Y^{(n,nu)}_K Y^{(n,mu)}_K) = w . E(b^(nu))
                const auto& Fnu = centered_seq[static_cast<size_t>(nu - 1)];
                auto eb = Fnu.mean_offset();
                Rat cross = 0;
                for (int M = 0; M < d; ++M)
                    cross += w[static_cast<size_t>(M)] * eb[static_cast<size_t>(M)];
                if (cross != 0) {
                    out.orthogonal = false;
                    break;
                }
                // push w through E(a^{(nu)}) for the next smaller nu
                auto ea = Fnu.mean_matrix();
                std::vector<Rat> next(static_cast<size_t>(d), Rat(0));
                for (int L = 0; L < d; ++L)
                    for (int M = 0; M < d; ++M)
                        next[static_cast<size_t>(M)] +=
                            w[static_cast<size_t>(L)] * ea[static_cast<size_t>(L) * d + M];
                w = std::move(next);
            }
        }
    }
    return out;
}

// ---- spectral -------------------------------------------------------------------

namespace {

Eigen::MatrixXcd cf_matrix(const FlipRat& F, double theta) {
    const int d = F.dim();
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    for (const auto& atom : F.atoms())
        for (int k = 0; k < d; ++k) {
            const int l = nonzero_column(atom, d, k);
            const int delta = atom.a[static_cast<size_t>(k) * d + l];
            const double off = to_double(atom.b[static_cast<size_t>(k)]);
            for (int i = 0; i < 2; ++i) {
                const int eps = 1 - 2 * i;
                const int j = (delta == 1) ? i : 1 - i;
                P(i * d + k, j * d + l) +=
                    to_double(atom.p) * std::polar(1.0, theta * eps * off);
            }
        }
    return P;
}

}  // namespace

std::complex<double> dominant_eigenvalue(const FlipRat& F, double theta) {
    Eigen::MatrixXcd P = cf_matrix(F, theta);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(P, false);
    const auto& ev = solver.eigenvalues();
    int best = 0;
    for (int i = 1; i < ev.size(); ++i) {
        if (std::abs(ev(i)) > std::abs(ev(best)) + 1e-15 ||
            (std::abs(std::abs(ev(i)) - std::abs(ev(best))) <= 1e-15 &&
             ev(i).real() > ev(best).real()))
            best = i;
    }
    return ev(best);
}

Spectral spectral(const FlipRat& F, double h) {
    const int d = F.dim();
    const int n = 2 * d;

    // aperiodicity: P(0)^N positive for some N <= 2 n^2
    auto cf = rat_cf(F);
    auto P0 = cf.base_matrix();
    std::vector<bool> reach(static_cast<size_t>(n) * n);
    for (int i = 0; i < n * n; ++i) reach[static_cast<size_t>(i)] = P0[static_cast<size_t>(i)] > 0;
    bool aperiodic = false;
    std::vector<bool> cur = reach;
    for (int power = 1; power <= 2 * n * n && !aperiodic; ++power) {
        bool all = true;
        for (int i = 0; i < n * n; ++i) all = all && cur[static_cast<size_t>(i)];
        if (all) {
            aperiodic = true;
            break;
        }
        std::vector<bool> next(static_cast<size_t>(n) * n, false);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (!cur[static_cast<size_t>(i) * n + k]) continue;
                for (int j = 0; j < n; ++j)
                    if (reach[static_cast<size_t>(k) * n + j]) next[static_cast<size_t>(i) * n + j] = true;
            }
        cur = std::move(next);
    }
    if (!aperiodic) throw NotAperiodic("P_F(0) has no positive power");

    Spectral out;
    for (int j = 0; j <= 8; ++j) {
        double theta = h * static_cast<double>(j) / 4.0;
        out.lambda_samples.emplace_back(theta, dominant_eigenvalue(F, theta));
    }
    auto lam = [&](double theta) {
        auto z = dominant_eigenvalue(F, theta);
        return z;
    };
    auto gap_check = [&](double theta) {
        Eigen::MatrixXcd P = cf_matrix(F, theta);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(P, false);
        std::vector<double> mags;
        for (int i = 0; i < solver.eigenvalues().size(); ++i)
            mags.push_back(std::abs(solver.eigenvalues()(i)));
        std::sort(mags.rbegin(), mags.rend());
        if (mags.size() > 1 && mags[0] - mags[1] < 1e-9)
            throw EigenGapTooSmall("eigenvalue gap below 1e-9 at theta = " + std::to_string(theta));
    };
    gap_check(h);
    gap_check(h / 2);
    // lambda(-t) = conj(lambda(t)); second difference uses the real part
    auto second_diff = [&](double t) { return 2.0 * (1.0 - lam(t).real()) / (t * t); };
    const double g1 = second_diff(h), g2 = second_diff(h / 2);
    out.gamma = (4.0 * g2 - g1) / 3.0;

    Predicates pred = predicates(F);
    out.kappa = pred.kappa;
    return out;
}

}  // namespace skewrat::rat
