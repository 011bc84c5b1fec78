#include "skewrat/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skewrat/errors.hpp"

namespace skewrat::genfun {

LaurentPoly LaurentPoly::constant(const Rat& c) { return monomial(0, c); }

LaurentPoly LaurentPoly::monomial(std::int64_t e, const Rat& c) {
    LaurentPoly p;
    if (c != 0) p.coef_[e] = c;
    return p;
}

LaurentPoly LaurentPoly::fejer(std::int64_t N) {
    LaurentPoly p;
    if (N <= 0) return p;
    Rat w(1, N);
    for (std::int64_t k = 0; k < N; ++k) p.coef_[k] = w;
    return p;
}

LaurentPoly LaurentPoly::fejer_squared_arg(std::int64_t N) {
    LaurentPoly p;
    if (N <= 0) return p;
    Rat w(1, N);
    for (std::int64_t k = 0; k < N; ++k) p.coef_[2 * k] = w;
    return p;
}

LaurentPoly LaurentPoly::from_counts(const std::map<std::int64_t, Int>& counts) {
    LaurentPoly p;
    for (const auto& [e, c] : counts)
        if (c != 0) p.coef_[e] = Rat(c);
    return p;
}

Rat LaurentPoly::at(std::int64_t e) const {
    auto it = coef_.find(e);
    return it == coef_.end() ? Rat(0) : it->second;
}

void LaurentPoly::set(std::int64_t e, const Rat& c) {
    if (c == 0)
        coef_.erase(e);
    else
        coef_[e] = c;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.coef_) {
        Rat v = at(e) + c;
        set(e, v);
    }
    return *this;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
    LaurentPoly out = *this;
    for (const auto& [e, c] : o.coef_) out.set(e, out.at(e) - c);
    return out;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly out;
    for (const auto& [e1, c1] : coef_)
        for (const auto& [e2, c2] : o.coef_) {
            std::int64_t e = e1 + e2;
            Rat v = out.at(e) + c1 * c2;
            out.set(e, v);
        }
    return out;
}

LaurentPoly LaurentPoly::scaled(const Rat& c) const {
    LaurentPoly out;
    if (c == 0) return out;
    for (const auto& [e, v] : coef_) out.coef_[e] = v * c;
    return out;
}

LaurentPoly LaurentPoly::shifted(std::int64_t m) const {
    LaurentPoly out;
    for (const auto& [e, v] : coef_) out.coef_[e + m] = v;
    return out;
}

LaurentPoly LaurentPoly::reflected() const {
    LaurentPoly out;
    for (const auto& [e, v] : coef_) out.coef_[-e] = v;
    return out;
}

std::complex<double> LaurentPoly::eval(double theta) const {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [e, v] : coef_)
        acc += to_double(v) * std::polar(1.0, theta * static_cast<double>(e));
    return acc;
}

Rat LaurentPoly::eval_at_one() const {
    Rat s = 0;
    for (const auto& [e, v] : coef_) s += v;
    return s;
}

std::int64_t LaurentPoly::min_exp() const { return coef_.empty() ? 0 : coef_.begin()->first; }
std::int64_t LaurentPoly::max_exp() const { return coef_.empty() ? 0 : coef_.rbegin()->first; }
std::int64_t LaurentPoly::span() const { return coef_.empty() ? 0 : max_exp() - min_exp(); }

Rat TemporalLaw::mass() const {
    Rat s = 0;
    for (const auto& [nu, p] : probabilities) s += p;
    return s;
}

Rat TemporalLaw::mean() const {
    Rat s = 0;
    for (const auto& [nu, p] : probabilities) s += Rat(nu) * p;
    return s;
}

Rat TemporalLaw::variance() const {
    Rat m = mean(), s = 0;
    for (const auto& [nu, p] : probabilities) s += (Rat(nu) - m) * (Rat(nu) - m) * p;
    return s;
}

LaurentPoly TemporalLaw::poly() const {
    LaurentPoly p;
    for (const auto& [nu, prob] : probabilities) p.set(nu, prob);
    return p;
}

TemporalLaw temporal_law(const visits::VisitDistribution& V) {
    if (V.kind != visits::VisitDistribution::Kind::simplified)
        throw Error("temporal_law needs a simplified distribution");
    Int l = V.mass();
    if (l <= 0) throw Error("empty visit distribution");
    TemporalLaw law;
    law.level = V.level;
    law.flavor = V.flavor;
    for (const auto& [nu, c] : V.counts) law.probabilities[nu] = Rat(c, l);
    if (law.mass() != 1) throw MassMismatch("temporal law does not sum to 1");
    return law;
}

Rat q_weight(std::int64_t N) {
    if (N <= 0) return Rat(0);
    return Rat(1) - Rat(N / 2, N);
}

Rat p_weight(int n_next, int i, const Int& l0_prev, const Int& l1_prev) {
    Int l_next = (n_next - 1 - i) * l0_prev + l1_prev;
    return Rat((n_next - 1 - i) * l0_prev, l_next);
}

LaurentPoly phi_step(const LaurentPoly& f0, const LaurentPoly& f1, int n_next, int eps, int i,
                     const Int& l0_prev, const Int& l1_prev) {
    if (n_next < 2) throw Error("digit must be >= 2");
    const int n = n_next;
    const Rat p = p_weight(n, i, l0_prev, l1_prev);
    LaurentPoly out;
    if (eps == 0) {
        if (p != 0)
            out += (f0 * LaurentPoly::fejer_squared_arg(n - 1 - i))
                       .shifted(-(n - 1))
                       .scaled(p);
        out += f1.shifted(n - 2 * i - 1).scaled(Rat(1) - p);
    } else if ((n - 1 - i) % 2 == 0) {
        if (p != 0) {
            out += f0.shifted(1).scaled(p / 2);
            out += f0.reflected().shifted(1).scaled(p / 2);
        }
        out += f1.shifted(1).scaled(Rat(1) - p);
    } else {
        const Rat q = q_weight(n - i - 1);
        if (p != 0) {
            out += f0.shifted(1).scaled(p * q);
            out += f0.reflected().shifted(1).scaled(p * (Rat(1) - q));
        }
        out += f1.reflected().shifted(1).scaled(Rat(1) - p);
    }
    if (f0.eval_at_one() == 1 && f1.eval_at_one() == 1 && out.eval_at_one() != 1)
        throw MassMismatch("phi_step lost probability mass");
    return out;
}

Rat l2_integral(const LaurentPoly& p) {
    Rat s = 0;
    for (const auto& [e, c] : p.coefficients()) s += c * c;
    return s;
}

std::int64_t default_l1_grid(const LaurentPoly& p) {
    return std::max<std::int64_t>(4096, 16 * p.span());
}

L1Result l1_integral(const LaurentPoly& p, std::int64_t grid) {
    if (p.empty()) return {0.0, 0.0};
    if (p.span() > 0 && grid < 8 * p.span())
        throw GridTooCoarse("grid " + std::to_string(grid) + " < 8 * span " +
                            std::to_string(p.span()));
    if (p.span() == 0) {
        // |c Z^e| is constant on the circle
        double c = std::abs(to_double(p.coefficients().begin()->second));
        return {c, 0.0};
    }
    double lipschitz = 0;  // |d/dtheta p| <= sum |e||c_e|
    for (const auto& [e, c] : p.coefficients())
        lipschitz += std::abs(static_cast<double>(e)) * std::abs(to_double(c));

    const double h = 2.0 * M_PI / static_cast<double>(grid);
    double acc = 0;
    for (std::int64_t j = 0; j < grid; ++j) acc += std::abs(p.eval(h * static_cast<double>(j)));
    double value = acc / static_cast<double>(grid);
    double bound = M_PI * lipschitz / static_cast<double>(grid);
    return {value, bound};
}

VisitLemmaReport visit_lemma_report(const visits::Frame& frame, const Rat& psi_l0_integral,
                                    const Int& psi_l1_sup) {
    VisitLemmaReport rep;
    rep.psi_l0_integral = psi_l0_integral;
    rep.psi_l1_sup = psi_l1_sup;

    // (4.1'):  int Psi_{l_k(0)} >= (1/4 l_k(0)) int |U_hat^(1)|^2
    Rat u1_sq = 0;
    for (const auto& [nu, c] : frame.U1.counts) u1_sq += Rat(c) * Rat(c);
    rep.rhs41 = u1_sq / (4 * Rat(frame.state.l0));
    rep.holds41 = psi_l0_integral >= rep.rhs41;

    // (4.2'):  sup Psi_{l_k(1)} <= 2 int |U_hat^(i)|, both coordinate variants
    for (int i = 0; i < 2; ++i) {
        const auto& U = (i == 0) ? frame.U0 : frame.U1;
        LaurentPoly u = LaurentPoly::from_counts(U.counts);
        rep.u_l1[i] = l1_integral(u, default_l1_grid(u));
        // certified: the inequality is claimed only against the lower bound
        rep.holds42[i] =
            to_double(Rat(psi_l1_sup)) <= 2.0 * (rep.u_l1[i].value - rep.u_l1[i].error_bound);
    }
    return rep;
}

}  // namespace skewrat::genfun
