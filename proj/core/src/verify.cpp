#include "skewrat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skewrat/analysis.hpp"
#include "skewrat/cocycle.hpp"
#include "skewrat/errors.hpp"
#include "skewrat/genfun.hpp"
#include "skewrat/visits.hpp"

namespace skewrat::verify {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::int64_t rand_below(std::uint64_t& state, std::int64_t n) {
    return static_cast<std::int64_t>(splitmix64(state) % static_cast<std::uint64_t>(n));
}

void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
         const std::string& detail = "") {
    out.push_back(CheckResult{name, pass, detail});
}

// Orbit positions of j*alpha for alpha = p/(2q); phi = +1 iff pos < q.
struct OrbitStream {
    std::uint64_t D, q, step, pos = 0;
    explicit OrbitStream(const mcf::DigitSequence& digits, std::int64_t L) {
        int order = mcf::order_for_denominator(digits, Int(2) * L + 4, 5);
        auto [p, qq] = mcf::convergent(digits, order);
        q = qq.convert_to<std::uint64_t>();
        D = 2 * q;
        step = mod_floor(p, Int(D)).convert_to<std::uint64_t>();
    }
    int next_jump() {  // phi({j alpha}) at the current j, then j += 1
        int v = (pos < q) ? 1 : -1;
        pos += step;
        if (pos >= D) pos -= D;
        return v;
    }
};

// psi_n over the same convergent: 1_[1-beta,1)({(n-1) beta}).
struct PsiStream {
    std::uint64_t q, p, pos = 0;
    explicit PsiStream(const mcf::DigitSequence& digits, std::int64_t L) {
        int order = mcf::order_for_denominator(digits, Int(2) * L + 4, 5);
        auto [pp, qq] = mcf::convergent(digits, order);
        q = qq.convert_to<std::uint64_t>();
        p = mod_floor(pp, qq).convert_to<std::uint64_t>();
    }
    int next_bit() {
        int v = (pos + p >= q) ? 1 : 0;
        pos += p;
        if (pos >= q) pos -= q;
        return v;
    }
};

std::vector<CheckResult> suite_thm21(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    int k = 0;
    while (true) {
        cocycle::RenormState st = cocycle::renorm_state(digits, k);
        if (st.l0 > cfg.max_len) break;
        auto [b0, b1] = cocycle::substitution_blocks(digits, k, cfg.max_len);
        PsiStream psi(digits, st.l0.convert_to<std::int64_t>());
        bool ok = b0.size() == st.l0 && b1.size() == st.l1;
        std::int64_t mismatch = -1;
        for (std::int64_t n = 0; n < b0.size() && ok; ++n) {
            if (b0.data[static_cast<size_t>(n)] != psi.next_bit()) {
                ok = false;
                mismatch = n + 1;
            }
        }
        // bind the production psi_direct on a subsample
        for (std::int64_t n = 1; n <= b0.size() && ok; n += 97)
            if (b0.data[static_cast<size_t>(n - 1)] != cocycle::psi_direct(digits, n)) {
                ok = false;
                mismatch = n;
            }
        std::ostringstream detail;
        detail << "level " << k << ", l=" << st.l0.str();
        if (mismatch >= 0) detail << ", first mismatch at n=" << mismatch;
        add(out, "thm21 level " + std::to_string(k), ok, detail.str());
        ++k;
        if (!ok) break;
    }
    return out;
}

std::vector<CheckResult> suite_thm22(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    int k = 0;
    while (true) {
        cocycle::RenormState st = cocycle::renorm_state(digits, k);
        if (st.l0 > cfg.max_len) break;
        auto sb = cocycle::sign_blocks(digits, k, cfg.max_len);
        // B_k(0) realizes the orbit window (phi({j alpha}))_{j=1..l}; the
        // printed j=0 window disagrees with the recursion from level 1 on.
        OrbitStream orbit(digits, st.l0.convert_to<std::int64_t>() + 1);
        orbit.next_jump();  // discard j = 0
        bool ok = sb.B0.size() == st.l0;
        std::int64_t mismatch = -1;
        for (std::int64_t j = 0; j < sb.B0.size() && ok; ++j)
            if (sb.B0.data[static_cast<size_t>(j)] != orbit.next_jump()) {
                ok = false;
                mismatch = j + 1;
            }
        // parity consistency with the substitution blocks
        if (ok && st.l0 <= 100'000) {
            auto [b0, b1] = cocycle::substitution_blocks(digits, k, cfg.max_len);
            auto parity = [](const cocycle::SymbolBlock& b) {
                std::int64_t s = 0;
                for (auto v : b.data) s += v;
                return static_cast<int>(s % 2);
            };
            ok = parity(b0) == sb.eps0 && parity(b1) == sb.eps1 && sb.eps0 == st.eps0 &&
                 sb.eps1 == st.eps1;
        }
        std::ostringstream detail;
        detail << "level " << k << ", l=" << st.l0.str();
        if (mismatch >= 0) detail << ", first mismatch at j=" << mismatch;
        add(out, "thm22 level " + std::to_string(k), ok, detail.str());
        ++k;
        if (!ok) break;
    }
    return out;
}

std::vector<CheckResult> suite_orbit(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    int k = 0;
    while (true) {
        cocycle::RenormState st = cocycle::renorm_state(digits, k);
        if (st.l0 > cfg.max_len) break;
        auto [S0, S1] = cocycle::orbit_block(digits, k, cfg.max_len);
        OrbitStream orbit(digits, st.l0.convert_to<std::int64_t>());
        bool ok = S0.size() == st.l0 && S1.size() == st.l1;
        std::int64_t partial = 0;
        for (std::int64_t m = 0; m < S0.size() && ok; ++m) {
            partial += orbit.next_jump();
            if (S0.data[static_cast<size_t>(m)] != partial) ok = false;
            if (m < S1.size() && S1.data[static_cast<size_t>(m)] != partial) ok = false;
        }
        if (ok) ok = S0.data.back() == st.s0 && S1.data.back() == st.s1;
        // bind cocycle_sum on a few prefix lengths
        if (ok && k >= 1) {
            Rat alpha = mcf::evaluate(digits, mcf::order_for_denominator(
                                                  digits, Int(2) * st.l0 + 4, 5)) /
                        2;
            for (std::int64_t m : {std::int64_t(1), S1.size(), S0.size()}) {
                if (cocycle::cocycle_sum(alpha, m, Rat(0)) !=
                    S0.data[static_cast<size_t>(m - 1)])
                    ok = false;
            }
        }
        add(out, "orbit level " + std::to_string(k), ok, "l=" + st.l0.str());
        ++k;
        if (!ok) break;
    }
    return out;
}

std::vector<CheckResult> suite_visits(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    visits::Frame frame = visits::initial_frame();
    int level = 0;
    while (true) {
        if (frame.state.l0 > cfg.max_len) break;
        auto direct0 = visits::visits_direct(digits, frame.state.l0.convert_to<std::int64_t>());
        auto direct1 = visits::visits_direct(digits, frame.state.l1.convert_to<std::int64_t>());
        bool ok = frame.U0.counts == direct0.counts && frame.U1.counts == direct1.counts;
        bool mass_ok = frame.U0.mass() == frame.state.l0 && frame.U1.mass() == frame.state.l1;
        add(out, "visits level " + std::to_string(level), ok && mass_ok,
            "l0=" + frame.state.l0.str());
        if (!(ok && mass_ok)) break;
        ++level;
        frame = visits::advance(frame, digits.digit(level));
    }
    return out;
}

std::vector<CheckResult> suite_simplified(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    visits::Frame frame = visits::initial_frame();
    visits::VisitDistribution V0 = frame.v0(), V1 = frame.v1();
    bool ok = true;
    for (int level = 1; level <= cfg.levels && ok; ++level) {
        const int n = digits.digit(level);
        auto [W0, W1] = visits::simplified_step(V0, V1, n, frame.state.eps0);
        frame = visits::advance(frame, n);
        ok = W0.counts == frame.v0().counts && W1.counts == frame.v1().counts;
        // support parity: supp V in 2Z + T
        for (const auto& [J, c] : W0.counts)
            if (mod_floor(Int(J - frame.state.T), Int(2)) != 0) ok = false;
        // L2 invariance under relabeling: sum of squared counts matches
        Int raw_sq = 0, simp_sq = 0;
        for (const auto& [nu, c] : frame.U0.counts) raw_sq += c * c;
        for (const auto& [J, c] : W0.counts) simp_sq += c * c;
        if (raw_sq != simp_sq) ok = false;
        V0 = std::move(W0);
        V1 = std::move(W1);
        add(out, "simplified level " + std::to_string(level), ok, "");
    }
    return out;
}

std::vector<CheckResult> suite_phistep(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    visits::Frame frame = visits::initial_frame();
    genfun::LaurentPoly f0 = genfun::temporal_law(frame.v0()).poly();
    genfun::LaurentPoly f1 = genfun::temporal_law(frame.v1()).poly();
    bool ok = true;
    for (int level = 1; level <= cfg.levels && ok; ++level) {
        const int n = digits.digit(level);
        genfun::LaurentPoly g0 =
            genfun::phi_step(f0, f1, n, frame.state.eps0, 0, frame.state.l0, frame.state.l1);
        genfun::LaurentPoly g1 =
            genfun::phi_step(f0, f1, n, frame.state.eps0, 1, frame.state.l0, frame.state.l1);
        frame = visits::advance(frame, n);
        ok = g0 == genfun::temporal_law(frame.v0()).poly() &&
             g1 == genfun::temporal_law(frame.v1()).poly();
        ok = ok && g0.eval_at_one() == 1 && g1.eval_at_one() == 1;
        f0 = std::move(g0);
        f1 = std::move(g1);
        add(out, "phistep level " + std::to_string(level), ok, "");
    }
    return out;
}

std::vector<CheckResult> suite_biohazard(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    auto seq = rat::alpha_rat_sequence(digits, cfg.levels);
    visits::Frame frame = visits::initial_frame();
    for (int k = 1; k <= cfg.levels; ++k) {
        frame = visits::advance(frame, digits.digit(k));
        auto law = rat::exact_arw_law({seq.begin(), seq.begin() + k}, k);
        bool ok = true;
        for (int i = 0; i < 2; ++i) {
            auto target = genfun::temporal_law(frame.v(i));
            auto got = law.marginal_law(i);
            if (got.probabilities != target.probabilities) ok = false;
        }
        add(out, "biohazard level " + std::to_string(k), ok, "");
        if (!ok) break;
    }
    return out;
}

std::vector<CheckResult> suite_predicates(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    cocycle::RenormState st = cocycle::initial_state();
    bool all_ok = true;
    std::string fail;
    for (int k = 1; k <= std::max(cfg.levels, 12); ++k) {
        const int n = digits.digit(k);
        rat::FlipRat F = rat::spec_rat(n, st.eps0, st.l0, st.l1);
        auto pred = rat::predicates(F);
        const bool trivial = n == 2;
        const bool odd = st.eps0 == 1;
        bool ok;
        if (trivial) {
            ok = !pred.irreducible && !pred.partially_adapted;
        } else if (odd) {
            ok = pred.irreducible && pred.mean_contractive && !pred.partially_adapted;
        } else {
            ok = pred.irreducible && !pred.mean_contractive &&
                 (pred.adapted == (n >= 4)) && pred.partially_adapted;
        }
        if (!ok) {
            all_ok = false;
            fail = "level " + std::to_string(k) + " (n=" + std::to_string(n) +
                   ", parity=" + (odd ? "odd" : "even") + ")";
        }
        st = cocycle::renorm_advance(st, n);
    }
    add(out, "spec-RAT classification", all_ok, fail);
    return out;
}

std::vector<CheckResult> suite_norms(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    std::uint64_t state = cfg.seed;
    bool norm_ok = true, gamma_ok = true, even_ok = true;
    for (int i = 0; i < cfg.count; ++i) {
        const int d = 1 + static_cast<int>(rand_below(state, 3));
        rat::FlipRat F = random_flip_rat(state, d, 3);
        for (int g = 0; g < cfg.grid; ++g) {
            double theta = 2.0 * M_PI * g / cfg.grid;
            if (rat::cf_norm(F, theta) > 1.0 + 1e-12) norm_ok = false;
        }
        auto gamma = rat::periodicity_group(F);
        // norm is 1 on every row lattice point, and invariant under the
        // common-divisor subgroup
        for (const auto& dr : gamma.row_divisors) {
            if (dr == 0) continue;
            Int D = numerator(dr);  // integer for discrete RATs
            for (Int j = 0; j < D && j < 16; ++j) {
                double theta = 2.0 * M_PI * to_double(Rat(j, D));
                if (std::abs(rat::cf_norm(F, theta) - 1.0) > 1e-12) gamma_ok = false;
            }
        }
        if (gamma.kind != rat::PeriodicityGroup::Kind::full_line && gamma.common_divisor > 1) {
            Int D = numerator(gamma.common_divisor);
            double g0 = 2.0 * M_PI / to_double(Rat(D));
            for (int s = 0; s < 7; ++s) {
                double theta = 2.0 * M_PI * (s + 1) / 7.3;
                if (std::abs(rat::cf_norm(F, theta + g0) - rat::cf_norm(F, theta)) > 1e-12)
                    gamma_ok = false;
            }
        }
        // (Football): characteristic polynomial coefficients even in theta
        if (i % 50 == 0) {
            auto coef = rat::rat_cf(F).char_poly_coefficients();
            for (const auto& c : coef) {
                if (!(c == c.reflected())) even_ok = false;
                for (double theta : {0.3, 1.1, 2.9}) {
                    auto z = c.eval(theta);
                    if (std::abs(z.imag()) > 1e-10) even_ok = false;
                    if (std::abs((z - c.eval(-theta)).real()) > 1e-10) even_ok = false;
                }
            }
        }
    }
    add(out, "norm bound ||P(theta)|| <= 1", norm_ok);
    add(out, "lattice norm and translation invariance", gamma_ok);
    add(out, "char-poly coefficients even", even_ok);

    // multiplicativity on general random pairs
    bool mult_ok = true;
    for (int i = 0; i < std::min(cfg.count, 200); ++i) {
        const int d = 1 + static_cast<int>(rand_below(state, 2));
        rat::FlipRat F = random_flip_rat(state, d, 2);
        rat::FlipRat G = random_flip_rat(state, d, 2);
        rat::FlipRat FG = rat::compose(F, G);
        auto cf_f = rat::rat_cf(F), cf_g = rat::rat_cf(G), cf_fg = rat::rat_cf(FG);
        for (int r = 0; r < 2 * d && mult_ok; ++r)
            for (int c = 0; c < 2 * d && mult_ok; ++c) {
                genfun::LaurentPoly acc;
                for (int m = 0; m < 2 * d; ++m) acc += cf_f.at(r, m) * cf_g.at(m, c);
                if (!(acc == cf_fg.at(r, c))) mult_ok = false;
            }
    }
    add(out, "rat_cf multiplicativity", mult_ok);

    // closure and the mixed composition on random spec-RAT pairs
    bool closure_ok = true, mixed_ok = true;
    auto random_spec = [&state]() {
        const int n = 2 + static_cast<int>(rand_below(state, 5));
        const int eps = static_cast<int>(rand_below(state, 2));
        const Int l1 = 1 + rand_below(state, 20);
        const Int l0 = l1 + rand_below(state, 20);
        return rat::spec_rat(n, eps, l0, l1);
    };
    for (int i = 0; i < std::min(cfg.count, 200); ++i) {
        rat::FlipRat F = random_spec();
        rat::FlipRat G = random_spec();
        rat::FlipRat FG = rat::compose(F, G);
        auto pf = rat::predicates(F), pg = rat::predicates(G), pfg = rat::predicates(FG);
        if ((pf.irreducible || pg.irreducible) && !pfg.irreducible) closure_ok = false;
        if ((pf.mean_contractive || pg.mean_contractive) && !pfg.mean_contractive)
            closure_ok = false;
        if ((pf.balanced || pg.balanced) && !pfg.balanced) closure_ok = false;
        if (pg.irreducible && pf.mean_contractive && !pfg.balanced) mixed_ok = false;
    }
    add(out, "composition closure on spec-RAT pairs", closure_ok);
    add(out, "irreducible o mean-contractive is balanced", mixed_ok);
    return out;
}

std::vector<CheckResult> suite_variance(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    std::uint64_t state = cfg.seed;
    bool ok = true;
    std::string fail;
    for (int i = 0; i < cfg.instances && ok; ++i) {
        const int n = 2 + static_cast<int>(rand_below(state, 5));  // up to 6 steps
        std::vector<rat::FlipRat> seq;
        for (int m = 0; m < n; ++m) seq.push_back(random_flip_rat(state, 2, 2));
        auto centered = rat::center(seq);
        auto check = rat::variance_check(centered.rats, n);
        if (!check.sandwich_holds || !check.orthogonal) {
            ok = false;
            fail = "instance " + std::to_string(i);
        }
    }
    add(out, "variance sandwich and orthogonality", ok, fail);
    return out;
}

std::vector<CheckResult> suite_centering(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    std::uint64_t state = cfg.seed + 1;
    bool prop71 = true, bmf = true, adapt = true;
    for (int i = 0; i < std::min(cfg.instances, 40); ++i) {
        const int n = 2 + static_cast<int>(rand_below(state, 3));
        std::vector<rat::FlipRat> seq;
        for (int m = 0; m < n; ++m) seq.push_back(random_flip_rat(state, 2, 2));
        auto centered = rat::center(seq);
        auto law = rat::exact_arw_law(seq, n);
        auto claw = rat::exact_arw_law(centered.rats, n);
        for (int k = 0; k < 2; ++k) {
            // Prop 7.1: Var(X_k) = E(centered X_k^2)
            Rat mean_k = law.mean(2)[static_cast<size_t>(k)];
            Rat var = law.second_moment(k) - mean_k * mean_k;
            if (var != claw.second_moment(k)) prop71 = false;
        }
        // Prop 7.2: ||b~ - b|| <= 2 sup ||E(X^(m))||
        Rat sup_mean = 0;
        for (const auto& c : centered.means)
            for (const auto& v : c) sup_mean = std::max(sup_mean, rat_abs(v));
        for (size_t m = 0; m < seq.size(); ++m) {
            const auto& orig = seq[m].atoms();
            const auto& cent = centered.rats[m].atoms();
            for (size_t a = 0; a < orig.size(); ++a)
                for (int k = 0; k < 2; ++k) {
                    Rat diff = rat_abs(cent[a].b[static_cast<size_t>(k)] -
                                       orig[a].b[static_cast<size_t>(k)]);
                    if (diff > 2 * sup_mean) bmf = false;
                }
        }
        // centering preserves adaptedness and the periodicity lattices
        for (size_t m = 0; m < seq.size(); ++m) {
            auto p0 = rat::predicates(seq[m]);
            auto p1 = rat::predicates(centered.rats[m]);
            if (p0.adapted != p1.adapted || p0.partially_adapted != p1.partially_adapted)
                adapt = false;
            auto g0 = rat::periodicity_group(seq[m]);
            auto g1 = rat::periodicity_group(centered.rats[m]);
            if (g0.row_divisors != g1.row_divisors) adapt = false;
        }
    }
    add(out, "Prop 7.1 variance identity", prop71);
    add(out, "bounded centering", bmf);
    add(out, "adaptedness preserved under centering", adapt);
    return out;
}

std::vector<CheckResult> suite_grouping(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    const int K = std::max(cfg.levels, 16);
    auto nu = mcf::canonical_subsequence(digits, K / 4);
    auto seq = rat::alpha_rat_sequence(digits, static_cast<int>(nu.indices.back()));
    bool ok = true;
    std::string detail;
    try {
        auto grouped = rat::group(seq, nu);
        auto rep = rat::compactness_report(grouped, digits, K);
        detail = "min atom " + rat_string(rep.min_atom) + ", max |b| " +
                 rat_string(rep.max_b_inf) + ", min r " + rat_string(rep.r_min);
        if (rep.min_atom <= 0 || rep.r_min <= 0) ok = false;
    } catch (const GroupingAssertionFailed& e) {
        ok = false;
        detail = e.what();
    }
    add(out, "canonical grouping adapted + mean contractive", ok, detail);
    return out;
}

std::vector<CheckResult> suite_sublemma(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    const int K = std::max(cfg.levels, 20);
    auto r = rat::length_ratio_trajectory(digits, K);
    Rat delta = r[0];
    for (const auto& v : r) delta = std::min(delta, v);
    bool ratio_ok = delta > 0;
    // p_k(i)/(1-p_k(i)) = (n_{k+1}-1-i)/r_k in [n-1-i, (n-1-i)/Delta]
    cocycle::RenormState st = cocycle::initial_state();
    bool p_ok = true;
    for (int k = 1; k <= K; ++k) {
        const int n = digits.digit(k);
        for (int i = 0; i < 2; ++i) {
            Rat p = genfun::p_weight(n, i, st.l0, st.l1);
            if (p == 1) continue;
            Rat odds = p / (Rat(1) - p);
            if (odds < Rat(n - 1 - i) || odds > Rat(n - 1 - i) / delta) p_ok = false;
        }
        st = cocycle::renorm_advance(st, n);
    }
    // a run of R twos sends 1/r up by exactly 1 per step
    bool run_ok = true;
    for (int k = 1; k < K; ++k) {
        if (digits.digit(k + 1) == 2) {
            Rat lhs = Rat(1) / r[static_cast<size_t>(k + 1)];
            Rat rhs = Rat(1) / r[static_cast<size_t>(k)] + 1;
            if (lhs != rhs) run_ok = false;
        }
    }
    add(out, "length ratios bounded below", ratio_ok, "Delta = " + rat_string(delta));
    add(out, "p odds within Sublemma bounds", p_ok);
    add(out, "1/r increments on 2-runs", run_ok);
    return out;
}

std::vector<CheckResult> suite_visitlemma(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    visits::Frame frame = visits::initial_frame();
    for (int level = 1; level <= cfg.levels; ++level) {
        frame = visits::advance(frame, digits.digit(level));
        if (frame.state.l0 > 20'000) break;
        auto psi0 = analysis::psi_exact(digits, frame.state.l0.convert_to<std::int64_t>());
        auto psi1 = analysis::psi_exact(digits, frame.state.l1.convert_to<std::int64_t>());
        auto rep = genfun::visit_lemma_report(frame, psi0.integral(), Int(psi1.sup()));
        bool ok = rep.holds41 && (rep.holds42[0] || rep.holds42[1]);
        std::ostringstream detail;
        detail << "lhs41=" << to_double(rep.psi_l0_integral) << " rhs41=" << to_double(rep.rhs41)
               << " sup=" << rep.psi_l1_sup.str() << " 2*I1=(" << 2 * rep.u_l1[0].value << ","
               << 2 * rep.u_l1[1].value << ")";
        add(out, "visit lemma level " + std::to_string(level), ok, detail.str());
    }
    return out;
}

std::vector<CheckResult> suite_chain(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const auto& digits = cfg.digits;
    const int K = std::max(3, cfg.levels / 2);
    auto nu = mcf::canonical_subsequence(digits, K);
    // length-ratio and log-length regularity along nu_k
    bool ratio_ok = true, log_ok = true;
    std::vector<double> logl;
    cocycle::RenormState st = cocycle::initial_state();
    std::int64_t level = 0;
    std::vector<cocycle::RenormState> at_nu;
    for (std::int64_t target : nu.indices) {
        while (level < target) {
            ++level;
            st = cocycle::renorm_advance(st, digits.digit(level));
        }
        at_nu.push_back(st);
    }
    double min_ratio = 1e300, max_ratio = 0;
    for (size_t k = 0; k + 1 < at_nu.size(); ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double ratio = to_double(Rat(at_nu[k + 1].length(i), at_nu[k].length(j)));
                min_ratio = std::min(min_ratio, ratio);
                max_ratio = std::max(max_ratio, ratio);
                if (ratio <= 1) ratio_ok = false;
            }
    for (size_t k = 0; k < at_nu.size(); ++k) {
        double v = std::log(to_double(at_nu[k].l0)) / static_cast<double>(k + 1);
        logl.push_back(v);
    }
    double lmin = *std::min_element(logl.begin(), logl.end());
    double lmax = *std::max_element(logl.begin(), logl.end());
    if (lmin <= 0 || lmax / lmin > 10) log_ok = false;
    add(out, "length ratios m <= l_{nu+1}/l_nu <= M", ratio_ok,
        "m=" + std::to_string(min_ratio) + " M=" + std::to_string(max_ratio));
    add(out, "log l_{nu_k} comparable to k", log_ok,
        "per-k log-length in [" + std::to_string(lmin) + "," + std::to_string(lmax) + "]");

    // Psi bounds at the small nu_k where Psi is computable
    bool psi_ok = true;
    visits::Frame frame = visits::initial_frame();
    level = 0;
    size_t tested = 0;
    for (size_t k = 0; k < nu.indices.size(); ++k) {
        std::int64_t target = nu.indices[k];
        while (level < target) {
            ++level;
            frame = visits::advance(frame, digits.digit(level));
        }
        if (frame.state.l0 > 20'000) break;
        auto psi0 = analysis::psi_exact(digits, frame.state.l0.convert_to<std::int64_t>());
        auto psi1 = analysis::psi_exact(digits, frame.state.l1.convert_to<std::int64_t>());
        auto rep = genfun::visit_lemma_report(frame, psi0.integral(), Int(psi1.sup()));
        if (!(rep.holds41 && (rep.holds42[0] || rep.holds42[1]))) psi_ok = false;
        ++tested;
    }
    add(out, "Psi bounds along nu_k", psi_ok, std::to_string(tested) + " levels tested");
    return out;
}

}  // namespace

rat::FlipRat random_flip_rat(std::uint64_t& state, int d, int max_offset) {
    const int natoms = 2 + static_cast<int>(rand_below(state, 4));
    std::vector<std::int64_t> weights;
    std::int64_t total = 0;
    for (int i = 0; i < natoms; ++i) {
        weights.push_back(1 + rand_below(state, 8));
        total += weights.back();
    }
    std::vector<rat::Atom> atoms;
    for (int i = 0; i < natoms; ++i) {
        rat::Atom atom;
        atom.a.assign(static_cast<size_t>(d) * d, 0);
        atom.b.assign(static_cast<size_t>(d), Rat(0));
        atom.p = Rat(weights[static_cast<size_t>(i)], total);
        for (int k = 0; k < d; ++k) {
            const int l = static_cast<int>(rand_below(state, d));
            const int sign = rand_below(state, 2) == 0 ? 1 : -1;
            atom.a[static_cast<size_t>(k) * d + l] = static_cast<std::int8_t>(sign);
            atom.b[static_cast<size_t>(k)] =
                Rat(rand_below(state, 2 * max_offset + 1) - max_offset);
        }
        atoms.push_back(std::move(atom));
    }
    return rat::FlipRat(d, std::move(atoms));
}

std::vector<std::string> suite_names() {
    return {"thm21",     "thm22",    "orbit",     "visits",   "simplified", "phistep",
            "biohazard", "predicates", "norms",   "variance", "centering",  "grouping",
            "sublemma",  "visitlemma", "chain"};
}

std::vector<CheckResult> run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "thm21") return suite_thm21(cfg);
    if (name == "thm22") return suite_thm22(cfg);
    if (name == "orbit") return suite_orbit(cfg);
    if (name == "visits") return suite_visits(cfg);
    if (name == "simplified") return suite_simplified(cfg);
    if (name == "phistep") return suite_phistep(cfg);
    if (name == "biohazard") return suite_biohazard(cfg);
    if (name == "predicates") return suite_predicates(cfg);
    if (name == "norms") return suite_norms(cfg);
    if (name == "variance") return suite_variance(cfg);
    if (name == "centering") return suite_centering(cfg);
    if (name == "grouping") return suite_grouping(cfg);
    if (name == "sublemma") return suite_sublemma(cfg);
    if (name == "visitlemma") return suite_visitlemma(cfg);
    if (name == "chain") return suite_chain(cfg);
    throw UsageError("unknown verify suite: " + name);
}

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

}  // namespace skewrat::verify
