#include "skewrat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "skewrat/errors.hpp"
#include "skewrat/visits.hpp"

namespace skewrat::analysis {

Rat StepFunction::integral() const {
    Rat total = 0;
    const size_t m = breakpoints.size();
    for (size_t i = 0; i < m; ++i) {
        Rat width = (i + 1 < m) ? breakpoints[i + 1] - breakpoints[i]
                                : Rat(1) - breakpoints[i] + breakpoints[0];
        total += width * values[i];
    }
    return total;
}

std::int64_t StepFunction::sup() const {
    std::int64_t best = 0;
    for (auto v : values) best = std::max(best, v);
    return best;
}

std::int64_t StepFunction::value_at(const Rat& x) const {
    Rat f = frac(x);
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), f);
    size_t idx = (it == breakpoints.begin()) ? breakpoints.size() - 1
                                             : static_cast<size_t>(it - breakpoints.begin() - 1);
    return values[idx];
}

namespace {

struct Arc {
    std::int32_t phi = 0;
    std::int64_t count = 0;
};

// Incremental Psi engine over a rational alpha = p/(2q): breakpoints are
// multiples of 1/(2q); arc keys live in Z/(2q).
class PsiEngine {
public:
    PsiEngine(const mcf::DigitSequence& digits, std::int64_t n_max) {
        const Int key_limit = Int(std::int64_t(1)) << 62;
        Int p, q;
        bool found = false;
        for (int extra = 5; extra >= 0 && !found; --extra) {
            int order = mcf::order_for_denominator(digits, Int(2) * n_max + 4, extra);
            std::tie(p, q) = mcf::convergent(digits, order);
            if (Int(n_max + 1) * 2 * q < key_limit) found = true;
        }
        if (!found)
            throw BlockTooLarge("psi window too large for the integer key space");
        p_ = p.convert_to<std::int64_t>();
        q_ = q.convert_to<std::int64_t>();
        D_ = 2 * q_;
        arcs_[0] = Arc{};
    }

    Rat alpha() const { return Rat(p_, D_); }

    // Process steps k = k_done..n-1; afterwards the counts hold Psi_n.
    void advance_to(std::int64_t n) {
        for (std::int64_t k = k_done_; k < n; ++k) step(k);
        k_done_ = n;
    }

    Rat integral() const { return Rat(zero_width_total_, D_); }
    std::int64_t sup() const { return sup_; }

    StepFunction snapshot() const {
        StepFunction f;
        f.breakpoints.reserve(arcs_.size());
        f.values.reserve(arcs_.size());
        for (const auto& [key, arc] : arcs_) {
            f.breakpoints.push_back(Rat(key, D_));
            f.values.push_back(arc.count);
        }
        return f;
    }

private:
    void split(std::int64_t key) {
        auto it = arcs_.upper_bound(key);
        const Arc& src = (it == arcs_.begin()) ? arcs_.rbegin()->second : std::prev(it)->second;
        arcs_.emplace(key, src);  // no-op if key already present
    }

    void step(std::int64_t k) {
        const std::int64_t r = (k % D_) * p_ % D_;  // k*p mod D, guarded by ctor
        split((D_ - r) % D_);          // { -k alpha }
        split((q_ - r + D_) % D_);     // { 1/2 - k alpha }

        auto it = arcs_.begin();
        while (it != arcs_.end()) {
            auto next = std::next(it);
            const std::int64_t lo = it->first;
            const std::int64_t hi = (next == arcs_.end()) ? arcs_.begin()->first + D_ : next->first;
            Arc& arc = it->second;
            if (arc.phi == 0) {
                ++arc.count;
                zero_width_total_ += hi - lo;
                if (arc.count > sup_) sup_ = arc.count;
            }
            const std::int64_t pos = (lo + r) % D_;
            arc.phi += (pos < q_) ? 1 : -1;
            it = next;
        }
    }

    std::int64_t p_ = 0, q_ = 0, D_ = 0;
    std::int64_t k_done_ = 0;
    std::map<std::int64_t, Arc> arcs_;
    Int zero_width_total_ = 0;
    std::int64_t sup_ = 0;
};

}  // namespace

StepFunction psi_exact(const mcf::DigitSequence& digits, std::int64_t n, std::int64_t cap) {
    if (n < 1) throw Error("n must be >= 1");
    if (n > cap) throw BlockTooLarge("psi_exact n exceeds cap " + std::to_string(cap));
    PsiEngine engine(digits, n);
    engine.advance_to(n);
    return engine.snapshot();
}

Rat psi_alpha(const mcf::DigitSequence& digits, std::int64_t n) {
    PsiEngine engine(digits, n);
    return engine.alpha();
}

std::vector<RailwaysRow> railways_report(const mcf::DigitSequence& digits,
                                         const std::vector<std::int64_t>& n_list,
                                         std::int64_t cap) {
    if (n_list.empty()) return {};
    std::vector<std::int64_t> ns = n_list;
    std::sort(ns.begin(), ns.end());
    if (ns.front() < 1) throw Error("n must be >= 1");
    if (ns.back() > cap) throw BlockTooLarge("railways n exceeds cap");

    PsiEngine engine(digits, ns.back());
    std::vector<RailwaysRow> rows;
    rows.reserve(ns.size());
    for (std::int64_t n : ns) {
        engine.advance_to(n);
        RailwaysRow row;
        row.n = n;
        row.sup = engine.sup();
        row.integral = engine.integral();
        const double integral = to_double(row.integral);
        row.ratio1 = static_cast<double>(row.sup) / integral;
        row.ratio2 = integral * std::sqrt(std::log(static_cast<double>(n))) /
                     static_cast<double>(n);
        rows.push_back(row);
    }
    return rows;
}

std::vector<WrlltRow> wrllt_report(const mcf::DigitSequence& digits, int K, int p) {
    if (p != 1 && p != 2) throw Error("p must be 1 or 2");
    auto nu = mcf::canonical_subsequence(digits, K);
    std::vector<WrlltRow> rows;
    rows.reserve(static_cast<size_t>(K));
    visits::Frame frame = visits::initial_frame();
    std::int64_t level = 0;
    for (int k = 1; k <= K; ++k) {
        const std::int64_t target = nu.indices[static_cast<size_t>(k - 1)];
        while (level < target) {
            ++level;
            frame = visits::advance(frame, digits.digit(level));
        }
        WrlltRow row;
        row.k = k;
        row.nu_k = target;
        for (int i = 0; i < 2; ++i) {
            const auto& U = (i == 0) ? frame.U0 : frame.U1;
            const Int l = (i == 0) ? frame.state.l0 : frame.state.l1;
            if (p == 2) {
                Rat sq = 0;
                for (const auto& [nu_val, c] : U.counts) sq += Rat(c) * Rat(c);
                row.integral[i] = to_double(sq / (Rat(l) * Rat(l)));
            } else {
                genfun::LaurentPoly phi;
                for (const auto& [nu_val, c] : U.counts) phi.set(nu_val, Rat(c, l));
                auto r = genfun::l1_integral(phi, genfun::default_l1_grid(phi));
                row.integral[i] = r.value;
                row.bound[i] = r.error_bound;
            }
            row.scaled[i] = row.integral[i] * std::sqrt(static_cast<double>(k));
        }
        rows.push_back(row);
    }
    return rows;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_to_normal(const genfun::TemporalLaw& law) {
    const double mean = to_double(law.mean());
    const double sd = std::sqrt(to_double(law.variance()));
    if (sd == 0) throw Error("degenerate law has no normal comparison");
    double ks = 0, cdf = 0;
    for (const auto& [nu, prob] : law.probabilities) {
        const double z = (static_cast<double>(nu) - mean) / sd;
        const double target = normal_cdf(z);
        ks = std::max(ks, std::abs(cdf - target));  // left limit
        cdf += to_double(prob);
        ks = std::max(ks, std::abs(cdf - target));  // right value
    }
    return ks;
}

std::vector<CltRow> clt_report(const mcf::DigitSequence& digits, int K_offset, int L_period,
                               int n_max) {
    if (!digits.periodic()) throw Error("clt_report needs periodic digits");
    if (K_offset < 0 || L_period < 1 || n_max < 1) throw Error("bad clt parameters");
    std::vector<CltRow> rows;
    rows.reserve(static_cast<size_t>(n_max));
    visits::Frame frame = visits::initial_frame();
    int level = 0;
    for (int n = 1; n <= n_max; ++n) {
        const int target = K_offset + L_period * n;
        while (level < target) {
            ++level;
            frame = visits::advance(frame, digits.digit(level));
        }
        auto law = genfun::temporal_law(frame.v0());
        CltRow row;
        row.n = n;
        row.level = target;
        // report on the phi scale: the law describes 2 phi + T
        const Rat mean_phi = (law.mean() - Rat(frame.state.T)) / 2;
        const Rat sd2_phi = law.variance() / 4;
        row.mu_hat = to_double(mean_phi) / static_cast<double>(n);
        row.c_hat = std::sqrt(to_double(sd2_phi) / static_cast<double>(n));
        row.ks = ks_to_normal(law);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace skewrat::analysis
