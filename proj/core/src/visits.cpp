#include "skewrat/visits.hpp"

#include <string>

#include "skewrat/errors.hpp"

namespace skewrat::visits {

Int VisitDistribution::mass() const {
    Int m = 0;
    for (const auto& [nu, c] : counts) m += c;
    return m;
}

Int VisitDistribution::at(std::int64_t nu) const {
    auto it = counts.find(nu);
    return it == counts.end() ? Int(0) : it->second;
}

namespace {

void prune(VisitDistribution& d) {
    for (auto it = d.counts.begin(); it != d.counts.end();) {
        if (it->second == 0)
            it = d.counts.erase(it);
        else
            ++it;
    }
}

void check_mass(const VisitDistribution& d, const Int& want, const char* what) {
    Int got = d.mass();
    if (got != want)
        throw MassMismatch(std::string(what) + ": mass " + got.str() + " != " + want.str());
}

}  // namespace

VisitDistribution visits_direct(const mcf::DigitSequence& digits, std::int64_t L) {
    if (L < 1) throw Error("L must be >= 1");
    if (L > cocycle::kDefaultBlockCap)
        throw BlockTooLarge("visits_direct window " + std::to_string(L) + " exceeds cap");
    int order;
    try {
        order = mcf::order_for_denominator(digits, Int(2) * L + 4, 5);
    } catch (const InsufficientDigits&) {
        throw PrecisionExhausted("not enough digits for a convergent covering L = " +
                                 std::to_string(L));
    }
    auto [p, q] = mcf::convergent(digits, order);
    // alpha = p/(2q); orbit position of j*alpha is j*p mod 2q.
    Int D = 2 * q;
    VisitDistribution out;
    out.level = 0;
    out.kind = VisitDistribution::Kind::raw;
    if (D <= Int(std::int64_t(1) << 62)) {
        const std::uint64_t du = D.convert_to<std::uint64_t>();
        const std::uint64_t step = mod_floor(p, D).convert_to<std::uint64_t>();
        std::uint64_t m = 0;
        std::int64_t phi = 0;
        std::map<std::int64_t, std::int64_t> counts;
        for (std::int64_t nstep = 1; nstep <= L; ++nstep) {
            phi += (2 * m < du) ? 1 : -1;  // adds jump at (n-1)*alpha
            ++counts[phi];
            m += step;
            if (m >= du) m -= du;
        }
        for (const auto& [nu, c] : counts) out.counts[nu] = c;
    } else {
        Int m = 0;
        const Int step = mod_floor(p, D);
        std::int64_t phi = 0;
        for (std::int64_t nstep = 1; nstep <= L; ++nstep) {
            phi += (2 * m < D) ? 1 : -1;
            ++out.counts[phi];
            m += step;
            if (m >= D) m -= D;
        }
    }
    return out;
}

std::pair<VisitDistribution, VisitDistribution> visits_step(const VisitDistribution& U0,
                                                            const VisitDistribution& U1,
                                                            int n_next, int eps,
                                                            std::int64_t s0) {
    if (n_next < 2) throw Error("digit must be >= 2");
    if (U0.kind != VisitDistribution::Kind::raw || U1.kind != VisitDistribution::Kind::raw)
        throw Error("visits_step needs raw distributions");
    const int n = n_next;

    auto build = [&](int i) {
        VisitDistribution out;
        out.level = U0.level + 1;
        out.flavor = i;
        out.kind = VisitDistribution::Kind::raw;
        if (eps == 0) {
            // sum_j U0(nu - (j-1)s0) + U1(nu - (n-i-1)s0)
            for (int j = 1; j <= n - 1 - i; ++j) {
                const std::int64_t off = static_cast<std::int64_t>(j - 1) * s0;
                for (const auto& [nu, c] : U0.counts) out.counts[nu + off] += c;
            }
            const std::int64_t off = static_cast<std::int64_t>(n - i - 1) * s0;
            for (const auto& [nu, c] : U1.counts) out.counts[nu + off] += c;
        } else if ((n - 1 - i) % 2 == 0) {
            const std::int64_t w = (n - 1 - i) / 2;
            for (const auto& [nu, c] : U0.counts) {
                out.counts[nu] += w * c;
                out.counts[s0 - nu] += w * c;
            }
            for (const auto& [nu, c] : U1.counts) out.counts[nu] += c;
        } else {
            if ((n - i) % 2 != 0)
                throw HalfIntegerWeight("odd-case weights not integral at digit " +
                                        std::to_string(n));
            const std::int64_t w_dir = (n - i) / 2, w_ref = (n - 2 - i) / 2;
            for (const auto& [nu, c] : U0.counts) {
                out.counts[nu] += w_dir * c;
                if (w_ref != 0) out.counts[s0 - nu] += w_ref * c;
            }
            for (const auto& [nu, c] : U1.counts) out.counts[s0 - nu] += c;
        }
        prune(out);
        Int want = (n - 1 - i) * U0.mass() + U1.mass();
        check_mass(out, want, "visits_step");
        return out;
    };

    return {build(0), build(1)};
}

VisitDistribution simplify(const VisitDistribution& U, std::int64_t T) {
    if (U.kind != VisitDistribution::Kind::raw) throw Error("simplify needs a raw distribution");
    VisitDistribution out;
    out.level = U.level;
    out.flavor = U.flavor;
    out.kind = VisitDistribution::Kind::simplified;
    for (const auto& [nu, c] : U.counts) out.counts[2 * nu + T] = c;
    return out;
}

std::pair<VisitDistribution, VisitDistribution> simplified_step(const VisitDistribution& V0,
                                                                const VisitDistribution& V1,
                                                                int n_next, int eps) {
    if (n_next < 2) throw Error("digit must be >= 2");
    if (V0.kind != VisitDistribution::Kind::simplified ||
        V1.kind != VisitDistribution::Kind::simplified)
        throw Error("simplified_step needs simplified distributions");
    const int n = n_next;

    auto build = [&](int i) {
        VisitDistribution out;
        out.level = V0.level + 1;
        out.flavor = i;
        out.kind = VisitDistribution::Kind::simplified;
        if (eps == 0) {
            // powers Z^{2(j-1)-(n-1)} on V0 and Z^{n-2i-1} on V1
            for (int j = 1; j <= n - 1 - i; ++j) {
                const std::int64_t off = 2 * (j - 1) - (n - 1);
                for (const auto& [J, c] : V0.counts) out.counts[J + off] += c;
            }
            const std::int64_t off = n - 2 * i - 1;
            for (const auto& [J, c] : V1.counts) out.counts[J + off] += c;
        } else if ((n - 1 - i) % 2 == 0) {
            // (n-1-i)/2 (Z V0(Z) + Z V0(Z^-1)) + Z V1(Z)
            const std::int64_t w = (n - 1 - i) / 2;
            for (const auto& [J, c] : V0.counts) {
                out.counts[J + 1] += w * c;
                out.counts[-J + 1] += w * c;
            }
            for (const auto& [J, c] : V1.counts) out.counts[J + 1] += c;
        } else {
            if ((n - i) % 2 != 0)
                throw HalfIntegerWeight("odd-case weights not integral at digit " +
                                        std::to_string(n));
            const std::int64_t w_dir = (n - i) / 2, w_ref = (n - 2 - i) / 2;
            for (const auto& [J, c] : V0.counts) {
                out.counts[J + 1] += w_dir * c;
                if (w_ref != 0) out.counts[-J + 1] += w_ref * c;
            }
            for (const auto& [J, c] : V1.counts) out.counts[-J + 1] += c;
        }
        prune(out);
        Int want = (n - 1 - i) * V0.mass() + V1.mass();
        check_mass(out, want, "simplified_step");
        return out;
    };

    return {build(0), build(1)};
}

VisitDistribution Frame::v0() const { return simplify(U0, state.T); }
VisitDistribution Frame::v1() const { return simplify(U1, state.T); }

Frame initial_frame() {
    Frame f;
    f.U0.counts[1] = 1;
    f.U1.counts[1] = 1;
    f.U0.flavor = 0;
    f.U1.flavor = 1;
    f.state = cocycle::initial_state();
    return f;
}

Frame advance(const Frame& frame, int n_next) {
    Frame out;
    auto [u0, u1] = visits_step(frame.U0, frame.U1, n_next, frame.state.eps0, frame.state.s0);
    out.U0 = std::move(u0);
    out.U1 = std::move(u1);
    out.state = cocycle::renorm_advance(frame.state, n_next);
    check_mass(out.U0, out.state.l0, "frame U0");
    check_mass(out.U1, out.state.l1, "frame U1");
    return out;
}

Frame frame_at(const mcf::DigitSequence& digits, int level) {
    Frame f = initial_frame();
    for (int j = 1; j <= level; ++j) f = advance(f, digits.digit(j));
    return f;
}

}  // namespace skewrat::visits
