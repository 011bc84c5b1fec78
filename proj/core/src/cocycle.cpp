#include "skewrat/cocycle.hpp"

#include <cmath>
#include <string>

#include "skewrat/errors.hpp"

namespace skewrat::cocycle {

int jump(const Rat& x) {
    Rat f = frac(x);
    return 2 * numerator(f) < denominator(f) ? 1 : -1;
}

int jump(double x, double tol) {
    double r = x - std::floor(x);
    if (r < tol || r > 1 - tol || std::abs(r - 0.5) < tol)
        throw BoundaryAmbiguity("point within " + std::to_string(tol) + " of 0 or 1/2");
    return r < 0.5 ? 1 : -1;
}

std::int64_t cocycle_sum(const Rat& alpha, std::int64_t n, const Rat& x) {
    if (n < 0) throw Error("cocycle_sum needs n >= 0");
    if (n == 0) return 0;
    // common denominator D: position of x + k*alpha is an integer mod D
    Int da = denominator(alpha), dx = denominator(x);
    Int d = gcd(da, dx);
    Int D = da / d * dx;
    Int step = mod_floor(numerator(alpha) * (D / da), D);
    Int pos = mod_floor(numerator(x) * (D / dx), D);

    std::int64_t total = 0;
    if (D <= Int(std::int64_t(1) << 62)) {
        const std::uint64_t du = D.convert_to<std::uint64_t>();
        std::uint64_t s = step.convert_to<std::uint64_t>();
        std::uint64_t m = pos.convert_to<std::uint64_t>();
        for (std::int64_t k = 0; k < n; ++k) {
            total += (2 * m < du) ? 1 : -1;
            m += s;
            if (m >= du) m -= du;
        }
    } else {
        Int m = pos;
        for (std::int64_t k = 0; k < n; ++k) {
            total += (2 * m < D) ? 1 : -1;
            m += step;
            if (m >= D) m -= D;
        }
    }
    return total;
}

int psi_direct(const mcf::DigitSequence& digits, std::int64_t n) {
    if (n < 1) throw Error("psi index must be >= 1");
    int order;
    try {
        order = mcf::order_for_denominator(digits, Int(2) * n + 4, 5);
    } catch (const InsufficientDigits& e) {
        throw PrecisionExhausted(std::string("not enough digits for psi_") + std::to_string(n) +
                                 ": " + e.what());
    }
    auto [p, q] = mcf::convergent(digits, order);
    Int m = mod_floor(Int(n - 1) * p, q);
    return (m + p >= q) ? 1 : 0;
}

namespace {

Int block_length(const mcf::DigitSequence& digits, int k, int flavor) {
    Int l0 = 1, l1 = 1;
    for (int j = 1; j <= k; ++j) {
        int n = digits.digit(j);
        Int n0 = (n - 1) * l0 + l1;
        Int n1 = (n - 2) * l0 + l1;
        l0 = n0;
        l1 = n1;
    }
    return flavor == 0 ? l0 : l1;
}

void check_cap(const mcf::DigitSequence& digits, int k, std::int64_t cap) {
    Int l0 = block_length(digits, k, 0);
    if (l0 > cap)
        throw BlockTooLarge("l_" + std::to_string(k) + "(0) = " + l0.str() + " exceeds cap " +
                            std::to_string(cap));
}

std::vector<std::int64_t> repeat_concat(const std::vector<std::int64_t>& head, int copies,
                                        const std::vector<std::int64_t>& tail) {
    std::vector<std::int64_t> out;
    out.reserve(head.size() * static_cast<size_t>(copies) + tail.size());
    for (int j = 0; j < copies; ++j) out.insert(out.end(), head.begin(), head.end());
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

}  // namespace

std::pair<SymbolBlock, SymbolBlock> substitution_blocks(const mcf::DigitSequence& digits, int k,
                                                        std::int64_t cap) {
    if (k < 0) throw Error("level must be >= 0");
    check_cap(digits, k, cap);
    std::vector<std::int64_t> b0{0}, b1{1};
    for (int j = 1; j <= k; ++j) {
        int n = digits.digit(j);
        auto n0 = repeat_concat(b0, n - 1, b1);
        auto n1 = repeat_concat(b0, n - 2, b1);
        b0 = std::move(n0);
        b1 = std::move(n1);
    }
    return {SymbolBlock{SymbolBlock::Kind::bits, std::move(b0)},
            SymbolBlock{SymbolBlock::Kind::bits, std::move(b1)}};
}

SignBlocks sign_blocks(const mcf::DigitSequence& digits, int k, std::int64_t cap) {
    if (k < 0) throw Error("level must be >= 0");
    check_cap(digits, k, cap);
    std::vector<std::int64_t> B0{1}, B1{-1};
    int eps0 = 0, eps1 = 1;
    for (int j = 1; j <= k; ++j) {
        int n = digits.digit(j);
        auto build = [&](int i) {
            std::vector<std::int64_t> out;
            out.reserve(B0.size() * static_cast<size_t>(n - 1 - i) + B1.size());
            for (int c = 0; c < n - 1 - i; ++c) {
                int sign = (eps0 && (c % 2 == 1)) ? -1 : 1;  // (-1)^((j-1) eps0)
                for (auto v : B0) out.push_back(sign * v);
            }
            int sign = (eps0 && ((n - 1 - i) % 2 == 1)) ? -1 : 1;
            for (auto v : B1) out.push_back(sign * v);
            return out;
        };
        auto n0 = build(0);
        auto n1 = build(1);
        B0 = std::move(n0);
        B1 = std::move(n1);
        int e0 = ((n - 1) * eps0 + eps1) % 2;
        int e1 = ((n - 2) * eps0 + eps1) % 2;
        eps0 = e0;
        eps1 = e1;
    }
    return SignBlocks{SymbolBlock{SymbolBlock::Kind::signs, std::move(B0)},
                      SymbolBlock{SymbolBlock::Kind::signs, std::move(B1)}, eps0, eps1};
}

std::pair<SymbolBlock, SymbolBlock> orbit_block(const mcf::DigitSequence& digits, int k,
                                                std::int64_t cap) {
    if (k < 0) throw Error("level must be >= 0");
    check_cap(digits, k, cap);
    std::vector<std::int64_t> S0{1}, S1{1};
    RenormState state = initial_state();
    for (int j = 1; j <= k; ++j) {
        int n = digits.digit(j);
        const std::int64_t s = state.s0;
        auto shifted = [&](const std::vector<std::int64_t>& v, std::int64_t off) {
            std::vector<std::int64_t> out(v);
            for (auto& e : out) e += off;
            return out;
        };
        auto reflected = [&](const std::vector<std::int64_t>& v) {
            std::vector<std::int64_t> out(v);
            for (auto& e : out) e = s - e;
            return out;
        };
        auto build = [&](int i) {
            std::vector<std::int64_t> out;
            if (state.eps0 == 0) {
                for (int c = 0; c < n - 1 - i; ++c) {
                    auto part = shifted(S0, static_cast<std::int64_t>(c) * s);
                    out.insert(out.end(), part.begin(), part.end());
                }
                auto part = shifted(S1, static_cast<std::int64_t>(n - i - 1) * s);
                out.insert(out.end(), part.begin(), part.end());
            } else if ((n - 1 - i) % 2 == 0) {
                auto refl = reflected(S0);
                for (int c = 0; c < (n - 1 - i) / 2; ++c) {
                    out.insert(out.end(), S0.begin(), S0.end());
                    out.insert(out.end(), refl.begin(), refl.end());
                }
                out.insert(out.end(), S1.begin(), S1.end());
            } else {
                auto refl = reflected(S0);
                for (int c = 0; c < (n - 2 - i) / 2; ++c) {
                    out.insert(out.end(), S0.begin(), S0.end());
                    out.insert(out.end(), refl.begin(), refl.end());
                }
                out.insert(out.end(), S0.begin(), S0.end());
                auto tailpart = reflected(S1);
                out.insert(out.end(), tailpart.begin(), tailpart.end());
            }
            return out;
        };
        auto n0 = build(0);
        auto n1 = build(1);
        S0 = std::move(n0);
        S1 = std::move(n1);
        state = renorm_advance(state, n);
    }
    return {SymbolBlock{SymbolBlock::Kind::integers, std::move(S0)},
            SymbolBlock{SymbolBlock::Kind::integers, std::move(S1)}};
}

RenormState initial_state() { return RenormState{}; }

RenormState renorm_advance(const RenormState& state, int n_next) {
    if (n_next < 2) throw Error("digit must be >= 2");
    const int n = n_next;
    RenormState out;
    out.level = state.level + 1;
    out.l0 = (n - 1) * state.l0 + state.l1;
    out.l1 = (n - 2) * state.l0 + state.l1;
    out.eps0 = ((n - 1) * state.eps0 + state.eps1) % 2;
    out.eps1 = ((n - 2) * state.eps0 + state.eps1) % 2;

    if (state.eps0 == 0) {
        // s' = B(n) s
        out.s0 = (n - 1) * state.s0 + state.s1;
        out.s1 = (n - 2) * state.s0 + state.s1;
    } else if (n % 2 == 0) {
        // A(0) = [[1,-1],[0,1]]
        out.s0 = state.s0 - state.s1;
        out.s1 = state.s1;
    } else {
        // A(1) = [[0,1],[1,-1]]
        out.s0 = state.s1;
        out.s1 = state.s0 - state.s1;
    }

    const bool reachable = (out.eps0 == 0 && out.eps1 == 1) || (out.eps0 == 1);
    if (!reachable)
        throw ParityViolation("parity state (" + std::to_string(out.eps0) + "," +
                              std::to_string(out.eps1) + ") outside the transition diagram");

    if (out.eps0 == 1)
        out.T = -out.s0;
    else
        out.T = -out.s1;

    // Lemma 3.1 trichotomy at the new level.
    bool tri;
    if (out.eps0 == 0 && out.eps1 == 1)
        tri = (out.s0 == 1);
    else if (out.eps0 == 1 && out.eps1 == 0)
        tri = (out.s1 == 1);
    else
        tri = (out.s0 - out.s1 == 1);
    if (!tri)
        throw ParityViolation("position trichotomy violated at level " +
                              std::to_string(out.level));

    // Increment identities for T.
    const std::int64_t inc = out.T - state.T;
    const std::int64_t want = (state.eps0 == 0) ? -(static_cast<std::int64_t>(n) - 1) : 1;
    if (inc != want)
        throw ParityViolation("T increment " + std::to_string(inc) + " != " +
                              std::to_string(want) + " at level " + std::to_string(out.level));
    if (state.eps0 == 1 && state.T != -state.s0)
        throw ParityViolation("T_k != -s_k(0) with eps_k(0)=1");

    return out;
}

RenormState renorm_state(const mcf::DigitSequence& digits, int k) {
    RenormState st = initial_state();
    for (int j = 1; j <= k; ++j) st = renorm_advance(st, digits.digit(j));
    return st;
}

}  // namespace skewrat::cocycle
