#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "skewrat/cocycle.hpp"
#include "skewrat/mcf.hpp"
#include "skewrat/numeric.hpp"

namespace skewrat::visits {

// Sparse integer measure nu -> count.  Raw kind holds U_k^(i): visits of the
// cocycle orbit phi_n(0) to nu over n in [1, l_k(i)].  Simplified kind holds
// V_k^(i), the relabeling J = 2 nu + T_k.
struct VisitDistribution {
    enum class Kind { raw, simplified };

    std::map<std::int64_t, Int> counts;
    int level = 0;
    int flavor = 0;
    Kind kind = Kind::raw;

    Int mass() const;
    Int at(std::int64_t nu) const;
    bool operator==(const VisitDistribution&) const = default;
};

// Brute-force oracle: stream phi_n(0) for n <= L with an exact convergent
// of sufficient order and count visits.
VisitDistribution visits_direct(const mcf::DigitSequence& digits, std::int64_t L);

// One level of the raw transitions; needs eps_k(0) and s_k(0).
std::pair<VisitDistribution, VisitDistribution> visits_step(const VisitDistribution& U0,
                                                            const VisitDistribution& U1,
                                                            int n_next, int eps,
                                                            std::int64_t s0);

VisitDistribution simplify(const VisitDistribution& U, std::int64_t T);

// One level of the position-free simplified transitions.
std::pair<VisitDistribution, VisitDistribution> simplified_step(const VisitDistribution& V0,
                                                                const VisitDistribution& V1,
                                                                int n_next, int eps);

// A renormalization frame: both raw distributions advanced in lockstep with
// the scalar state.
struct Frame {
    VisitDistribution U0, U1;
    cocycle::RenormState state;

    VisitDistribution v0() const;
    VisitDistribution v1() const;
    VisitDistribution v(int flavor) const { return flavor == 0 ? v0() : v1(); }
};

Frame initial_frame();
Frame advance(const Frame& frame, int n_next);
Frame frame_at(const mcf::DigitSequence& digits, int level);

}  // namespace skewrat::visits
