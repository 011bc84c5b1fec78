#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "skewrat/mcf.hpp"
#include "skewrat/numeric.hpp"

namespace skewrat::cocycle {

inline constexpr std::int64_t kDefaultBlockCap = 10'000'000;

// Jump function phi = 2*1_[0,1/2) - 1 on the circle.
int jump(const Rat& x);
// Floating inputs within tol of 0 or 1/2 throw BoundaryAmbiguity.
int jump(double x, double tol = 1e-12);

// phi_n(x) = sum_{k=0}^{n-1} phi(x + k*alpha), exact rational arithmetic.
std::int64_t cocycle_sum(const Rat& alpha, std::int64_t n, const Rat& x);

// psi_n = 1_[1-2a,1)(2(n-1)a), decided with an exact convergent of
// sufficient order for the digit stream.
int psi_direct(const mcf::DigitSequence& digits, std::int64_t n);

struct SymbolBlock {
    enum class Kind { bits, signs, integers };
    Kind kind;
    std::vector<std::int64_t> data;

    std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
    bool operator==(const SymbolBlock&) const = default;
};

// psi-blocks b_k(0), b_k(1):  b_0 = ([0],[1]),
//   b_{k+1}(0) = b_k(0)^(n-1) . b_k(1),  b_{k+1}(1) = b_k(0)^(n-2) . b_k(1).
std::pair<SymbolBlock, SymbolBlock> substitution_blocks(const mcf::DigitSequence& digits, int k,
                                                        std::int64_t cap = kDefaultBlockCap);

struct SignBlocks {
    SymbolBlock B0, B1;
    int eps0 = 0, eps1 = 0;  // parities of the corresponding psi-blocks
};

// phi-sign blocks B_k(i) with parities eps_k(i) = sum b_k(i) mod 2.
SignBlocks sign_blocks(const mcf::DigitSequence& digits, int k,
                       std::int64_t cap = kDefaultBlockCap);

// Orbit blocks Sigma_k(i) = (phi_1(0), ..., phi_{l_k(i)}(0)), advanced by the
// shift/reflection transitions from the level-0 seeds ([1],[1]).
std::pair<SymbolBlock, SymbolBlock> orbit_block(const mcf::DigitSequence& digits, int k,
                                                std::int64_t cap = kDefaultBlockCap);

// Renormalization scalars at one level: block lengths, parities, position
// sums s_k(i) = phi_{l_k(i)}(0) and the simplification offset T_k.
struct RenormState {
    int level = 0;
    Int l0 = 1, l1 = 1;
    int eps0 = 0, eps1 = 1;
    std::int64_t s0 = 1, s1 = 1;
    std::int64_t T = -1;

    Int length(int flavor) const { return flavor == 0 ? l0 : l1; }
    std::int64_t s(int flavor) const { return flavor == 0 ? s0 : s1; }
};

RenormState initial_state();

// One digit step: length recursion, parity automaton, position transition
// s' = B(n)s (eps_k(0)=0) or A(n mod 2)s (eps_k(0)=1), and T from its
// defining trichotomy.  Cross-checks the increment identities on every call.
RenormState renorm_advance(const RenormState& state, int n_next);

// State at a given level (repeated renorm_advance from level 0).
RenormState renorm_state(const mcf::DigitSequence& digits, int k);

}  // namespace skewrat::cocycle
