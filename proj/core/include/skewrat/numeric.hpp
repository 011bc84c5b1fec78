#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace skewrat {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Floor division/modulo for possibly negative numerators (b > 0).
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int mod_floor(const Int& a, const Int& b) {
    Int r = a % b;
    if (r < 0) r += (b < 0 ? -b : b);
    return r;
}

// Fractional part in [0, 1).
inline Rat frac(const Rat& x) {
    Int n = numerator(x), d = denominator(x);
    return Rat(mod_floor(n, d), d);
}

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline double to_double(const Rat& x) { return x.convert_to<double>(); }
inline double to_double(const Int& x) { return x.convert_to<double>(); }

// gcd/lcm on positive rationals, so that gcd(a,b)Z is the group generated
// by aZ + bZ and lcm(a,b)Z = aZ n bZ.  gcd(0, x) = x.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a == 0) return rat_abs(b);
    if (b == 0) return rat_abs(a);
    Int an = numerator(rat_abs(a)), ad = denominator(rat_abs(a));
    Int bn = numerator(rat_abs(b)), bd = denominator(rat_abs(b));
    return Rat(gcd(an * bd, bn * ad), ad * bd);
}

inline Rat rat_lcm(const Rat& a, const Rat& b) {
    if (a == 0 || b == 0) return Rat(0);
    return rat_abs(a * b) / rat_gcd(a, b);
}

inline std::string rat_string(const Rat& x) {
    std::string s = numerator(x).str();
    if (denominator(x) != 1) s += "/" + denominator(x).str();
    return s;
}

}  // namespace skewrat
