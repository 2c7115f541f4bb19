#pragma once

/**
 * @file ints.hpp
 * @brief Unbounded integer/rational aliases and the small number-theory
 *        helpers (floor division, extended gcd, integer roots) used
 *        throughout the library.
 *
 * All reconstruction code works on exact integers; products of moduli
 * overflow 64 bits in realistic parameter sweeps, so the public types are
 * arbitrary precision.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcrt {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Error hierarchy. Each class maps to a distinct CLI message prefix.
// ---------------------------------------------------------------------------

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Modulus outside [1, inf).
struct invalid_modulus_error : error {
    using error::error;
};

/// Residues disagree modulo a pairwise gcd; carries the violating pair.
struct inconsistent_residues_error : error {
    std::size_t index_l, index_j;
    inconsistent_residues_error(const std::string& msg, std::size_t l, std::size_t j)
        : error(msg), index_l(l), index_j(j) {}
};

/// Argument outside an operation's documented domain.
struct domain_error : error {
    using error::error;
};

/// A configured scan/memory budget was exceeded.
struct budget_error : error {
    using error::error;
};

/// A decoder could not produce an estimate (error bound exceeded, hit
/// count zero, or recovered intermediates failed a consistency check).
struct decode_failure : error {
    using error::error;
};

/// No common-residue gap wider than 2*delta exists.
struct infeasible_error : error {
    using error::error;
};

/// Residue-to-root matching admitted zero or several consistent outcomes.
struct ambiguity_error : error {
    using error::error;
};

/// Two integers collide in some residue set; the repeated-residue decoding
/// regime is reported but not implemented.
struct repeated_residue_error : error {
    using error::error;
};

// ---------------------------------------------------------------------------
// Integer helpers
// ---------------------------------------------------------------------------

/// Floor division: largest q with q*m <= x. m > 0 required.
inline Int floor_div(const Int& x, const Int& m) {
    Int q = x / m;
    if (x % m != 0 && ((x < 0) != (m < 0))) --q;
    return q;
}

/// x mod m with result in [0, m). m > 0 required.
inline Int mod_floor(const Int& x, const Int& m) {
    Int r = x % m;
    if (r < 0) r += m;
    return r;
}

/// Extended gcd: returns g = gcd(a, b) and x, y with a*x + b*y = g.
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    Int old_r = a, r = b;
    Int old_x = 1, cur_x = 0;
    Int old_y = 0, cur_y = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int t = old_r - q * r; old_r = r; r = t;
        t = old_x - q * cur_x; old_x = cur_x; cur_x = t;
        t = old_y - q * cur_y; old_y = cur_y; cur_y = t;
    }
    x = old_x;
    y = old_y;
    return old_r < 0 ? Int(-old_r) : old_r;
}

/// Inverse of a modulo m; throws domain_error when gcd(a, m) != 1.
inline Int mod_inverse(const Int& a, const Int& m) {
    Int x, y;
    Int g = ext_gcd(mod_floor(a, m), m, x, y);
    if (g != 1) throw domain_error("mod_inverse: arguments are not coprime");
    return mod_floor(x, m);
}

/// Floor of the k-th root of n >= 0.
inline Int iroot_floor(const Int& n, unsigned k) {
    if (n < 0) throw domain_error("iroot_floor: negative radicand");
    if (k == 0) throw domain_error("iroot_floor: zeroth root");
    if (n == 0 || n == 1 || k == 1) return n;
    Int lo = 1, hi = 1;
    while (boost::multiprecision::pow(hi, k) <= n) hi <<= 1;
    // invariant: lo^k <= n < hi^k
    while (hi - lo > 1) {
        Int mid = (lo + hi) / 2;
        if (boost::multiprecision::pow(mid, k) <= n) lo = mid; else hi = mid;
    }
    return lo;
}

/// floor(x) for rationals.
inline Int rat_floor(const Rat& x) {
    return floor_div(boost::multiprecision::numerator(x),
                     boost::multiprecision::denominator(x));
}

/// [x] = floor(x + 1/2), the round-half-up convention used by every
/// estimator in the library.
inline Int round_half_up(const Rat& x) {
    return rat_floor(x + Rat(1, 2));
}

inline std::string to_string(const Int& v) { return v.str(); }

/// Exact decimal ("34") when integral, otherwise "num/den".
inline std::string to_string(const Rat& v) {
    const Int num = boost::multiprecision::numerator(v);
    const Int den = boost::multiprecision::denominator(v);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

/// Parses "123", "-4", "a/b", or a plain decimal like "2.75".
Rat parse_rational(const std::string& text);

/// Parses a decimal integer string (optional sign).
Int parse_int(const std::string& text);

/// Binomial coefficient C(n, k) as an exact integer.
inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline Int factorial(unsigned n) {
    Int r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace rcrt
