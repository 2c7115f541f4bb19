#pragma once

/**
 * @file sympoly.hpp
 * @brief Exact symmetric-polynomial machinery: elementary symmetric values,
 *        power sums, the Newton recurrence linking them, Viete polynomial
 *        construction, and bounded integer root search with multiplicity.
 */

#include "rcrt/ints.hpp"

#include <optional>
#include <vector>

namespace rcrt {

/// e_1..e_N of the given values (e_0 = 1 omitted). O(N^2) products.
std::vector<Int> elementary_symmetric(const std::vector<Int>& values);
std::vector<Rat> elementary_symmetric(const std::vector<Rat>& values);

/// S_1..S_N with S_k = sum of k-th powers.
std::vector<Int> power_sums(const std::vector<Int>& values);

/// Newton recurrence: e_i = (1/i) * sum_{j=1..i} (-1)^(j-1) * S_j * e_{i-j}.
/// Exact over rationals; the integer overload asserts every division is exact.
std::vector<Rat> elementary_from_power_sums(const std::vector<Rat>& s);
std::vector<Int> elementary_from_power_sums(const std::vector<Int>& s);

/// Coefficients (leading first) of P(x) = sum_{i=0..N} (-1)^i e_i x^(N-i)
/// with e_0 = 1, i.e. the monic polynomial whose roots have the given
/// elementary symmetric values.
std::vector<Int> polynomial_from_elementary(const std::vector<Int>& e);

/// Coefficients of the monic polynomial prod (x - root).
std::vector<Int> polynomial_from_roots(const std::vector<Int>& roots);

/// A bound R such that every integer root of the polynomial lies in
/// [-R, R] (Fujiwara-style, computed with exact integer k-th roots).
Int integer_root_bound(const std::vector<Int>& coeffs);

/// All integer roots with multiplicity, found by bounded candidate search
/// with synthetic-division deflation. Returns nullopt unless the
/// polynomial splits completely over the integers.
std::optional<std::vector<Int>> integer_roots(const std::vector<Int>& coeffs);

/// P(x) at an integer point (Horner).
Int evaluate_polynomial(const std::vector<Int>& coeffs, const Int& x);

}  // namespace rcrt
