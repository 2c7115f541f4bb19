#pragma once

/**
 * @file range.hpp
 * @brief Shift pseudo metric, the minimum-distance function Delta(K) = 4*delta(K),
 *        the dynamic-range staircase, the two-moduli recursion, and the
 *        capacity bounds.
 *
 * Everything here works on the Delta = 4*delta integer scale; delta itself is
 * the rational Delta/4.
 */

#include "rcrt/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rcrt {

/// Value of the shift pseudo metric; integer-valued on residue vectors.
struct MetricValue {
    Int value;
};

/// rho(x, y) = max over modulus pairs (l, j) of
/// |(<X>_l - <X>_j) - (<Y>_l - <Y>_j)|.
/// Throws domain_error when the vectors belong to different modulus sets.
MetricValue shift_rho(const ResidueVector& x, const ResidueVector& y);

struct ProfileStep {
    Int K;       ///< minimal K at which this distance first appears
    Int delta4;  ///< Delta = 4*delta, a positive integer
};

struct RangeProfile {
    std::vector<Int> moduli;
    Int lcm;
    std::vector<ProfileStep> steps;  ///< K strictly increasing, Delta strictly decreasing
    /// Non-fatal findings (e.g. recursion/scan cross-check mismatches).
    std::vector<std::string> diagnostics;
};

struct ScanOptions {
    /// Maximum number of scanned integers before a budget_error is raised.
    std::uint64_t budget = 100'000'000;
};

/// Delta(K) = min over X in [m_0, K] of max_l <X>_{m_l}.
/// Requires m_0 <= K < lcm.
Int min_distance(const ModulusSet& ms, const Int& K, const ScanOptions& opt = {});

/// Full staircase {(K_n, Delta_n)} for K < lcm. Two moduli use the
/// closed-form recursion (cross-checked against the scan when cheap);
/// three or more use a single linear scan.
RangeProfile range_profile(const ModulusSet& ms, const ScanOptions& opt = {});

/// Closed-form recursion for exactly two moduli:
///   Delta_{n+1} = <Delta_{n-1}> mod Delta_n,
///   K_{n+1} = K_{n-1} + (K_n - Delta_n) * floor(Delta_{n-1} / Delta_n),
/// seeded Delta_0 = m2, Delta_1 = m1, K_0 = m2, K_1 = m1, K_2 = m2.
/// Terminates when the next Delta would be 0 (K reaches lcm).
RangeProfile two_moduli_recursion(const Int& m1, const Int& m2);

/// Largest K < lcm with Delta(K) >= delta4, computed by the pointwise scan:
/// K = x - 1 for the first x >= m_0 whose residues are all < delta4.
/// Requires 1 <= delta4 <= m_0.
Int capacity_for_delta(const ModulusSet& ms, const Int& delta4, const ScanOptions& opt = {});

struct CapacityBounds {
    Int lower;                 ///< ceil(lcm^(1/delta4))
    std::optional<Int> upper;  ///< floor(prod p / (1 + 2*delta)^L), prime moduli only
};

/// Analytic capacity estimates; the upper bound is present only when every
/// modulus is prime.
CapacityBounds capacity_bounds(const ModulusSet& ms, const Int& delta4);

/// Deterministic primality check (trial division; desk-scale inputs).
bool is_prime(const Int& n);

}  // namespace rcrt
