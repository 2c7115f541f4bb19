#pragma once

/**
 * @file single.hpp
 * @brief Robust reconstruction of one integer from erroneous residues: the
 *        precomputed error-list search decoder and the closed-form
 *        folding-number decoder for gamma-factored moduli.
 */

#include "rcrt/core.hpp"

#include <cstdint>
#include <vector>

namespace rcrt {

struct ErrorListEntry {
    Int value;                             ///< E = CRT image of the error vector, in [0, lcm)
    std::vector<std::vector<Int>> alphas;  ///< generating error vectors (usually one)
};

/// Sorted CRT images of every componentwise-bounded error vector.
/// Immutable after construction; shareable across decode calls.
struct ErrorList {
    std::vector<Int> moduli;
    Int delta4;        ///< Delta = 4*delta the list was built for
    Int alpha_radius;  ///< per-component grid radius ceil(delta) - 1
    Int tau;           ///< grid size (2*ceil(delta) - 1)^L
    std::vector<ErrorListEntry> entries;  ///< sorted by value
    /// Error vectors with no CRT image (possible only for non-coprime moduli).
    std::uint64_t skipped_inconsistent = 0;
};

struct ListBuildOptions {
    std::uint64_t max_entries = 10'000'000;
};

/// Enumerates all integer vectors with |alpha_l| <= ceil(delta) - 1 where
/// delta = delta4/4, CRT-maps each, and returns the sorted list.
/// Throws budget_error (reporting tau) when the grid exceeds the budget.
ErrorList build_error_list(const ModulusSet& ms, const Int& delta4,
                           const ListBuildOptions& opt = {});

struct DecodeResult {
    Int estimate;               ///< X-hat
    Int anchor;                 ///< largest element of M(K) on the decoded line
    std::size_t matches = 0;    ///< error-list hits (search decoder only)
    std::uint64_t comparisons = 0;  ///< integer comparisons spent in the search
};

/// Search decoder: CRT the noisy vector, binary-search the list for all
/// E with 0 <= X~ - E <= K, and average the hits.
/// Throws decode_failure when no entry matches (error bound violated or K
/// too large) and propagates CRT inconsistency for non-coprime moduli.
DecodeResult search_decode(const ErrorList& el, const ModulusSet& ms,
                           const ResidueVector& noisy, const Int& K);

/// Closed-form decoder for gamma-factored moduli: recovers the folding
/// number of the smallest modulus from rounded residue differences, then
/// averages the per-modulus candidates.
/// Requires |dr_1 - dr_l| < gcd(m_1, m_l)/2; guaranteed when
/// max|dr_l| < gamma/4.
DecodeResult closed_form_rcrt(const GammaModuli& gm, const ResidueVector& noisy);

}  // namespace rcrt
