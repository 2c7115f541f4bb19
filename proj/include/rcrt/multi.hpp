#pragma once

/**
 * @file multi.hpp
 * @brief Robust CRT for several integers from unordered erroneous residue
 *        sets: common-residue gap analysis, folding-residue extraction,
 *        symmetric-polynomial reconstruction with integer root search, and
 *        final per-integer estimation.
 */

#include "rcrt/core.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace rcrt {

/// N residues per modulus, unordered within each row. Rows are indexed by
/// modulus (ascending, matching the GammaModuli order).
struct ResidueTable {
    GammaModuli gm;
    std::size_t count;                   ///< N
    std::vector<std::vector<Int>> rows;  ///< rows[l] holds N residues in [0, m_l)
};

/// Validates row sizes and residue ranges.
ResidueTable make_residue_table(GammaModuli gm, std::size_t count,
                                std::vector<std::vector<Int>> rows);

/// Encodes known integers into their (exact) residue table.
ResidueTable encode_residue_table(const GammaModuli& gm, const std::vector<Int>& values);

/// Sorted distinct common residues and the location of a cyclic gap wider
/// than 2*delta.
struct CommonResidueAnalysis {
    std::vector<Int> gammas;  ///< distinct common residues, ascending in [0, gamma)
    std::size_t kappa = 0;    ///< gammas.size()
    std::size_t xi = 0;       ///< 1-based index whose cyclic successor gap is widest
    Int gap;                  ///< the wrap-aware gap value
    bool case_one = false;    ///< xi == kappa (gap wraps through gamma)
    Rat delta;
    Int gamma;
};

/// Finds the widest cyclic gap among the common residues. Requires a gap
/// exceeding 2*delta (guaranteed when max errors stay below delta and
/// delta < gamma/(4N)); otherwise throws infeasible_error saying which
/// precondition failed.
CommonResidueAnalysis analyze_common_residues(const ResidueTable& rt, const Rat& delta);

/// Shifted common residues r-hat in (-gamma, gamma) and folding residues
/// q~ in [0, M_l), both aligned index-for-index with the input rows.
struct FoldingTable {
    std::vector<std::vector<Int>> shifted;  ///< r-hat per row/column
    std::vector<std::vector<Int>> folding;  ///< q~ per row/column
};

FoldingTable shift_common_residues(const CommonResidueAnalysis& analysis,
                                   const ResidueTable& rt);

/// Intermediates of the symmetric-polynomial reconstruction.
struct SymmetricProfile {
    Int sum_folding;    ///< S_1 = sum of folding numbers (sign-recovered)
    Rat center;         ///< q~ = S_1 / N, exact rational
    Int scale;          ///< 1 when N | S_1, otherwise N (integer lattice scale)
    Int lattice_shift;  ///< lattice value = scale * q - lattice_shift
    std::vector<Int> elementary;  ///< e_1..e_N of the lattice values
    std::vector<Int> polynomial;  ///< monic coefficients of P(x), leading first
    std::vector<std::vector<Int>> power_sum_residues;  ///< [k-1][l], diagnostics
    std::vector<Int> power_sums_signed;  ///< CRT-signed S_k, diagnostics
    bool newton_consistent = false;      ///< Newton recurrence cross-check
    bool bound_check_ok = false;         ///< |e_k| within the symmetric bound
    Int root_spread;                     ///< observed max - min of folding values
};

struct SymmetricGcrtOutput {
    SymmetricProfile profile;
    std::vector<Int> folding_values;  ///< the recovered multiset, ascending
};

/// Recovers the folding-number multiset by per-modulus symmetric values,
/// CRT with sign, and bounded integer root search.
/// Throws decode_failure when the polynomial does not split over the
/// integers into N roots (dynamic-range condition violated).
SymmetricGcrtOutput symmetric_gcrt(const FoldingTable& ft, const GammaModuli& gm,
                                   std::size_t count);

struct GrcrtResult {
    std::vector<Int> estimates;  ///< ascending
    std::vector<Int> folding;    ///< per estimate
    /// Per estimate, the matched shifted common residues, one per modulus.
    std::vector<std::vector<Int>> matched_shifted;
    /// Per estimate, the source column per modulus in the input rows.
    std::vector<std::vector<std::size_t>> matched_columns;
    CommonResidueAnalysis analysis;
    SymmetricProfile profile;
    std::vector<std::string> diagnostics;
};

/// Full pipeline: analyze -> shift -> symmetric reconstruction -> residue
/// matching -> per-integer averaging. Repeated residues within a row raise
/// repeated_residue_error (that regime's capacity bound is reported, the
/// decoder for it is not built). Matching with zero or several consistent
/// outcomes raises ambiguity_error.
GrcrtResult grcrt_decode(const ResidueTable& rt, const Rat& delta);

/// Dynamic-range feasibility report for a planned instance.
struct RangeCheckReport {
    Rat d_bound;      ///< (B + 2*delta + gamma)/gamma + 1
    Rat sum_clause;   ///< floor((sum X + delta)/gamma) + 2N
    bool sum_ok = false;
    std::vector<Rat> power_clauses;  ///< 2*C(N,k)*((B+2*delta+gamma)/(2*gamma))^k, k=2..N
    std::vector<bool> power_ok;
    Int repeated_residue_bound;  ///< prod of the first ceil(L/N) parts (reported only)
    bool pass = false;
};

RangeCheckReport dynamic_range_check(std::size_t count, const Int& bandwidth,
                                     const Rat& delta, const GammaModuli& gm,
                                     const Int& sum_x);

/// Exact check of the symmetric bound |e_V| <= C(N,V) (d/2)^V for zero-sum
/// values with spread at most d. Throws domain_error when the preconditions
/// fail; returns true when every bound holds.
bool symmetric_bound_check(const std::vector<Rat>& values, const Rat& d);

}  // namespace rcrt
