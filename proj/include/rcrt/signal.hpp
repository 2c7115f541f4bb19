#pragma once

/**
 * @file signal.hpp
 * @brief Undersampled multi-tone harness: waveform synthesis, per-rate DFT
 *        residue extraction, error injection, and end-to-end frequency
 *        estimation through the multi-integer decoder.
 *
 * The DFT is the only floating-point surface in the library; peak
 * extraction emits integer bin indices, and everything downstream is exact.
 */

#include "rcrt/multi.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace rcrt {

struct ToneSpec {
    std::vector<Int> frequencies;                  ///< distinct positive integers (Hz)
    std::vector<std::complex<double>> amplitudes;  ///< nonzero, one per tone
    /// Samples per rate; 0 means "one period", i.e. m_l samples at rate m_l.
    std::size_t duration = 0;
};

enum class NoiseMode {
    exact,                 ///< noiseless DFT extraction
    residue_perturbation,  ///< exact residues plus bounded integer errors
    additive_complex,      ///< complex Gaussian noise added to the waveform
};

struct NoiseSpec {
    NoiseMode mode = NoiseMode::exact;
    Int delta4 = 0;     ///< perturbation mode: errors uniform in [-delta4/4, delta4/4]
    double sigma = 0.0; ///< additive mode: per-component noise deviation
    std::uint64_t seed = 0;
};

/// Samples the waveform at every modulus rate, runs the m_l-point DFT, and
/// returns the N largest-magnitude bins per rate (ties to the lowest bin)
/// as the residue table. Keep |A_i| >= 10*sigma; a selected bin whose
/// magnitude falls below half the weakest coherent peak raises
/// repeated_residue_error (bin collision or peak miss).
ResidueTable sample_and_extract(const ToneSpec& ts, const GammaModuli& gm,
                                const NoiseSpec& ns);

/// Applies explicit per-entry residue errors (wrapping within each modulus);
/// deltas[l][i] is added to rows[l][i]. Utility for replaying fixed
/// error patterns and for the perturbation mode.
ResidueTable apply_residue_errors(const ResidueTable& exact,
                                  const std::vector<std::vector<Int>>& deltas);

struct EstimationResult {
    bool decoded = false;
    GrcrtResult decode;           ///< valid when decoded
    std::vector<Int> abs_errors;  ///< |estimate - truth| per sorted frequency
    bool success = false;         ///< decoded and every error <= delta
    std::string failed_stage;     ///< "sample_and_extract" or "grcrt_decode"
    std::string failure_message;
};

/// Full pipeline with stage-attributed failures reported in the result
/// rather than thrown.
EstimationResult estimate_frequencies(const ToneSpec& ts, const GammaModuli& gm,
                                      const NoiseSpec& ns, const Rat& delta);

}  // namespace rcrt
