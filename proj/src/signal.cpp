#include "rcrt/signal.hpp"

#include "rcrt/rng.hpp"

#include <algorithm>
#include <cmath>

namespace rcrt {

namespace {

constexpr std::uint64_t kDftRateLimit = 100000;

void validate_tones(const ToneSpec& ts) {
    if (ts.frequencies.empty()) throw domain_error("ToneSpec: no frequencies");
    if (ts.amplitudes.size() != ts.frequencies.size())
        throw domain_error("ToneSpec: one amplitude per frequency required");
    for (const Int& f : ts.frequencies)
        if (f < 1) throw domain_error("ToneSpec: frequencies must be positive integers");
    for (std::size_t i = 0; i < ts.frequencies.size(); ++i)
        for (std::size_t j = i + 1; j < ts.frequencies.size(); ++j)
            if (ts.frequencies[i] == ts.frequencies[j])
                throw domain_error("ToneSpec: duplicate frequency " +
                                   ts.frequencies[i].str());
    for (const auto& a : ts.amplitudes)
        if (std::abs(a) == 0.0) throw domain_error("ToneSpec: zero amplitude");
}

/// Gaussian pair via Box-Muller on the deterministic generator.
std::complex<double> gaussian_complex(DetRng& rng, double sigma) {
    double u1 = rng.unit();
    while (u1 == 0.0) u1 = rng.unit();
    double u2 = rng.unit();
    double mag = std::sqrt(-2.0 * std::log(u1));
    return {sigma * mag * std::cos(2.0 * M_PI * u2),
            sigma * mag * std::sin(2.0 * M_PI * u2)};
}

std::vector<Int> extract_peaks_for_rate(const ToneSpec& ts, const Int& modulus,
                                        std::size_t count, double sigma, DetRng& rng) {
    if (modulus > Int(kDftRateLimit))
        throw domain_error("sample_and_extract: rate " + modulus.str() +
                           " too large for the DFT harness; use residue perturbation");
    const std::size_t m = modulus.convert_to<std::size_t>();
    if (ts.duration != 0 && ts.duration < m)
        throw domain_error("sample_and_extract: duration shorter than rate " +
                           modulus.str());

    // One period of the undersampled waveform. Tones are integer-frequency,
    // so only the residue bins carry energy.
    std::vector<std::complex<double>> x(m);
    std::vector<double> phase_step(ts.frequencies.size());
    for (std::size_t i = 0; i < ts.frequencies.size(); ++i)
        phase_step[i] =
            2.0 * M_PI * mod_floor(ts.frequencies[i], modulus).convert_to<double>() /
            static_cast<double>(m);
    for (std::size_t n = 0; n < m; ++n) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < ts.frequencies.size(); ++i) {
            double ph = phase_step[i] * static_cast<double>(n);
            acc += ts.amplitudes[i] * std::complex<double>(std::cos(ph), std::sin(ph));
        }
        if (sigma > 0.0) acc += gaussian_complex(rng, sigma);
        x[n] = acc;
    }

    // m-point DFT magnitudes
    std::vector<double> mag(m);
    for (std::size_t k = 0; k < m; ++k) {
        std::complex<double> acc{0.0, 0.0};
        double w = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m);
        for (std::size_t n = 0; n < m; ++n)
            acc += x[n] * std::complex<double>(std::cos(w * static_cast<double>(n)),
                                               std::sin(w * static_cast<double>(n)));
        mag[k] = std::abs(acc);
    }

    // N largest bins, ties to the lowest index
    std::vector<std::size_t> bins(m);
    for (std::size_t k = 0; k < m; ++k) bins[k] = k;
    std::partial_sort(bins.begin(), bins.begin() + static_cast<std::ptrdiff_t>(count),
                      bins.end(), [&](std::size_t a, std::size_t b) {
                          if (mag[a] != mag[b]) return mag[a] > mag[b];
                          return a < b;
                      });

    double weakest = std::abs(ts.amplitudes[0]);
    for (const auto& a : ts.amplitudes) weakest = std::min(weakest, std::abs(a));
    const double floor_mag = 0.5 * weakest * static_cast<double>(m);
    std::vector<Int> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (mag[bins[i]] < floor_mag)
            throw repeated_residue_error(
                "sample_and_extract: fewer than " + std::to_string(count) +
                " distinguishable peaks at rate " + modulus.str() +
                " (bin collision or peak miss)");
        out.push_back(Int(bins[i]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

ResidueTable apply_residue_errors(const ResidueTable& exact,
                                  const std::vector<std::vector<Int>>& deltas) {
    if (deltas.size() != exact.rows.size())
        throw domain_error("apply_residue_errors: one delta row per modulus required");
    std::vector<std::vector<Int>> rows(exact.rows.size());
    for (std::size_t l = 0; l < exact.rows.size(); ++l) {
        if (deltas[l].size() != exact.rows[l].size())
            throw domain_error("apply_residue_errors: delta row size mismatch");
        const Int& m = exact.gm.derived().modulus(l);
        rows[l].reserve(exact.rows[l].size());
        for (std::size_t i = 0; i < exact.rows[l].size(); ++i)
            rows[l].push_back(mod_floor(exact.rows[l][i] + deltas[l][i], m));
    }
    return make_residue_table(exact.gm, exact.count, std::move(rows));
}

ResidueTable sample_and_extract(const ToneSpec& ts, const GammaModuli& gm,
                                const NoiseSpec& ns) {
    validate_tones(ts);
    const std::size_t n = ts.frequencies.size();

    if (ns.mode == NoiseMode::residue_perturbation) {
        ResidueTable exact = encode_residue_table(gm, ts.frequencies);
        const Int bound = ns.delta4 / 4;  // |error| <= floor(delta)
        DetRng rng(ns.seed);
        std::vector<std::vector<Int>> deltas(exact.rows.size());
        const std::int64_t b = bound.convert_to<std::int64_t>();
        for (std::size_t l = 0; l < exact.rows.size(); ++l) {
            deltas[l].reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                Int e = b == 0 ? Int(0) : Int(rng.range(-b, b));
                // injection bound holds by construction
                if (4 * boost::multiprecision::abs(e) > ns.delta4)
                    throw error("sample_and_extract: injected error exceeds delta");
                deltas[l].push_back(e);
            }
        }
        ResidueTable noisy = apply_residue_errors(exact, deltas);
        for (auto& row : noisy.rows) std::sort(row.begin(), row.end());
        return noisy;
    }

    const double sigma = ns.mode == NoiseMode::additive_complex ? ns.sigma : 0.0;
    if (sigma < 0.0) throw domain_error("sample_and_extract: negative sigma");
    DetRng rng(ns.seed);
    std::vector<std::vector<Int>> rows;
    rows.reserve(gm.size());
    for (std::size_t l = 0; l < gm.size(); ++l)
        rows.push_back(
            extract_peaks_for_rate(ts, gm.derived().modulus(l), n, sigma, rng));
    return make_residue_table(gm, n, std::move(rows));
}

EstimationResult estimate_frequencies(const ToneSpec& ts, const GammaModuli& gm,
                                      const NoiseSpec& ns, const Rat& delta) {
    EstimationResult res;
    ResidueTable table{gm, 0, {}};
    try {
        table = sample_and_extract(ts, gm, ns);
    } catch (const error& e) {
        res.failed_stage = "sample_and_extract";
        res.failure_message = e.what();
        return res;
    }
    try {
        res.decode = grcrt_decode(table, delta);
    } catch (const error& e) {
        res.failed_stage = "grcrt_decode";
        res.failure_message = e.what();
        return res;
    }
    res.decoded = true;

    std::vector<Int> truth(ts.frequencies);
    std::sort(truth.begin(), truth.end());
    res.abs_errors.reserve(truth.size());
    res.success = true;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        Int err = boost::multiprecision::abs(res.decode.estimates[i] - truth[i]);
        res.abs_errors.push_back(err);
        if (Rat(err) > delta) res.success = false;
    }
    return res;
}

}  // namespace rcrt
