#include "rcrt/single.hpp"

#include "rcrt/range.hpp"

#include <algorithm>

namespace rcrt {

namespace {

/// ceil(delta4/4) - 1: the per-component grid radius from section-V's
/// ceiling convention.
Int grid_radius(const Int& delta4) {
    Int ceil_delta = floor_div(delta4 + 3, Int(4));
    return ceil_delta - 1;
}

Int anchor_below(const ModulusSet& ms, const Int& x) {
    // Largest multiple of any modulus that is <= x (0 counts).
    Int best_res = mod_floor(x, ms.modulus(0));
    for (std::size_t l = 1; l < ms.size(); ++l) {
        Int r = mod_floor(x, ms.modulus(l));
        if (r < best_res) best_res = r;
    }
    return x - best_res;
}

}  // namespace

ErrorList build_error_list(const ModulusSet& ms, const Int& delta4,
                           const ListBuildOptions& opt) {
    if (delta4 < 1) throw domain_error("build_error_list: delta4 must be >= 1");
    ErrorList el;
    el.moduli = ms.moduli();
    el.delta4 = delta4;
    el.alpha_radius = grid_radius(delta4);

    const std::size_t L = ms.size();
    const Int radius = el.alpha_radius;
    const Int per_axis = 2 * radius + 1;
    el.tau = boost::multiprecision::pow(per_axis, static_cast<unsigned>(L));
    if (el.tau > Int(opt.max_entries))
        throw budget_error("build_error_list: tau = " + el.tau.str() +
                           " exceeds list budget " + std::to_string(opt.max_entries));

    std::vector<Int> alpha(L, -radius);
    std::vector<ErrorListEntry> raw;
    raw.reserve(static_cast<std::size_t>(el.tau));
    while (true) {
        ResidueVector rv;
        rv.parent = &ms;
        rv.residues.reserve(L);
        for (std::size_t l = 0; l < L; ++l)
            rv.residues.push_back(mod_floor(alpha[l], ms.modulus(l)));
        try {
            raw.push_back({crt_reconstruct(rv), {alpha}});
        } catch (const inconsistent_residues_error&) {
            ++el.skipped_inconsistent;  // non-coprime moduli only
        }
        // odometer increment
        std::size_t pos = 0;
        while (pos < L && alpha[pos] == radius) alpha[pos++] = -radius;
        if (pos == L) break;
        ++alpha[pos];
    }

    std::sort(raw.begin(), raw.end(),
              [](const ErrorListEntry& a, const ErrorListEntry& b) {
                  return a.value < b.value;
              });
    // Collapse duplicate CRT images, keeping every generating vector.
    for (auto& entry : raw) {
        if (!el.entries.empty() && el.entries.back().value == entry.value)
            el.entries.back().alphas.push_back(std::move(entry.alphas.front()));
        else
            el.entries.push_back(std::move(entry));
    }
    return el;
}

DecodeResult search_decode(const ErrorList& el, const ModulusSet& ms,
                           const ResidueVector& noisy, const Int& K) {
    if (el.moduli != ms.moduli())
        throw domain_error("search_decode: error list built for different moduli");
    if (K < 0 || K >= ms.lcm())
        throw domain_error("search_decode: K must satisfy 0 <= K < lcm");

    DecodeResult res;
    const Int x_tilde = crt_reconstruct(noisy);

    // Hits are entries with <X~ - E> mod lcm in [0, K]; the window wraps so
    // that near-origin hypotheses reached through negative errors are found.
    std::uint64_t comparisons = 0;
    auto scan_range = [&](const Int& from, const Int& to, const Int& shift,
                          Int& sum, std::vector<Int>& candidates) {
        auto first = std::lower_bound(el.entries.begin(), el.entries.end(), from,
                                      [&](const ErrorListEntry& e, const Int& v) {
                                          ++comparisons;
                                          return e.value < v;
                                      });
        for (auto it = first; it != el.entries.end(); ++it) {
            ++comparisons;
            if (it->value > to) break;
            candidates.push_back(x_tilde - it->value + shift);
            sum += candidates.back();
        }
    };

    Int sum = 0;
    std::vector<Int> candidates;
    const Int lo = x_tilde - K;
    if (lo >= 0) {
        scan_range(lo, x_tilde, 0, sum, candidates);
    } else {
        scan_range(0, x_tilde, 0, sum, candidates);
        scan_range(lo + ms.lcm(), ms.lcm() - 1, ms.lcm(), sum, candidates);
    }
    res.comparisons = comparisons;
    res.matches = candidates.size();
    if (candidates.empty())
        throw decode_failure(
            "search_decode: no error-list entry matches; the residue error "
            "exceeded the bound or K exceeds the capacity for delta4 = " +
            el.delta4.str());
    // Candidates from a single line differ by at most twice the grid
    // radius. A wider spread means the observation is feasible for two
    // lines at minimum distance (possible only when wrapped errors cross
    // the range boundary); refuse instead of averaging across the gap.
    {
        auto [lo_it, hi_it] = std::minmax_element(candidates.begin(), candidates.end());
        if (*hi_it - *lo_it > 2 * el.alpha_radius)
            throw ambiguity_error(
                "search_decode: observation is consistent with two "
                "reconstruction lines (candidates " + lo_it->str() + " and " +
                hi_it->str() + "); boundary wrap at this K and delta4");
    }
    // Mean of the hits; an exact half rounds toward the CRT value, the
    // zero-error hypothesis, so clean inputs decode exactly.
    Rat mean(sum, Int(candidates.size()));
    Int low = rat_floor(mean);
    if (mean - Rat(low) == Rat(1, 2)) {
        Int d_low = boost::multiprecision::abs(low - x_tilde);
        Int d_high = boost::multiprecision::abs(low + 1 - x_tilde);
        res.estimate = d_low <= d_high ? low : low + 1;
    } else {
        res.estimate = round_half_up(mean);
    }
    // Candidates normally share one diagonal line; near a line boundary a
    // wrapped subtraction can admit a stray hit, so report the candidate
    // line closest to the noisy vector in the shift metric.
    Int best_rho = -1;
    for (const Int& cand : candidates) {
        Int cand_anchor = anchor_below(ms, cand);
        Int rho = shift_rho(noisy, residue_vector(cand_anchor, ms)).value;
        if (best_rho < 0 || rho < best_rho) {
            best_rho = rho;
            res.anchor = cand_anchor;
        }
    }
    return res;
}

DecodeResult closed_form_rcrt(const GammaModuli& gm, const ResidueVector& noisy) {
    const ModulusSet& ms = gm.derived();
    if (noisy.parent == nullptr || !(*noisy.parent == ms))
        throw domain_error("closed_form_rcrt: residue vector over different moduli");
    const std::size_t L = ms.size();
    const Int& m1 = ms.modulus(0);
    const Int& r1 = noisy[0];

    // Folding number of the reference modulus, residue by residue:
    // round((r~_l - r~_1)/gcd) recovers (r_l - r_1)/gcd, and
    // k_1 * (m_1/gcd) is congruent to it modulo m_l/gcd.
    Int k1 = 0, modulus = 1;
    for (std::size_t l = 1; l < L; ++l) {
        const Int& g = ms.pairwise_gcd(0, l);
        Int step = ms.modulus(l) / g;
        Int reduced_m1 = m1 / g;
        Int diff = round_half_up(Rat(noisy[l] - r1, g));
        Int inv;
        try {
            inv = mod_inverse(reduced_m1, step);
        } catch (const domain_error&) {
            throw decode_failure(
                "closed_form_rcrt: reference modulus not invertible modulo m_" +
                std::to_string(l + 1) + "/gcd; moduli are not gamma-factored");
        }
        Int residue = mod_floor(diff * inv, step);
        // merge into the running CRT solution for k_1
        Int mg = boost::multiprecision::gcd(modulus, step);
        if (mod_floor(residue - k1, mg) != 0)
            throw decode_failure(
                "closed_form_rcrt: rounded residue differences are inconsistent; "
                "the error bound |dr_1 - dr_l| < gcd/2 was exceeded");
        Int t = mod_floor((residue - k1) / mg * mod_inverse(modulus / mg, step / mg),
                          step / mg);
        k1 += modulus * t;
        modulus = modulus / mg * step;
        k1 = mod_floor(k1, modulus);
    }

    // Per-modulus candidates k_l m_l + r~_l all estimate X; average them.
    const Int x_ref = k1 * m1 + r1;
    Int sum = 0;
    for (std::size_t l = 0; l < L; ++l) {
        Int k_l = l == 0 ? k1 : round_half_up(Rat(x_ref - noisy[l], ms.modulus(l)));
        sum += k_l * ms.modulus(l) + noisy[l];
    }
    DecodeResult res;
    res.estimate = round_half_up(Rat(sum, Int(L)));
    if (res.estimate < 0 || res.estimate >= ms.lcm())
        throw decode_failure("closed_form_rcrt: estimate " + res.estimate.str() +
                             " outside [0, lcm); error bound exceeded");
    res.anchor = anchor_below(ms, res.estimate);
    return res;
}

}  // namespace rcrt
