#include "rcrt/range.hpp"

#include <algorithm>
#include <limits>

namespace rcrt {

MetricValue shift_rho(const ResidueVector& x, const ResidueVector& y) {
    if (x.parent == nullptr || y.parent == nullptr)
        throw domain_error("shift_rho: residue vector without parent set");
    if (!(*x.parent == *y.parent))
        throw domain_error("shift_rho: vectors over different modulus sets");
    const std::size_t n = x.size();
    Int best = 0;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = l + 1; j < n; ++j) {
            Int d = (x[l] - x[j]) - (y[l] - y[j]);
            if (d < 0) d = -d;
            if (d > best) best = d;
        }
    return MetricValue{best};
}

namespace {

bool fits_u64(const Int& v) {
    return v >= 0 && v <= Int(std::numeric_limits<std::uint64_t>::max());
}

// Incremental residue walker: one add + compare per modulus per step, no
// divisions inside the loop. The u64 specialization carries the long scans
// (profiles over lcm up to the budget); the Int fallback handles moduli
// beyond 64 bits.
template <typename T>
struct ResidueWalker {
    std::vector<T> m;
    std::vector<T> r;

    ResidueWalker(const ModulusSet& ms, const Int& start) {
        m.reserve(ms.size());
        r.reserve(ms.size());
        for (std::size_t l = 0; l < ms.size(); ++l) {
            m.push_back(static_cast<T>(ms.modulus(l)));
            r.push_back(static_cast<T>(mod_floor(start, ms.modulus(l))));
        }
    }

    void step() {
        for (std::size_t l = 0; l < m.size(); ++l) {
            ++r[l];
            if (r[l] == m[l]) r[l] = 0;
        }
    }

    T max_residue() const {
        T best = r[0];
        for (std::size_t l = 1; l < r.size(); ++l)
            if (r[l] > best) best = r[l];
        return best;
    }

    bool all_below(const T& bound) const {
        for (const T& v : r)
            if (v >= bound) return false;
        return true;
    }
};

template <typename T>
Int min_distance_scan(const ModulusSet& ms, const Int& K) {
    ResidueWalker<T> w(ms, ms.smallest());
    T best = w.max_residue();
    const T end = static_cast<T>(K);
    for (T x = static_cast<T>(ms.smallest()); x < end; ++x) {
        w.step();
        T cur = w.max_residue();
        if (cur < best) best = cur;
    }
    return Int(best);
}

template <typename T>
std::vector<ProfileStep> profile_scan(const ModulusSet& ms) {
    std::vector<ProfileStep> steps;
    ResidueWalker<T> w(ms, ms.smallest());
    T best = w.max_residue();
    steps.push_back({ms.smallest(), Int(best)});
    const T end = static_cast<T>(ms.lcm());  // exclusive
    for (T x = static_cast<T>(ms.smallest()) + 1; x < end; ++x) {
        w.step();
        T cur = w.max_residue();
        if (cur < best) {
            best = cur;
            steps.push_back({Int(x), Int(best)});
        }
    }
    return steps;
}

template <typename T>
Int capacity_scan(const ModulusSet& ms, const Int& delta4, std::uint64_t budget) {
    ResidueWalker<T> w(ms, ms.smallest());
    const T bound = static_cast<T>(delta4);
    T x = static_cast<T>(ms.smallest());
    std::uint64_t used = 0;
    // First X whose residues all drop below delta4; X = lcm qualifies, so the
    // walk terminates.
    while (!w.all_below(bound)) {
        w.step();
        ++x;
        if (++used > budget)
            throw budget_error("capacity_for_delta: scan budget exhausted after " +
                               std::to_string(budget) + " steps");
    }
    return Int(x) - 1;
}

}  // namespace

Int min_distance(const ModulusSet& ms, const Int& K, const ScanOptions& opt) {
    if (K < ms.smallest() || K >= ms.lcm())
        throw domain_error("min_distance: K must satisfy m_0 <= K < lcm");
    Int iterations = K - ms.smallest() + 1;
    if (iterations > Int(opt.budget))
        throw budget_error("min_distance: scan of " + iterations.str() +
                           " integers exceeds budget " + std::to_string(opt.budget));
    if (fits_u64(ms.lcm())) return min_distance_scan<std::uint64_t>(ms, K);
    return min_distance_scan<Int>(ms, K);
}

RangeProfile range_profile(const ModulusSet& ms, const ScanOptions& opt) {
    RangeProfile profile;
    profile.moduli = ms.moduli();
    profile.lcm = ms.lcm();

    if (ms.size() == 2) {
        RangeProfile rec = two_moduli_recursion(ms.modulus(0), ms.modulus(1));
        profile.steps = std::move(rec.steps);
        profile.diagnostics = std::move(rec.diagnostics);
        // Cheap lcm: cross-check the recursion against the exhaustive scan
        // and surface any disagreement instead of silently trusting either.
        if (ms.lcm() <= 2'000'000 && ms.lcm() <= Int(opt.budget)) {
            std::vector<ProfileStep> scanned = profile_scan<std::uint64_t>(ms);
            bool same = scanned.size() == profile.steps.size();
            for (std::size_t i = 0; same && i < scanned.size(); ++i)
                same = scanned[i].K == profile.steps[i].K &&
                       scanned[i].delta4 == profile.steps[i].delta4;
            if (!same)
                profile.diagnostics.push_back(
                    "two-moduli recursion disagrees with exhaustive scan; "
                    "scan result retained");
            if (!same) profile.steps = std::move(scanned);
        }
        return profile;
    }

    Int iterations = ms.lcm() - ms.smallest();
    if (iterations > Int(opt.budget))
        throw budget_error(
            "range_profile: lcm " + ms.lcm().str() + " exceeds scan budget " +
            std::to_string(opt.budget) +
            "; use the two-moduli recursion on pairs or sample min_distance at "
            "chosen K values");
    if (fits_u64(ms.lcm()))
        profile.steps = profile_scan<std::uint64_t>(ms);
    else
        profile.steps = profile_scan<Int>(ms);
    return profile;
}

RangeProfile two_moduli_recursion(const Int& m1_in, const Int& m2_in) {
    Int a = m1_in, b = m2_in;
    if (a > b) std::swap(a, b);
    if (a == b)
        throw domain_error("two_moduli_recursion: moduli must be distinct");
    if (a < 2) throw invalid_modulus_error("two_moduli_recursion: modulus must be >= 2");

    RangeProfile profile;
    profile.moduli = {a, b};
    profile.lcm = boost::multiprecision::lcm(a, b);
    profile.steps.push_back({a, a});  // K_1 = Delta_1 = m_1

    // Delta_{n+1} = <Delta_{n-1}>_{Delta_n},
    // K_{n+1} = K_{n-1} + (K_n - Delta_n) * floor(Delta_{n-1} / Delta_n),
    // seeded with (Delta_0, K_0) = (m_2, m_2) and (Delta_1, K_1) = (m_1, m_1).
    Int d_prev = b, d_cur = a;
    Int k_prev = b, k_cur = a;
    while (true) {
        Int d_next = d_prev % d_cur;
        Int k_next = k_prev + (k_cur - d_cur) * (d_prev / d_cur);
        if (d_next == 0) {
            if (k_next != profile.lcm)
                profile.diagnostics.push_back(
                    "recursion terminated at K = " + k_next.str() +
                    " instead of lcm = " + profile.lcm.str());
            break;
        }
        profile.steps.push_back({k_next, d_next});
        d_prev = d_cur; d_cur = d_next;
        k_prev = k_cur; k_cur = k_next;
    }
    return profile;
}

Int capacity_for_delta(const ModulusSet& ms, const Int& delta4, const ScanOptions& opt) {
    if (delta4 < 1) throw domain_error("capacity_for_delta: delta4 must be >= 1");
    if (delta4 > ms.smallest())
        throw domain_error("capacity_for_delta: delta4 " + delta4.str() +
                           " exceeds the smallest modulus " + ms.smallest().str() +
                           "; no positive capacity");
    if (fits_u64(ms.lcm()))
        return capacity_scan<std::uint64_t>(ms, delta4, opt.budget);
    return capacity_scan<Int>(ms, delta4, opt.budget);
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (Int d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

CapacityBounds capacity_bounds(const ModulusSet& ms, const Int& delta4) {
    if (delta4 < 1) throw domain_error("capacity_bounds: delta4 must be >= 1");
    CapacityBounds out;

    // lower = ceil(lcm^(1/delta4))
    const Int& lcm = ms.lcm();
    if (delta4 == 1) {
        out.lower = lcm;
    } else {
        Int bits = Int(boost::multiprecision::msb(lcm)) + 1;
        if (delta4 >= bits) {
            out.lower = lcm > 1 ? 2 : 1;  // lcm^(1/delta4) in (1, 2)
        } else {
            unsigned k = delta4.convert_to<unsigned>();
            Int root = iroot_floor(lcm, k);
            out.lower = boost::multiprecision::pow(root, k) == lcm ? root : root + 1;
        }
    }

    bool all_prime = true;
    for (std::size_t l = 0; l < ms.size() && all_prime; ++l)
        all_prime = is_prime(ms.modulus(l));
    if (all_prime) {
        // prod p / (1 + 2*delta)^L with delta = delta4/4, evaluated exactly:
        // floor(prod p * 2^L / (2 + delta4)^L).
        const unsigned L = static_cast<unsigned>(ms.size());
        Int num = 1;
        for (std::size_t l = 0; l < ms.size(); ++l) num *= ms.modulus(l);
        num <<= L;
        Int den = boost::multiprecision::pow(Int(2) + delta4, L);
        out.upper = num / den;
    }
    return out;
}

}  // namespace rcrt
