#include "rcrt/sympoly.hpp"

#include <algorithm>

namespace rcrt {

namespace {

template <typename V>
std::vector<V> elementary_impl(const std::vector<V>& values) {
    // e[k] accumulated by the usual one-value-at-a-time DP.
    std::vector<V> e(values.size() + 1, V(0));
    e[0] = V(1);
    std::size_t used = 0;
    for (const V& v : values) {
        ++used;
        for (std::size_t k = used; k >= 1; --k) e[k] += v * e[k - 1];
    }
    return std::vector<V>(e.begin() + 1, e.end());
}

}  // namespace

std::vector<Int> elementary_symmetric(const std::vector<Int>& values) {
    return elementary_impl<Int>(values);
}

std::vector<Rat> elementary_symmetric(const std::vector<Rat>& values) {
    return elementary_impl<Rat>(values);
}

std::vector<Int> power_sums(const std::vector<Int>& values) {
    const std::size_t n = values.size();
    std::vector<Int> s(n, Int(0));
    std::vector<Int> pw(values);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            s[k] += pw[i];
            pw[i] *= values[i];
        }
    }
    return s;
}

std::vector<Rat> elementary_from_power_sums(const std::vector<Rat>& s) {
    const std::size_t n = s.size();
    std::vector<Rat> e(n + 1, Rat(0));
    e[0] = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        Rat acc = 0;
        for (std::size_t j = 1; j <= i; ++j) {
            Rat term = s[j - 1] * e[i - j];
            if (j % 2 == 0) acc -= term; else acc += term;
        }
        e[i] = acc / Rat(Int(i));
    }
    return std::vector<Rat>(e.begin() + 1, e.end());
}

std::vector<Int> elementary_from_power_sums(const std::vector<Int>& s) {
    std::vector<Rat> rs(s.begin(), s.end());
    std::vector<Rat> re = elementary_from_power_sums(rs);
    std::vector<Int> out;
    out.reserve(re.size());
    for (const Rat& v : re) {
        if (boost::multiprecision::denominator(v) != 1)
            throw domain_error(
                "elementary_from_power_sums: non-integer value from integer power sums");
        out.push_back(boost::multiprecision::numerator(v));
    }
    return out;
}

std::vector<Int> polynomial_from_elementary(const std::vector<Int>& e) {
    std::vector<Int> coeffs;
    coeffs.reserve(e.size() + 1);
    coeffs.push_back(1);
    for (std::size_t i = 0; i < e.size(); ++i)
        coeffs.push_back(i % 2 == 0 ? Int(-e[i]) : e[i]);
    return coeffs;
}

std::vector<Int> polynomial_from_roots(const std::vector<Int>& roots) {
    return polynomial_from_elementary(elementary_symmetric(roots));
}

Int evaluate_polynomial(const std::vector<Int>& coeffs, const Int& x) {
    Int acc = 0;
    for (const Int& c : coeffs) acc = acc * x + c;
    return acc;
}

Int integer_root_bound(const std::vector<Int>& coeffs) {
    if (coeffs.empty() || coeffs[0] == 0)
        throw domain_error("integer_root_bound: leading coefficient must be nonzero");
    // |root| <= 2 * max_k |a_{n-k}/a_n|^(1/k); integer k-th roots round up.
    const Int& lead = coeffs[0];
    Int bound = 0;
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
        Int mag = boost::multiprecision::abs(coeffs[k]);
        // ceil(|a_k / lead|): any integer root of the monic-scaled polynomial
        // obeys the same bound.
        Int q = (mag + boost::multiprecision::abs(lead) - 1) /
                boost::multiprecision::abs(lead);
        Int r = iroot_floor(q, static_cast<unsigned>(k));
        if (boost::multiprecision::pow(r, static_cast<unsigned>(k)) < q) ++r;
        if (r > bound) bound = r;
    }
    return 2 * bound + 1;
}

namespace {

// Cheap single-word screen: a candidate can only be a root when the
// polynomial vanishes modulo both filter primes.
struct ModFilter {
    static constexpr std::uint64_t kP1 = 1000000007ULL;
    static constexpr std::uint64_t kP2 = 998244353ULL;
    std::vector<std::uint64_t> c1, c2;

    void rebuild(const std::vector<Int>& coeffs) {
        c1.resize(coeffs.size());
        c2.resize(coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            c1[i] = static_cast<std::uint64_t>(mod_floor(coeffs[i], Int(kP1)));
            c2[i] = static_cast<std::uint64_t>(mod_floor(coeffs[i], Int(kP2)));
        }
    }

    static bool vanishes(const std::vector<std::uint64_t>& c, std::uint64_t x,
                         std::uint64_t p) {
        std::uint64_t acc = 0;
        for (std::uint64_t v : c)
            acc = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(acc) * x + v) % p);
        return acc == 0;
    }

    bool maybe_root(const Int& cand) const {
        std::uint64_t x1 = static_cast<std::uint64_t>(mod_floor(cand, Int(kP1)));
        if (!vanishes(c1, x1, kP1)) return false;
        std::uint64_t x2 = static_cast<std::uint64_t>(mod_floor(cand, Int(kP2)));
        return vanishes(c2, x2, kP2);
    }
};

}  // namespace

std::optional<std::vector<Int>> integer_roots(const std::vector<Int>& coeffs_in) {
    if (coeffs_in.empty()) throw domain_error("integer_roots: empty polynomial");
    std::vector<Int> coeffs = coeffs_in;
    std::vector<Int> roots;
    const std::size_t degree = coeffs.size() - 1;
    roots.reserve(degree);

    // Walk candidates outward from 0; deflate on every hit and retry the same
    // candidate for multiplicities. Stops as soon as the polynomial is fully
    // deflated, so the scan normally ends near the largest root rather than
    // at the a-priori bound.
    Int bound = integer_root_bound(coeffs);
    ModFilter filter;
    filter.rebuild(coeffs);
    Int t = 0;
    while (roots.size() < degree) {
        if (t > bound) return std::nullopt;
        for (const Int& cand : {t, Int(-t)}) {
            if (cand == 0 && t != 0) continue;  // visit 0 once
            while (roots.size() < degree && filter.maybe_root(cand) &&
                   evaluate_polynomial(coeffs, cand) == 0) {
                // synthetic division by (x - cand)
                std::vector<Int> next(coeffs.size() - 1);
                Int carry = 0;
                for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) {
                    carry = carry * cand + coeffs[i];
                    next[i] = carry;
                }
                coeffs = std::move(next);
                filter.rebuild(coeffs);
                roots.push_back(cand);
            }
            if (t == 0) break;
        }
        ++t;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace rcrt
