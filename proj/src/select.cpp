#include "rcrt/select.hpp"

#include "rcrt/range.hpp"
#include "rcrt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace rcrt {

std::vector<std::uint64_t> primes_in_interval(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) return {};
    if (lo < 2) lo = 2;
    // base primes up to sqrt(hi)
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 2;
    std::vector<bool> small(root + 1, true);
    std::vector<std::uint64_t> base;
    for (std::uint64_t p = 2; p <= root; ++p) {
        if (!small[p]) continue;
        base.push_back(p);
        for (std::uint64_t q = p * p; q <= root; q += p) small[q] = false;
    }
    std::vector<bool> seg(hi - lo + 1, true);
    for (std::uint64_t p : base) {
        std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
        for (std::uint64_t q = start; q <= hi; q += p) seg[q - lo] = false;
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = lo; v <= hi; ++v)
        if (seg[v - lo] && v >= 2) out.push_back(v);
    return out;
}

namespace {

void check_prime_set(const std::vector<Int>& primes, const Int& delta4) {
    if (primes.size() < 2) throw domain_error("prime_capacity: need at least two primes");
    for (const Int& p : primes)
        if (!is_prime(p))
            throw domain_error("prime_capacity: " + p.str() + " is not prime");
    for (std::size_t i = 0; i < primes.size(); ++i)
        for (std::size_t j = i + 1; j < primes.size(); ++j)
            if (primes[i] == primes[j])
                throw domain_error("prime_capacity: duplicate prime " + primes[i].str());
    Int smallest = *std::min_element(primes.begin(), primes.end());
    if (delta4 < 1 || delta4 >= smallest)
        throw domain_error("prime_capacity: delta4 must satisfy 1 <= delta4 < min prime");
}

// First x >= delta4 whose window [x - delta4 + 1, x] holds a multiple of
// every prime, found by jumping x to the next multiple of any prime that
// misses the window. Capped by `limit` (returns limit + 1 when exceeded).
Int first_full_window(const std::vector<Int>& primes, const Int& delta4,
                      const Int& limit) {
    Int x = delta4;
    bool moved = true;
    while (moved) {
        if (x > limit) return limit + 1;
        moved = false;
        for (const Int& p : primes) {
            Int r = mod_floor(x, p);
            if (r >= delta4) {  // no multiple of p in (x - delta4, x]
                x += p - r;
                moved = true;
            }
        }
    }
    return x;
}

}  // namespace

Int prime_capacity(const std::vector<Int>& primes, const Int& delta4) {
    check_prime_set(primes, delta4);
    Int product = 1;
    for (const Int& p : primes) product *= p;
    Int x = first_full_window(primes, delta4, product);
    return x - 1;
}

bool prime_capacity_at_least(const std::vector<Int>& primes, const Int& delta4,
                             const Int& k_target) {
    check_prime_set(primes, delta4);
    return first_full_window(primes, delta4, k_target) > k_target;
}

bool prob_bound_informative(const SelectionSpec& spec, const Int& K) {
    double log2k = std::log2(K.convert_to<double>());
    return spec.delta4.convert_to<double>() * log2k <
           std::ldexp(1.0, static_cast<int>(spec.beta) - 1);
}

double prob_bound_simple(const SelectionSpec& spec, const Int& p_max, const Int& K) {
    if (K < 2 || p_max < 2) throw domain_error("prob_bound_simple: K and p must be >= 2");
    double folds = Int(K / p_max).convert_to<double>();
    double ratio = spec.delta4.convert_to<double>() *
                   std::log2(K.convert_to<double>()) /
                   std::ldexp(1.0, static_cast<int>(spec.beta) - 1);
    double failure = folds * std::pow(ratio, static_cast<double>(spec.count));
    double bound = 1.0 - failure;
    return std::min(1.0, std::max(0.0, bound));
}

double upper_incomplete_gamma_int(unsigned n_plus_1, double z) {
    if (n_plus_1 == 0)
        throw domain_error("upper_incomplete_gamma_int: order must be >= 1");
    const unsigned n = n_plus_1 - 1;
    // G(n+1, z) = n! e^-z sum_{k=0..n} z^k / k!
    double sum = 0.0, term = 1.0;  // z^k / k!
    for (unsigned k = 0;; ++k) {
        sum += term;
        if (k == n) break;
        term *= z / static_cast<double>(k + 1);
    }
    double fact = 1.0;
    for (unsigned k = 2; k <= n; ++k) fact *= static_cast<double>(k);
    return fact * std::exp(-z) * sum;
}

double prob_bound_gamma(const SelectionSpec& spec, const Int& p_max, const Int& K) {
    if (K < 2 || p_max < 2) throw domain_error("prob_bound_gamma: K and p must be >= 2");
    const unsigned L = spec.count;
    const double p = p_max.convert_to<double>();
    const double folds = Int(K / p_max).convert_to<double>();
    const double a = -std::log((folds + 1.0) * p);
    const double b = -std::log(p);
    const double gamma_diff =
        upper_incomplete_gamma_int(L + 1, a) - upper_incomplete_gamma_int(L + 1, b);
    const double delta4 = spec.delta4.convert_to<double>();
    const double sign = (L % 2 == 0) ? 1.0 : -1.0;
    double denom = p * std::pow(std::log(2.0), static_cast<double>(L)) *
                   std::ldexp(1.0, static_cast<int>(L * (spec.beta - 1))) * sign;
    double failure = std::pow(delta4, static_cast<double>(L + 1)) * gamma_diff / denom;
    double bound = 1.0 - failure;
    return std::min(1.0, std::max(0.0, bound));
}

std::pair<Int, Int> gamma_reduce(const Int& K, const Int& delta4, const Int& gamma) {
    if (gamma < 1) throw domain_error("gamma_reduce: gamma must be >= 1");
    auto ceil_div = [](const Int& a, const Int& g) { return floor_div(a + g - 1, g); };
    return {ceil_div(K, gamma), ceil_div(delta4, gamma)};
}

SelectionReport random_select(const SelectionSpec& spec, std::uint64_t seed,
                              std::uint64_t trials) {
    if (spec.beta < 3 || spec.beta > 26)
        throw budget_error("random_select: beta must be in [3, 26]");
    if (spec.count < 2) throw domain_error("random_select: count must be >= 2");
    if (trials == 0) throw domain_error("random_select: at least one trial required");

    const std::uint64_t lo = 1ULL << (spec.beta - 1);
    const std::uint64_t hi = 1ULL << spec.beta;
    std::vector<std::uint64_t> pool = primes_in_interval(lo, hi);
    if (pool.size() < spec.count)
        throw domain_error("random_select: only " + std::to_string(pool.size()) +
                           " primes in [2^" + std::to_string(spec.beta - 1) + ", 2^" +
                           std::to_string(spec.beta) + "], need " +
                           std::to_string(spec.count));

    SelectionReport report;
    report.seed = seed;

    // Exhaustive when the combination count is within the trial budget.
    Int combos = binomial(static_cast<unsigned>(pool.size()), spec.count);
    const bool exhaustive = combos <= Int(trials);

    auto run_trial = [&](const std::vector<Int>& primes) {
        bool ok = prime_capacity_at_least(primes, spec.delta4, spec.k_target);
        ++report.trials.trials;
        if (ok) ++report.trials.successes;
        if (report.trials.trials == 1) {
            report.primes = primes;
            report.achieved_k = prime_capacity(primes, spec.delta4);
            report.success = ok;
        }
    };

    if (exhaustive) {
        report.trials.exhaustive = true;
        std::vector<std::size_t> idx(spec.count);
        for (std::size_t i = 0; i < spec.count; ++i) idx[i] = i;
        while (true) {
            std::vector<Int> primes;
            primes.reserve(spec.count);
            for (std::size_t i : idx) primes.push_back(Int(pool[i]));
            run_trial(primes);
            // next combination: bump the rightmost index with headroom
            int pos = static_cast<int>(spec.count) - 1;
            while (pos >= 0 &&
                   idx[pos] == pool.size() - spec.count + static_cast<std::size_t>(pos))
                --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (std::size_t i = static_cast<std::size_t>(pos) + 1; i < spec.count; ++i)
                idx[i] = idx[i - 1] + 1;
        }
    } else {
        DetRng rng(seed);
        std::vector<std::uint64_t> scratch(pool);
        for (std::uint64_t t = 0; t < trials; ++t) {
            // partial Fisher-Yates draw of L distinct primes
            std::vector<Int> primes;
            primes.reserve(spec.count);
            for (unsigned i = 0; i < spec.count; ++i) {
                std::uint64_t j = i + rng.below(scratch.size() - i);
                std::swap(scratch[i], scratch[j]);
                primes.push_back(Int(scratch[i]));
            }
            run_trial(primes);
        }
    }

    Int p_max = *std::max_element(report.primes.begin(), report.primes.end());
    report.bound_simple = prob_bound_simple(spec, p_max, spec.k_target);
    report.bound_gamma = prob_bound_gamma(spec, p_max, spec.k_target);
    report.informative = prob_bound_informative(spec, spec.k_target);
    return report;
}

}  // namespace rcrt
