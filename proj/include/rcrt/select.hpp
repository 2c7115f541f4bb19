#pragma once

/**
 * @file select.hpp
 * @brief Modulus-set construction: prime-set capacity, random prime
 *        selection with analytic success-probability bounds, and the
 *        gamma-scaling reduction.
 */

#include "rcrt/core.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace rcrt {

struct SelectionSpec {
    unsigned beta = 8;   ///< primes drawn from [2^(beta-1), 2^beta]
    unsigned count = 2;  ///< L
    Int delta4 = 1;      ///< target Delta = 4*delta
    Int k_target = 1;    ///< required dynamic range
};

struct TrialStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    bool exhaustive = false;  ///< all C(#primes, L) combinations enumerated
};

struct SelectionReport {
    std::vector<Int> primes;  ///< the headline selection (first trial)
    Int achieved_k;
    bool success = false;
    double bound_simple = 0.0;  ///< analytic lower bound on success probability
    double bound_gamma = 0.0;   ///< incomplete-gamma refinement of the bound
    bool informative = false;   ///< delta4 * log2(K) < 2^(beta-1)
    TrialStats trials;
    std::uint64_t seed = 0;
};

/// Primes in [lo, hi], simple sieve. Intended for intervals up to 2^26.
std::vector<std::uint64_t> primes_in_interval(std::uint64_t lo, std::uint64_t hi);

/// Capacity of a prime set at the given delta4: K = x - 1 for the smallest
/// x >= delta4 such that the window [x - delta4 + 1, x] contains a multiple
/// of every prime. Walks window positions by jumping to the next multiple,
/// so the cost is about sum_l x/p_l rather than x.
/// Requires distinct primes and delta4 < min prime.
Int prime_capacity(const std::vector<Int>& primes, const Int& delta4);

/// Early-exit variant of prime_capacity: true iff capacity >= k_target.
bool prime_capacity_at_least(const std::vector<Int>& primes, const Int& delta4,
                             const Int& k_target);

/// Lower bound on the success probability of random selection:
/// 1 - floor(K/p_max) * (delta4 * log2(K) / 2^(beta-1))^L, clamped to [0,1].
double prob_bound_simple(const SelectionSpec& spec, const Int& p_max, const Int& K);

/// Incomplete-gamma form of the bound (best-effort evaluation; validated
/// against prob_bound_simple numerically, not used as a correctness gate).
double prob_bound_gamma(const SelectionSpec& spec, const Int& p_max, const Int& K);

/// True in the regime where the simple bound is meaningful.
bool prob_bound_informative(const SelectionSpec& spec, const Int& K);

/// Upper incomplete gamma at integer order: G(n+1, z) = n! e^-z sum_{k<=n} z^k/k!.
/// Finite-sum form, valid for negative z as well.
double upper_incomplete_gamma_int(unsigned n_plus_1, double z);

/// Scaling reduction: selecting moduli gamma*p for a target (K, Delta)
/// is selecting p for (ceil(K/gamma), ceil(Delta/gamma)). Ceilings keep the
/// reduced problem at least as hard as the original.
std::pair<Int, Int> gamma_reduce(const Int& K, const Int& delta4, const Int& gamma);

/// Draws L distinct primes from [2^(beta-1), 2^beta] (seeded, reproducible),
/// evaluates the capacity against k_target, and repeats over the trial
/// budget; enumerates all combinations instead when that is cheaper.
/// Requires beta <= 26 and at least L primes in the interval.
SelectionReport random_select(const SelectionSpec& spec, std::uint64_t seed,
                              std::uint64_t trials);

}  // namespace rcrt
