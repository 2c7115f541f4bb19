#pragma once

/**
 * @file core.hpp
 * @brief Modulus/residue domain types and classical CRT reconstruction,
 *        including the non-coprime (pairwise-merge) generalization.
 */

#include "rcrt/ints.hpp"

#include <cstddef>
#include <vector>

namespace rcrt {

/// Ordered set of pairwise-distinct moduli with cached lcm and pairwise
/// gcd table. Immutable after construction; safe to share across threads.
class ModulusSet {
public:
    /// Accepts moduli in any order; stores them ascending.
    /// Requires at least two moduli, each >= 2, duplicates rejected.
    explicit ModulusSet(std::vector<Int> moduli);

    std::size_t size() const { return moduli_.size(); }
    const std::vector<Int>& moduli() const { return moduli_; }
    const Int& modulus(std::size_t l) const { return moduli_[l]; }
    const Int& smallest() const { return moduli_.front(); }
    const Int& largest() const { return moduli_.back(); }
    const Int& lcm() const { return lcm_; }
    const Int& pairwise_gcd(std::size_t l, std::size_t j) const {
        return gcd_table_[l * moduli_.size() + j];
    }

    friend bool operator==(const ModulusSet& a, const ModulusSet& b) {
        return a.moduli_ == b.moduli_;
    }

private:
    std::vector<Int> moduli_;
    Int lcm_;
    std::vector<Int> gcd_table_;
};

/// An integer's residues over a ModulusSet. The parent set must outlive
/// the vector; all library call sites keep both in the same scope.
struct ResidueVector {
    std::vector<Int> residues;
    const ModulusSet* parent = nullptr;

    const Int& operator[](std::size_t l) const { return residues[l]; }
    std::size_t size() const { return residues.size(); }
};

/// Moduli factored as m_l = gamma * M_l with pairwise-coprime parts M_l.
/// The common factor gamma carries the redundancy every robust decoder
/// in this library exploits.
class GammaModuli {
public:
    GammaModuli(Int gamma, std::vector<Int> coprime_parts);

    const Int& gamma() const { return gamma_; }
    const std::vector<Int>& coprime_parts() const { return parts_; }
    const Int& part(std::size_t l) const { return parts_[l]; }
    std::size_t size() const { return parts_.size(); }
    const ModulusSet& derived() const { return derived_; }
    /// Product of the coprime parts = lcm / gamma.
    const Int& parts_product() const { return parts_product_; }

private:
    Int gamma_;
    std::vector<Int> parts_;
    Int parts_product_;
    ModulusSet derived_;
};

/// <X>_m = X - m*floor(X/m), in [0, m). Negative X reduces with floor
/// semantics. Throws invalid_modulus_error when m < 1.
Int mod_reduce(const Int& x, const Int& m);

/// Componentwise reduction of X over the set.
ResidueVector residue_vector(const Int& x, const ModulusSet& ms);

/// Reconstructs the unique X in [0, lcm) matching every residue.
/// Works for non-coprime moduli via successive pairwise merging; residues
/// must agree modulo each pairwise gcd or inconsistent_residues_error is
/// thrown naming the violating pair.
Int crt_reconstruct(const ResidueVector& rv);

/// Signed reconstruction: values >= lcm/2 represent negatives.
Int crt_signed(const ResidueVector& rv);

}  // namespace rcrt
