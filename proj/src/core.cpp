#include "rcrt/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rcrt {

// ---------------------------------------------------------------------------
// parsing helpers (declared in ints.hpp)
// ---------------------------------------------------------------------------

Int parse_int(const std::string& text) {
    if (text.empty()) throw domain_error("parse_int: empty string");
    std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
    if (i == text.size()) throw domain_error("parse_int: sign without digits");
    for (; i < text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw domain_error("parse_int: not a decimal integer: " + text);
    return Int(text);
}

Rat parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Int num = parse_int(text.substr(0, slash));
        Int den = parse_int(text.substr(slash + 1));
        if (den == 0) throw domain_error("parse_rational: zero denominator");
        return Rat(num, den);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t frac_len = text.size() - dot - 1;
        if (frac_len == 0) throw domain_error("parse_rational: trailing dot: " + text);
        Int num = parse_int(digits);
        Int den = 1;
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        return Rat(num, den);
    }
    return Rat(parse_int(text));
}

// ---------------------------------------------------------------------------
// ModulusSet / GammaModuli
// ---------------------------------------------------------------------------

ModulusSet::ModulusSet(std::vector<Int> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.size() < 2)
        throw domain_error("ModulusSet: at least two moduli required");
    std::sort(moduli_.begin(), moduli_.end());
    for (std::size_t l = 0; l < moduli_.size(); ++l) {
        if (moduli_[l] < 2)
            throw invalid_modulus_error("ModulusSet: modulus must be >= 2, got " +
                                        moduli_[l].str());
        if (l > 0 && moduli_[l] == moduli_[l - 1])
            throw domain_error("ModulusSet: duplicate modulus " + moduli_[l].str());
    }
    const std::size_t n = moduli_.size();
    gcd_table_.assign(n * n, Int(0));
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j)
            gcd_table_[l * n + j] = boost::multiprecision::gcd(moduli_[l], moduli_[j]);
    lcm_ = moduli_[0];
    for (std::size_t l = 1; l < n; ++l)
        lcm_ = boost::multiprecision::lcm(lcm_, moduli_[l]);
}

namespace {

std::vector<Int> scaled_moduli(const Int& gamma, const std::vector<Int>& parts) {
    if (gamma < 1) throw invalid_modulus_error("GammaModuli: gamma must be >= 1");
    std::vector<Int> out;
    out.reserve(parts.size());
    for (const Int& p : parts) out.push_back(gamma * p);
    return out;
}

}  // namespace

GammaModuli::GammaModuli(Int gamma, std::vector<Int> coprime_parts)
    : gamma_(std::move(gamma)),
      parts_(std::move(coprime_parts)),
      // parts_ must be sorted before the derived set is built; members
      // initialize in declaration order, so the sort happens here.
      derived_(scaled_moduli(gamma_, [&] {
          std::sort(parts_.begin(), parts_.end());
          return parts_;
      }())) {
    for (std::size_t l = 0; l < parts_.size(); ++l)
        for (std::size_t j = l + 1; j < parts_.size(); ++j)
            if (boost::multiprecision::gcd(parts_[l], parts_[j]) != 1)
                throw domain_error("GammaModuli: parts " + parts_[l].str() + " and " +
                                   parts_[j].str() + " are not coprime");
    parts_product_ = 1;
    for (const Int& p : parts_) parts_product_ *= p;
}

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

Int mod_reduce(const Int& x, const Int& m) {
    if (m < 1) throw invalid_modulus_error("mod_reduce: modulus must be >= 1");
    return mod_floor(x, m);
}

ResidueVector residue_vector(const Int& x, const ModulusSet& ms) {
    ResidueVector rv;
    rv.parent = &ms;
    rv.residues.reserve(ms.size());
    for (std::size_t l = 0; l < ms.size(); ++l)
        rv.residues.push_back(mod_floor(x, ms.modulus(l)));
    return rv;
}

Int crt_reconstruct(const ResidueVector& rv) {
    const ModulusSet& ms = *rv.parent;
    if (rv.size() != ms.size())
        throw domain_error("crt_reconstruct: residue count does not match moduli");
    for (std::size_t l = 0; l < ms.size(); ++l)
        if (rv[l] < 0 || rv[l] >= ms.modulus(l))
            throw domain_error("crt_reconstruct: residue out of range at index " +
                               std::to_string(l));
    // Consistency check up front so failures name the violating pair.
    for (std::size_t l = 0; l < ms.size(); ++l)
        for (std::size_t j = l + 1; j < ms.size(); ++j) {
            const Int& g = ms.pairwise_gcd(l, j);
            if (mod_floor(rv[l] - rv[j], g) != 0) {
                std::ostringstream os;
                os << "crt_reconstruct: residues " << rv[l] << " (mod "
                   << ms.modulus(l) << ") and " << rv[j] << " (mod " << ms.modulus(j)
                   << ") disagree modulo gcd " << g;
                throw inconsistent_residues_error(os.str(), l, j);
            }
        }
    // Successive pairwise merge; consistency already established.
    Int value = rv[0];
    Int modulus = ms.modulus(0);
    for (std::size_t l = 1; l < ms.size(); ++l) {
        const Int& m2 = ms.modulus(l);
        Int g = boost::multiprecision::gcd(modulus, m2);
        Int step = m2 / g;
        // rv[l] - value is divisible by g: value matches rv[j] mod every
        // gcd(m_j, m_l), and g is the lcm of those gcds.
        Int diff = (rv[l] - value) / g;
        Int t = mod_floor(diff * mod_inverse(modulus / g, step), step);
        value += modulus * t;
        modulus *= step;
        value = mod_floor(value, modulus);
    }
    return value;
}

Int crt_signed(const ResidueVector& rv) {
    Int v = crt_reconstruct(rv);
    const Int& m = rv.parent->lcm();
    if (2 * v < m) return v;
    return v - m;
}

}  // namespace rcrt
