#include "rcrt/multi.hpp"

#include "rcrt/sympoly.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace rcrt {

namespace {

// CRT over pairwise-coprime part moduli (parts of 1 contribute nothing).
Int crt_parts(const std::vector<Int>& mods, const std::vector<Int>& residues) {
    Int value = 0, modulus = 1;
    for (std::size_t l = 0; l < mods.size(); ++l) {
        if (mods[l] == 1) continue;
        Int t = mod_floor((residues[l] - value) * mod_inverse(modulus, mods[l]), mods[l]);
        value += modulus * t;
        modulus *= mods[l];
    }
    return value;
}

Int crt_parts_signed(const std::vector<Int>& mods, const std::vector<Int>& residues,
                     const Int& product) {
    Int v = crt_parts(mods, residues);
    if (2 * v < product) return v;
    return v - product;
}

Int eq82_bound(const GammaModuli& gm, std::size_t count) {
    // Capacity bound of the repeated-residue regime: product of the first
    // ceil(L/N) parts.
    std::size_t take = (gm.size() + count - 1) / count;
    Int prod = 1;
    for (std::size_t l = 0; l < take; ++l) prod *= gm.part(l);
    return prod;
}

}  // namespace

ResidueTable make_residue_table(GammaModuli gm, std::size_t count,
                                std::vector<std::vector<Int>> rows) {
    if (count == 0) throw domain_error("ResidueTable: count must be >= 1");
    if (rows.size() != gm.size())
        throw domain_error("ResidueTable: expected one row per modulus");
    for (std::size_t l = 0; l < rows.size(); ++l) {
        if (rows[l].size() != count)
            throw domain_error("ResidueTable: row " + std::to_string(l) + " has " +
                               std::to_string(rows[l].size()) + " residues, expected " +
                               std::to_string(count));
        const Int& m = gm.derived().modulus(l);
        for (const Int& r : rows[l])
            if (r < 0 || r >= m)
                throw domain_error("ResidueTable: residue " + r.str() +
                                   " out of range for modulus " + m.str());
    }
    return ResidueTable{std::move(gm), count, std::move(rows)};
}

ResidueTable encode_residue_table(const GammaModuli& gm, const std::vector<Int>& values) {
    std::vector<std::vector<Int>> rows(gm.size());
    for (std::size_t l = 0; l < gm.size(); ++l) {
        rows[l].reserve(values.size());
        for (const Int& x : values)
            rows[l].push_back(mod_floor(x, gm.derived().modulus(l)));
    }
    return make_residue_table(gm, values.size(), std::move(rows));
}

CommonResidueAnalysis analyze_common_residues(const ResidueTable& rt, const Rat& delta) {
    CommonResidueAnalysis an;
    an.delta = delta;
    an.gamma = rt.gm.gamma();

    std::vector<Int> commons;
    commons.reserve(rt.count * rt.gm.size());
    for (const auto& row : rt.rows)
        for (const Int& r : row) commons.push_back(mod_floor(r, an.gamma));
    std::sort(commons.begin(), commons.end());
    commons.erase(std::unique(commons.begin(), commons.end()), commons.end());
    an.gammas = std::move(commons);
    an.kappa = an.gammas.size();

    // Widest cyclic successor gap; ties resolved toward the smallest index.
    Int best_gap = -1;
    std::size_t best = 0;
    for (std::size_t i = 0; i < an.kappa; ++i) {
        Int gap = i + 1 < an.kappa ? Int(an.gammas[i + 1] - an.gammas[i])
                                   : Int(an.gammas[0] + an.gamma - an.gammas[i]);
        if (gap > best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    an.xi = best + 1;
    an.gap = best_gap;
    an.case_one = an.xi == an.kappa;

    if (!(Rat(best_gap) > 2 * delta)) {
        std::ostringstream os;
        os << "analyze_common_residues: widest common-residue gap " << best_gap
           << " does not exceed 2*delta = " << to_string(2 * delta) << "; ";
        if (4 * Rat(Int(rt.count)) * delta < Rat(an.gamma))
            os << "delta < gamma/(4N) holds, so some residue error exceeded delta";
        else
            os << "the feasibility precondition delta < gamma/(4N) = "
               << to_string(Rat(an.gamma, Int(4 * rt.count))) << " is violated";
        throw infeasible_error(os.str());
    }
    return an;
}

FoldingTable shift_common_residues(const CommonResidueAnalysis& analysis,
                                   const ResidueTable& rt) {
    FoldingTable ft;
    const Int& gamma = analysis.gamma;
    const Int threshold = analysis.case_one ? Int(-1) : analysis.gammas[analysis.xi - 1];
    ft.shifted.resize(rt.rows.size());
    ft.folding.resize(rt.rows.size());
    for (std::size_t l = 0; l < rt.rows.size(); ++l) {
        const Int& part = rt.gm.part(l);
        for (const Int& r : rt.rows[l]) {
            Int common = mod_floor(r, gamma);
            Int shifted = (!analysis.case_one && common > threshold) ? Int(common - gamma)
                                                                     : common;
            Int num = r - shifted;
            if (num % gamma != 0)
                throw error("shift_common_residues: " + r.str() + " - " + shifted.str() +
                            " is not divisible by gamma = " + gamma.str());
            ft.shifted[l].push_back(shifted);
            ft.folding[l].push_back(mod_floor(num / gamma, part));
        }
    }
    return ft;
}

SymmetricGcrtOutput symmetric_gcrt(const FoldingTable& ft, const GammaModuli& gm,
                                   std::size_t count) {
    const std::size_t L = gm.size();
    const std::size_t N = count;
    const std::vector<Int>& parts = gm.coprime_parts();
    const Int& product = gm.parts_product();

    SymmetricGcrtOutput out;
    SymmetricProfile& prof = out.profile;

    // Step 1: S_1 by CRT on per-modulus sums, sign via the midpoint rule.
    std::vector<Int> sum_residues(L);
    for (std::size_t l = 0; l < L; ++l) {
        Int s = 0;
        for (const Int& q : ft.folding[l]) s += q;
        sum_residues[l] = mod_floor(s, parts[l]);
    }
    prof.sum_folding = crt_parts_signed(parts, sum_residues, product);
    prof.center = Rat(prof.sum_folding, Int(N));

    // Centering: integer center when N | S_1, otherwise the scale-N lattice
    // y = N*q - S_1 keeps every value integral with an exact zero sum.
    if (prof.sum_folding % Int(N) == 0) {
        prof.scale = 1;
        prof.lattice_shift = prof.sum_folding / Int(N);
    } else {
        prof.scale = Int(N);
        prof.lattice_shift = prof.sum_folding;
    }

    // Per-modulus lattice residues and elementary symmetric values.
    std::vector<std::vector<Int>> lattice(L);
    for (std::size_t l = 0; l < L; ++l) {
        lattice[l].reserve(N);
        for (const Int& q : ft.folding[l])
            lattice[l].push_back(mod_floor(prof.scale * q - prof.lattice_shift, parts[l]));
    }
    std::vector<std::vector<Int>> elem_residues(N, std::vector<Int>(L));
    for (std::size_t l = 0; l < L; ++l) {
        // e_k over Z/M_l by the one-value-at-a-time recurrence
        std::vector<Int> e(N + 1, Int(0));
        e[0] = 1;
        std::size_t used = 0;
        for (const Int& v : lattice[l]) {
            ++used;
            for (std::size_t k = used; k >= 1; --k)
                e[k] = mod_floor(e[k] + v * e[k - 1], parts[l]);
        }
        for (std::size_t k = 1; k <= N; ++k) elem_residues[k - 1][l] = e[k];
    }
    prof.elementary.resize(N);
    for (std::size_t k = 1; k <= N; ++k)
        prof.elementary[k - 1] = crt_parts_signed(parts, elem_residues[k - 1], product);

    prof.polynomial = polynomial_from_elementary(prof.elementary);
    auto roots = integer_roots(prof.polynomial);
    if (!roots)
        throw decode_failure(
            "symmetric_gcrt: polynomial does not split into integer roots; the "
            "dynamic-range condition on prod M_l is violated");

    out.folding_values.reserve(N);
    for (const Int& r : *roots) {
        Int num = r + prof.lattice_shift;
        if (num % prof.scale != 0)
            throw decode_failure("symmetric_gcrt: root " + r.str() +
                                 " does not unscale to an integer folding number; "
                                 "dynamic-range condition violated");
        out.folding_values.push_back(num / prof.scale);
    }
    std::sort(out.folding_values.begin(), out.folding_values.end());

    // Diagnostics: power sums, the Newton recurrence cross-check, and the
    // symmetric bound on the recovered values.
    prof.power_sum_residues.assign(N, std::vector<Int>(L));
    for (std::size_t l = 0; l < L; ++l) {
        std::vector<Int> pw(lattice[l]);
        for (std::size_t k = 1; k <= N; ++k) {
            Int s = 0;
            for (std::size_t i = 0; i < N; ++i) {
                s += pw[i];
                pw[i] = mod_floor(pw[i] * lattice[l][i], parts[l]);
            }
            prof.power_sum_residues[k - 1][l] = mod_floor(s, parts[l]);
        }
    }
    prof.power_sums_signed.resize(N);
    for (std::size_t k = 0; k < N; ++k)
        prof.power_sums_signed[k] =
            crt_parts_signed(parts, prof.power_sum_residues[k], product);
    try {
        std::vector<Int> newton = elementary_from_power_sums(prof.power_sums_signed);
        prof.newton_consistent = newton == prof.elementary;
    } catch (const domain_error&) {
        prof.newton_consistent = false;  // signed S_k left its valid range
    }

    prof.root_spread = out.folding_values.back() - out.folding_values.front();
    prof.bound_check_ok = true;
    Rat half_spread = Rat(prof.scale * prof.root_spread, 2);
    Rat power = 1;
    for (std::size_t k = 1; k <= N; ++k) {
        power *= half_spread;
        if (k >= 2 &&
            Rat(boost::multiprecision::abs(prof.elementary[k - 1])) >
                Rat(binomial(static_cast<unsigned>(N), static_cast<unsigned>(k))) * power)
            prof.bound_check_ok = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// residue-to-root matching
// ---------------------------------------------------------------------------

namespace {

struct RootGroup {
    Int value;           // distinct folding value
    std::size_t mult;    // multiplicity among the N roots
    std::vector<Int> class_per_modulus;
};

struct Assignment {
    // per root-group, per modulus: the columns feeding that group
    std::vector<std::vector<std::vector<std::size_t>>> columns;
};

struct Slot {
    Int folding;
    Rat estimate_num;  // exact mean of shifted residues
    std::vector<Int> shifted;          // by modulus
    std::vector<std::size_t> columns;  // by modulus
};

// Enumerates ways to hand `cols` to demanders with remaining needs; invoked
// per (modulus, residue-class) when several root groups share the class.
void distribute(const std::vector<std::size_t>& cols, std::size_t pos,
                std::vector<std::vector<std::size_t>>& buckets,
                std::vector<std::size_t>& need, const std::function<void()>& done,
                std::size_t& explored, std::size_t cap) {
    if (explored > cap) return;
    if (pos == cols.size()) {
        done();
        return;
    }
    for (std::size_t gi = 0; gi < buckets.size(); ++gi) {
        if (need[gi] == 0) continue;
        --need[gi];
        buckets[gi].push_back(cols[pos]);
        ++explored;
        distribute(cols, pos + 1, buckets, need, done, explored, cap);
        buckets[gi].pop_back();
        ++need[gi];
    }
}

}  // namespace

GrcrtResult grcrt_decode(const ResidueTable& rt, const Rat& delta) {
    const std::size_t L = rt.gm.size();
    const std::size_t N = rt.count;

    // Repeated residues within one set are not decodable here; report the
    // capacity bound of that regime and refuse.
    for (std::size_t l = 0; l < L; ++l) {
        std::vector<Int> sorted(rt.rows[l]);
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i] == sorted[i - 1])
                throw repeated_residue_error(
                    "grcrt_decode: residue " + sorted[i].str() +
                    " repeats in the set for modulus " +
                    rt.gm.derived().modulus(l).str() +
                    "; the repeated-residue regime (capacity bound prod M_l over the "
                    "first ceil(L/N) parts = " +
                    eq82_bound(rt.gm, N).str() + ") is not implemented");
    }

    GrcrtResult res;
    res.analysis = analyze_common_residues(rt, delta);
    FoldingTable ft = shift_common_residues(res.analysis, rt);
    SymmetricGcrtOutput sg = symmetric_gcrt(ft, rt.gm, N);
    res.profile = std::move(sg.profile);

    // Distinct roots and their residue classes per modulus.
    std::vector<RootGroup> groups;
    for (const Int& v : sg.folding_values) {
        if (!groups.empty() && groups.back().value == v) {
            ++groups.back().mult;
            continue;
        }
        RootGroup g;
        g.value = v;
        g.mult = 1;
        g.class_per_modulus.reserve(L);
        for (std::size_t l = 0; l < L; ++l)
            g.class_per_modulus.push_back(mod_floor(v, rt.gm.part(l)));
        groups.push_back(std::move(g));
    }

    // Per modulus: residue class -> columns, and the groups demanding it.
    const Rat two_delta = 2 * delta;
    std::vector<Assignment> base(1);
    base[0].columns.assign(groups.size(), std::vector<std::vector<std::size_t>>(L));
    std::vector<Assignment> partial = std::move(base);
    for (std::size_t l = 0; l < L; ++l) {
        std::map<Int, std::vector<std::size_t>> by_class;
        for (std::size_t c = 0; c < N; ++c)
            by_class[ft.folding[l][c]].push_back(c);
        std::map<Int, std::vector<std::size_t>> demand;  // class -> group indices
        for (std::size_t gi = 0; gi < groups.size(); ++gi)
            demand[groups[gi].class_per_modulus[l]].push_back(gi);
        // demand totals must match the available columns exactly
        for (const auto& [cls, gidx] : demand) {
            std::size_t needed = 0;
            for (std::size_t gi : gidx) needed += groups[gi].mult;
            auto it = by_class.find(cls);
            std::size_t have = it == by_class.end() ? 0 : it->second.size();
            if (needed != have)
                throw decode_failure(
                    "grcrt_decode: folding residues modulo " + rt.gm.part(l).str() +
                    " do not match the recovered roots (class " + cls.str() + " needs " +
                    std::to_string(needed) + " columns, found " + std::to_string(have) +
                    "); dynamic-range condition violated");
        }
        for (const auto& [cls, cols] : by_class)
            if (demand.find(cls) == demand.end())
                throw decode_failure("grcrt_decode: column residue class " + cls.str() +
                                     " modulo " + rt.gm.part(l).str() +
                                     " matches no recovered root");

        // extend every partial assignment across this modulus
        std::vector<Assignment> extended;
        constexpr std::size_t kExploreCap = 200000;
        std::size_t explored = 0;
        std::vector<std::pair<Int, std::vector<std::size_t>>> classes(demand.begin(),
                                                                      demand.end());
        for (const Assignment& asg : partial) {
            std::function<void(std::size_t, Assignment&)> rec =
                [&](std::size_t ci, Assignment& cur) {
                    if (explored > kExploreCap) return;
                    if (ci == classes.size()) {
                        extended.push_back(cur);
                        return;
                    }
                    const Int& cls = classes[ci].first;
                    const std::vector<std::size_t>& gidx = classes[ci].second;
                    const std::vector<std::size_t>& cols = by_class.at(cls);
                    if (gidx.size() == 1) {
                        // sole demander takes every column
                        Assignment next = cur;
                        next.columns[gidx[0]][l] = cols;
                        rec(ci + 1, next);
                        return;
                    }
                    std::vector<std::size_t> need;
                    need.reserve(gidx.size());
                    for (std::size_t gi : gidx) need.push_back(groups[gi].mult);
                    std::vector<std::vector<std::size_t>> buckets(gidx.size());
                    distribute(
                        cols, 0, buckets, need,
                        [&]() {
                            Assignment next = cur;
                            for (std::size_t bi = 0; bi < gidx.size(); ++bi)
                                next.columns[gidx[bi]][l] = buckets[bi];
                            rec(ci + 1, next);
                        },
                        explored, kExploreCap);
                };
            Assignment seed = asg;
            rec(0, seed);
        }
        if (explored > kExploreCap)
            throw ambiguity_error(
                "grcrt_decode: residue matching search exceeded its budget; "
                "instance is ambiguous at this delta");
        partial = std::move(extended);
    }

    // Validate each complete assignment by clustering; collect outcomes
    // with their spread scores (max cluster diameter, then total diameter).
    struct Outcome {
        std::vector<Slot> slots;
        Int max_diam;
        Int sum_diam;
    };
    std::vector<Outcome> outcomes;
    for (const Assignment& asg : partial) {
        std::vector<Slot> slots;
        Int max_diam = 0, sum_diam = 0;
        bool valid = true;
        for (std::size_t gi = 0; gi < groups.size() && valid; ++gi) {
            const RootGroup& g = groups[gi];
            // pooled (value, modulus, column) entries for this root value
            struct Pooled {
                Int shifted;
                std::size_t modulus;
                std::size_t column;
            };
            std::vector<Pooled> pool;
            pool.reserve(g.mult * L);
            for (std::size_t l = 0; l < L; ++l)
                for (std::size_t c : asg.columns[gi][l])
                    pool.push_back({ft.shifted[l][c], l, c});
            std::sort(pool.begin(), pool.end(), [](const Pooled& a, const Pooled& b) {
                return a.shifted < b.shifted;
            });
            // split at gaps wider than 2*delta
            std::vector<std::vector<Pooled>> clusters(1);
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (i > 0 && Rat(pool[i].shifted - pool[i - 1].shifted) > two_delta)
                    clusters.emplace_back();
                clusters.back().push_back(pool[i]);
            }
            if (clusters.size() != g.mult) {
                valid = false;
                break;
            }
            for (const auto& cluster : clusters) {
                if (cluster.size() != L) {
                    valid = false;
                    break;
                }
                // exactly one column per modulus and diameter within 2*delta
                std::vector<bool> seen(L, false);
                for (const Pooled& p : cluster) {
                    if (seen[p.modulus]) {
                        valid = false;
                        break;
                    }
                    seen[p.modulus] = true;
                }
                if (!valid) break;
                Int diam = cluster.back().shifted - cluster.front().shifted;
                if (Rat(diam) > two_delta) {
                    valid = false;
                    break;
                }
                if (diam > max_diam) max_diam = diam;
                sum_diam += diam;
                Slot slot;
                slot.folding = g.value;
                slot.shifted.resize(L);
                slot.columns.resize(L);
                Int sum = 0;
                for (const Pooled& p : cluster) {
                    slot.shifted[p.modulus] = p.shifted;
                    slot.columns[p.modulus] = p.column;
                    sum += p.shifted;
                }
                slot.estimate_num = Rat(g.value * res.analysis.gamma) + Rat(sum, Int(L));
                slots.push_back(std::move(slot));
            }
        }
        if (!valid) continue;
        outcomes.push_back({std::move(slots), max_diam, sum_diam});
    }

    if (outcomes.empty())
        throw ambiguity_error(
            "grcrt_decode: no residue-to-root matching yields clusters of one "
            "residue per modulus within diameter 2*delta; instance is ambiguous "
            "(or the error bound was exceeded)");

    // Keep the tightest assignment (smallest worst-case cluster diameter,
    // then smallest total). Score ties must agree on the rounded estimates;
    // otherwise the instance is genuinely ambiguous.
    auto better = [](const Outcome& a, const Outcome& b) {
        if (a.max_diam != b.max_diam) return a.max_diam < b.max_diam;
        return a.sum_diam < b.sum_diam;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i)
        if (better(outcomes[i], outcomes[best])) best = i;

    auto signature = [](const std::vector<Slot>& slots) {
        std::vector<std::pair<Int, Int>> sig;
        sig.reserve(slots.size());
        for (const Slot& s : slots)
            sig.push_back({s.folding, round_half_up(s.estimate_num)});
        std::sort(sig.begin(), sig.end());
        return sig;
    };
    auto sig0 = signature(outcomes[best].slots);
    std::size_t co_optimal = 1;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (i == best || better(outcomes[best], outcomes[i])) continue;
        ++co_optimal;
        if (signature(outcomes[i].slots) != sig0) {
            std::ostringstream os;
            os << "grcrt_decode: tied residue matchings disagree on the estimates;"
               << " candidates:";
            for (const auto* oc : {&outcomes[best], &outcomes[i]}) {
                os << " {";
                for (const Slot& s : oc->slots) os << " " << round_half_up(s.estimate_num);
                os << " }";
            }
            throw ambiguity_error(os.str());
        }
    }
    if (outcomes.size() > 1)
        res.diagnostics.push_back(
            std::to_string(outcomes.size()) + " consistent matchings, " +
            std::to_string(co_optimal) + " with the best spread");

    std::vector<Slot>& slots = outcomes[best].slots;
    std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
        if (a.estimate_num != b.estimate_num) return a.estimate_num < b.estimate_num;
        return a.folding < b.folding;
    });
    for (const Slot& s : slots) {
        res.estimates.push_back(round_half_up(s.estimate_num));
        res.folding.push_back(s.folding);
        res.matched_shifted.push_back(s.shifted);
        res.matched_columns.push_back(s.columns);
    }
    {
        std::ostringstream os;
        os << "gap " << res.analysis.gap.str() << " after gamma_" << res.analysis.xi
           << (res.analysis.case_one ? " (case I)" : " (case II)");
        res.diagnostics.push_back(os.str());
    }
    if (!res.profile.bound_check_ok)
        res.diagnostics.push_back("recovered e_k exceed the symmetric bound");
    bool repeated = false;
    for (const RootGroup& g : groups) repeated |= g.mult > 1;
    if (repeated) res.diagnostics.push_back("repeated folding numbers recovered");
    return res;
}

RangeCheckReport dynamic_range_check(std::size_t count, const Int& bandwidth,
                                     const Rat& delta, const GammaModuli& gm,
                                     const Int& sum_x) {
    if (count == 0) throw domain_error("dynamic_range_check: count must be >= 1");
    RangeCheckReport rep;
    const Rat gamma(gm.gamma());
    const Rat product(gm.parts_product());
    const unsigned n = static_cast<unsigned>(count);

    Rat width = (Rat(bandwidth) + 2 * delta + gamma) / gamma;  // (B + 2d + G)/G
    rep.d_bound = width + 1;
    rep.sum_clause = Rat(rat_floor((Rat(sum_x) + delta) / gamma) + 2 * Int(n));
    rep.sum_ok = product > rep.sum_clause;

    rep.pass = rep.sum_ok;
    Rat half_width = width / 2;
    Rat power = half_width;  // (width/2)^k built incrementally from k=1
    for (unsigned k = 2; k <= n; ++k) {
        power *= half_width;
        Rat clause = 2 * Rat(binomial(n, k)) * power;
        bool ok = product > clause;
        rep.power_clauses.push_back(clause);
        rep.power_ok.push_back(ok);
        rep.pass = rep.pass && ok;
    }
    rep.repeated_residue_bound = eq82_bound(gm, count);
    return rep;
}

bool symmetric_bound_check(const std::vector<Rat>& values, const Rat& d) {
    if (values.size() < 2)
        throw domain_error("symmetric_bound_check: need at least two values");
    Rat sum = 0;
    for (const Rat& v : values) sum += v;
    if (sum != 0)
        throw domain_error("symmetric_bound_check: values must sum to zero exactly");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi - *lo > d)
        throw domain_error("symmetric_bound_check: spread exceeds d");

    const unsigned n = static_cast<unsigned>(values.size());
    std::vector<Rat> e = elementary_symmetric(values);
    Rat half = d / 2;
    Rat power = half;
    for (unsigned k = 2; k <= n; ++k) {
        power *= half;
        Rat mag = e[k - 1] < 0 ? Rat(-e[k - 1]) : e[k - 1];
        if (mag > Rat(binomial(n, k)) * power) return false;
    }
    return true;
}

}  // namespace rcrt
