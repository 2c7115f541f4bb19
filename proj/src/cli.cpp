#include "rcrt/cli.hpp"

#include "rcrt/serialize.hpp"
#include "rcrt/signal.hpp"

#include <CLI11.hpp>

#include <complex>
#include <fstream>
#include <ostream>
#include <sstream>

namespace rcrt {

namespace {

std::vector<Int> parse_int_list(const std::string& csv, const char* what) {
    std::vector<Int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_int(item));
    if (out.empty()) throw domain_error(std::string(what) + ": empty list");
    return out;
}

std::vector<std::complex<double>> parse_amplitudes(const std::string& csv) {
    std::vector<std::complex<double>> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        double re = std::stod(item.substr(0, colon));
        double im = colon == std::string::npos ? 0.0 : std::stod(item.substr(colon + 1));
        out.push_back({re, im});
    }
    return out;
}

ResidueVector vector_over(const ModulusSet& ms, const std::vector<Int>& residues) {
    if (residues.size() != ms.size())
        throw domain_error("expected one residue per modulus");
    ResidueVector rv;
    rv.parent = &ms;
    rv.residues = residues;
    for (std::size_t l = 0; l < ms.size(); ++l)
        if (rv[l] < 0 || rv[l] >= ms.modulus(l))
            throw domain_error("residue " + rv[l].str() + " out of range for modulus " +
                               ms.modulus(l).str());
    return rv;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open " + path);
    return Json::parse(in);
}

// Flag combinations that cannot be parsed into a request; exit code 2.
struct usage_error {
    std::string message;
};

// Moduli arrive either flat or factored as gamma * parts; the factored
// form is validated and echoed into the output document.
std::vector<Int> resolve_moduli(const std::string& flat, const std::string& gamma,
                                const std::string& parts, Json& echo) {
    if (!flat.empty()) {
        if (!gamma.empty() || !parts.empty())
            throw usage_error{"give either --moduli or --gamma with --coprime-parts"};
        return parse_int_list(flat, "--moduli");
    }
    if (gamma.empty() || parts.empty())
        throw usage_error{"missing --moduli (or --gamma with --coprime-parts)"};
    GammaModuli gm(parse_int(gamma), parse_int_list(parts, "--coprime-parts"));
    echo["gamma"] = gm.gamma().str();
    Json p = Json::array();
    for (const Int& v : gm.coprime_parts()) p.push_back(v.str());
    echo["coprime_parts"] = p;
    return gm.derived().moduli();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact-arithmetic robust CRT toolkit"};
    app.require_subcommand(1);

    // --- analyze ---------------------------------------------------------
    auto* analyze = app.add_subcommand(
        "analyze", "dynamic-range staircase (K_n, Delta_n) of a modulus set");
    std::string an_moduli, an_gamma, an_parts;
    std::uint64_t an_budget = ScanOptions{}.budget;
    analyze->add_option("--moduli", an_moduli, "comma-separated moduli");
    analyze->add_option("--gamma", an_gamma, "common factor (factored form)");
    analyze->add_option("--coprime-parts", an_parts);
    analyze->add_option("--budget", an_budget, "scan budget in integers");

    // --- capacity --------------------------------------------------------
    auto* capacity = app.add_subcommand(
        "capacity", "largest dynamic range K with Delta(K) >= delta4");
    std::string cap_moduli, cap_gamma, cap_parts;
    std::string cap_delta4;
    std::uint64_t cap_budget = ScanOptions{}.budget;
    capacity->add_option("--moduli", cap_moduli);
    capacity->add_option("--gamma", cap_gamma);
    capacity->add_option("--coprime-parts", cap_parts);
    capacity->add_option("--delta4", cap_delta4, "Delta = 4*delta, integer")->required();
    capacity->add_option("--budget", cap_budget);

    // --- build-error-list --------------------------------------------------
    auto* build = app.add_subcommand("build-error-list",
                                     "precompute the sorted error list for a set");
    std::string bl_moduli, bl_delta4, bl_out;
    build->add_option("--moduli", bl_moduli)->required();
    build->add_option("--delta4", bl_delta4)->required();
    build->add_option("--out", bl_out, "output path")->required();

    // --- decode-single -----------------------------------------------------
    auto* single = app.add_subcommand("decode-single",
                                      "robust single-integer reconstruction");
    std::string ds_method = "closed";
    std::string ds_gamma, ds_parts, ds_moduli, ds_residues, ds_delta4, ds_k, ds_list;
    single->add_option("--method", ds_method, "closed | search")
        ->check(CLI::IsMember({"closed", "search"}));
    single->add_option("--gamma", ds_gamma, "common factor (closed form)");
    single->add_option("--coprime-parts", ds_parts, "comma-separated parts");
    single->add_option("--moduli", ds_moduli, "flat moduli (search form)");
    single->add_option("--residues", ds_residues)->required();
    single->add_option("--delta4", ds_delta4, "Delta for the search list");
    single->add_option("--k", ds_k, "dynamic range for the search");
    single->add_option("--error-list", ds_list, "reuse a saved error list");

    // --- decode-multi ------------------------------------------------------
    auto* multi = app.add_subcommand("decode-multi",
                                     "robust multi-integer reconstruction");
    std::string dm_gamma, dm_parts, dm_delta, dm_table;
    multi->add_option("--gamma", dm_gamma)->required();
    multi->add_option("--coprime-parts", dm_parts)->required();
    multi->add_option("--delta", dm_delta, "error bound, rational")->required();
    multi->add_option("--table", dm_table, "residue table JSON path")->required();

    // --- select-moduli -----------------------------------------------------
    auto* select = app.add_subcommand("select-moduli",
                                      "random prime selection with bounds");
    unsigned sm_beta = 0, sm_count = 0;
    std::string sm_delta4, sm_ktarget;
    std::uint64_t sm_trials = 1, sm_seed = 0;
    select->add_option("--beta", sm_beta)->required();
    select->add_option("--count", sm_count)->required();
    select->add_option("--delta4", sm_delta4)->required();
    select->add_option("--k-target", sm_ktarget)->required();
    select->add_option("--trials", sm_trials)->required();
    select->add_option("--seed", sm_seed)->required();

    // --- prob-bound --------------------------------------------------------
    auto* prob = app.add_subcommand("prob-bound",
                                    "analytic success-probability bounds");
    unsigned pb_beta = 0, pb_count = 0;
    std::string pb_delta4, pb_k, pb_pmax;
    prob->add_option("--beta", pb_beta)->required();
    prob->add_option("--count", pb_count)->required();
    prob->add_option("--delta4", pb_delta4)->required();
    prob->add_option("--k", pb_k)->required();
    prob->add_option("--p-max", pb_pmax)->required();

    // --- simulate ----------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate",
                                        "undersampled frequency estimation trials");
    std::string si_freqs, si_gamma, si_parts, si_mode = "exact", si_delta, si_amps;
    std::string si_format = "json";
    double si_sigma = 0.0;
    std::uint64_t si_trials = 1, si_seed = 0, si_duration = 0;
    simulate->add_option("--freqs", si_freqs)->required();
    simulate->add_option("--gamma", si_gamma)->required();
    simulate->add_option("--coprime-parts", si_parts)->required();
    simulate->add_option("--noise-mode", si_mode)
        ->check(CLI::IsMember({"exact", "perturb", "additive"}));
    simulate->add_option("--delta", si_delta)->required();
    simulate->add_option("--sigma", si_sigma);
    simulate->add_option("--amplitudes", si_amps, "re:im per tone");
    simulate->add_option("--duration", si_duration, "samples per rate");
    simulate->add_option("--trials", si_trials)->required();
    simulate->add_option("--seed", si_seed)->required();
    simulate->add_option("--format", si_format)->check(CLI::IsMember({"json", "csv"}));

    // parse
    std::vector<char*> argv;
    std::string prog = "rcrt";
    argv.push_back(prog.data());
    std::vector<std::string> owned(args);
    for (auto& a : owned) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help() << std::flush;
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*analyze) {
            Json echo = Json::object();
            ModulusSet ms(resolve_moduli(an_moduli, an_gamma, an_parts, echo));
            RangeProfile profile = range_profile(ms, ScanOptions{an_budget});
            Json doc = to_json(profile);
            doc.update(echo);
            out << doc.dump(1) << "\n";
            return 0;
        }
        if (*capacity) {
            Json doc;
            ModulusSet ms(resolve_moduli(cap_moduli, cap_gamma, cap_parts, doc));
            Int delta4 = parse_int(cap_delta4);
            Json m = Json::array();
            for (const Int& v : ms.moduli()) m.push_back(v.str());
            doc["moduli"] = m;
            doc["lcm"] = ms.lcm().str();
            doc["delta4"] = delta4.str();
            doc["capacity"] = capacity_for_delta(ms, delta4, ScanOptions{cap_budget}).str();
            Json b = to_json(capacity_bounds(ms, delta4));
            doc["bound_lower"] = b["lower"];
            if (b.contains("upper")) doc["bound_upper"] = b["upper"];
            out << doc.dump(1) << "\n";
            return 0;
        }
        if (*build) {
            ModulusSet ms(parse_int_list(bl_moduli, "--moduli"));
            ErrorList el = build_error_list(ms, parse_int(bl_delta4));
            save_error_list(el, bl_out);
            Json doc;
            doc["path"] = bl_out;
            doc["tau"] = el.tau.str();
            doc["entries"] = std::to_string(el.entries.size());
            doc["skipped_inconsistent"] = std::to_string(el.skipped_inconsistent);
            out << doc.dump(1) << "\n";
            return 0;
        }
        if (*single) {
            std::vector<Int> residues = parse_int_list(ds_residues, "--residues");
            if (ds_method == "closed") {
                if (ds_gamma.empty() || ds_parts.empty()) {
                    err << "usage: --method closed requires --gamma and --coprime-parts\n";
                    return 2;
                }
                GammaModuli gm(parse_int(ds_gamma), parse_int_list(ds_parts, "--coprime-parts"));
                ResidueVector rv = vector_over(gm.derived(), residues);
                Json doc = to_json(closed_form_rcrt(gm, rv));
                doc["method"] = "closed";
                out << doc.dump(1) << "\n";
                return 0;
            }
            std::vector<Int> flat;
            if (!ds_moduli.empty()) {
                flat = parse_int_list(ds_moduli, "--moduli");
            } else if (!ds_gamma.empty() && !ds_parts.empty()) {
                GammaModuli gm(parse_int(ds_gamma), parse_int_list(ds_parts, "--coprime-parts"));
                flat = gm.derived().moduli();
            } else {
                err << "usage: --method search requires --moduli (or --gamma with "
                       "--coprime-parts)\n";
                return 2;
            }
            if (ds_k.empty()) {
                err << "usage: --method search requires --k\n";
                return 2;
            }
            ModulusSet ms(flat);
            ErrorList el;
            if (!ds_list.empty()) {
                el = load_error_list(ds_list);
                if (el.moduli != ms.moduli())
                    throw domain_error("error list was built for different moduli");
            } else {
                if (ds_delta4.empty()) {
                    err << "usage: --method search requires --delta4 or --error-list\n";
                    return 2;
                }
                el = build_error_list(ms, parse_int(ds_delta4));
            }
            ResidueVector rv = vector_over(ms, residues);
            Json doc = to_json(search_decode(el, ms, rv, parse_int(ds_k)));
            doc["method"] = "search";
            doc["delta4"] = el.delta4.str();
            out << doc.dump(1) << "\n";
            return 0;
        }
        if (*multi) {
            GammaModuli gm(parse_int(dm_gamma), parse_int_list(dm_parts, "--coprime-parts"));
            ResidueTable table = residue_table_from_json(load_json_file(dm_table), gm);
            Rat delta = parse_rational(dm_delta);
            Json doc = to_json(grcrt_decode(table, delta));
            doc["delta"] = to_string(delta);
            out << doc.dump(1) << "\n";
            return 0;
        }
        if (*select) {
            SelectionSpec spec;
            spec.beta = sm_beta;
            spec.count = sm_count;
            spec.delta4 = parse_int(sm_delta4);
            spec.k_target = parse_int(sm_ktarget);
            Json doc = to_json(random_select(spec, sm_seed, sm_trials));
            doc["beta"] = std::to_string(sm_beta);
            doc["count"] = std::to_string(sm_count);
            doc["delta4"] = spec.delta4.str();
            doc["k_target"] = spec.k_target.str();
            out << doc.dump(1) << "\n";
            return 0;
        }
        if (*prob) {
            SelectionSpec spec;
            spec.beta = pb_beta;
            spec.count = pb_count;
            spec.delta4 = parse_int(pb_delta4);
            Int k = parse_int(pb_k);
            Int pmax = parse_int(pb_pmax);
            Json doc;
            doc["beta"] = std::to_string(pb_beta);
            doc["count"] = std::to_string(pb_count);
            doc["delta4"] = spec.delta4.str();
            doc["k"] = k.str();
            doc["p_max"] = pmax.str();
            doc["bound_simple"] = format_real(prob_bound_simple(spec, pmax, k));
            doc["bound_gamma"] = format_real(prob_bound_gamma(spec, pmax, k));
            doc["informative"] = prob_bound_informative(spec, k);
            out << doc.dump(1) << "\n";
            return 0;
        }
        if (*simulate) {
            ToneSpec ts;
            ts.frequencies = parse_int_list(si_freqs, "--freqs");
            ts.duration = static_cast<std::size_t>(si_duration);
            if (!si_amps.empty())
                ts.amplitudes = parse_amplitudes(si_amps);
            else
                ts.amplitudes.assign(ts.frequencies.size(), {1.0, 0.0});
            GammaModuli gm(parse_int(si_gamma), parse_int_list(si_parts, "--coprime-parts"));
            Rat delta = parse_rational(si_delta);
            NoiseSpec ns;
            ns.sigma = si_sigma;
            ns.delta4 = rat_floor(4 * delta);
            if (si_mode == "exact") ns.mode = NoiseMode::exact;
            if (si_mode == "perturb") ns.mode = NoiseMode::residue_perturbation;
            if (si_mode == "additive") ns.mode = NoiseMode::additive_complex;

            std::vector<Int> truth(ts.frequencies);
            std::sort(truth.begin(), truth.end());

            Json trials = Json::array();
            std::ostringstream csv;
            csv << "trial,tone,truth,estimate,abs_error,decoded,success\n";
            std::uint64_t successes = 0;
            for (std::uint64_t t = 0; t < si_trials; ++t) {
                ns.seed = si_seed + t;
                EstimationResult r = estimate_frequencies(ts, gm, ns, delta);
                if (r.success) ++successes;
                Json trial;
                trial["trial"] = std::to_string(t);
                trial["decoded"] = r.decoded;
                trial["success"] = r.success;
                if (r.decoded) {
                    Json est = Json::array(), errs = Json::array();
                    for (std::size_t i = 0; i < truth.size(); ++i) {
                        est.push_back(r.decode.estimates[i].str());
                        errs.push_back(r.abs_errors[i].str());
                        csv << t << ',' << i << ',' << truth[i].str() << ','
                            << r.decode.estimates[i].str() << ',' << r.abs_errors[i].str()
                            << ',' << 1 << ',' << (r.success ? 1 : 0) << "\n";
                    }
                    trial["estimates"] = est;
                    trial["abs_errors"] = errs;
                } else {
                    trial["stage"] = r.failed_stage;
                    trial["message"] = r.failure_message;
                    csv << t << ",-1,,,," << 0 << ',' << 0 << "\n";
                }
                trials.push_back(trial);
            }
            if (si_format == "csv") {
                out << csv.str();
                return 0;
            }
            Json doc;
            doc["seed"] = std::to_string(si_seed);
            doc["delta"] = to_string(delta);
            doc["noise_mode"] = si_mode;
            doc["trials"] = trials;
            doc["success_rate"] = format_real(static_cast<double>(successes) /
                                              static_cast<double>(si_trials));
            out << doc.dump(1) << "\n";
            return 0;
        }
    } catch (const usage_error& e) {
        err << "usage: " << e.message << "\n";
        return 2;
    } catch (const invalid_modulus_error& e) {
        err << "invalid-modulus: " << e.what() << "\n";
        return 1;
    } catch (const inconsistent_residues_error& e) {
        err << "inconsistent-residues: " << e.what() << "\n";
        return 1;
    } catch (const budget_error& e) {
        err << "budget: " << e.what() << "\n";
        return 1;
    } catch (const decode_failure& e) {
        err << "decode-failure: " << e.what() << "\n";
        return 1;
    } catch (const infeasible_error& e) {
        err << "infeasible: " << e.what() << "\n";
        return 1;
    } catch (const ambiguity_error& e) {
        err << "ambiguity: " << e.what() << "\n";
        return 1;
    } catch (const repeated_residue_error& e) {
        err << "repeated-residue: " << e.what() << "\n";
        return 1;
    } catch (const domain_error& e) {
        err << "domain: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        err << "domain: malformed JSON input: " << e.what() << "\n";
        return 1;
    }
    err << "usage: no subcommand selected\n";
    return 2;
}

}  // namespace rcrt
