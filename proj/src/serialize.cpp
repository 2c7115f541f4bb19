#include "rcrt/serialize.hpp"

#include <cstdio>
#include <fstream>

namespace rcrt {

namespace {

Json strings(const std::vector<Int>& values) {
    Json arr = Json::array();
    for (const Int& v : values) arr.push_back(v.str());
    return arr;
}

std::vector<Int> parse_int_array(const Json& arr, const char* what) {
    if (!arr.is_array()) throw domain_error(std::string(what) + ": expected an array");
    std::vector<Int> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_string())
            throw domain_error(std::string(what) + ": numbers must be decimal strings");
        out.push_back(parse_int(v.get<std::string>()));
    }
    return out;
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json to_json(const RangeProfile& profile) {
    Json doc;
    doc["moduli"] = strings(profile.moduli);
    doc["lcm"] = profile.lcm.str();
    Json steps = Json::array();
    for (const ProfileStep& s : profile.steps)
        steps.push_back(Json{{"K", s.K.str()}, {"delta4", s.delta4.str()}});
    doc["steps"] = steps;
    if (!profile.diagnostics.empty()) doc["diagnostics"] = profile.diagnostics;
    return doc;
}

Json to_json(const CapacityBounds& bounds) {
    Json doc;
    doc["lower"] = bounds.lower.str();
    if (bounds.upper) doc["upper"] = bounds.upper->str();
    return doc;
}

Json to_json(const DecodeResult& result) {
    Json doc;
    doc["estimate"] = result.estimate.str();
    doc["anchor"] = result.anchor.str();
    doc["matches"] = std::to_string(result.matches);
    doc["comparisons"] = std::to_string(result.comparisons);
    return doc;
}

Json to_json(const SelectionReport& report) {
    Json doc;
    doc["primes"] = strings(report.primes);
    doc["achieved_k"] = report.achieved_k.str();
    doc["success"] = report.success;
    doc["bound_simple"] = format_real(report.bound_simple);
    doc["bound_gamma"] = format_real(report.bound_gamma);
    doc["informative"] = report.informative;
    doc["trials"] = std::to_string(report.trials.trials);
    doc["successes"] = std::to_string(report.trials.successes);
    doc["exhaustive"] = report.trials.exhaustive;
    double rate = report.trials.trials == 0
                      ? 0.0
                      : static_cast<double>(report.trials.successes) /
                            static_cast<double>(report.trials.trials);
    doc["empirical_rate"] = format_real(rate);
    doc["seed"] = std::to_string(report.seed);
    return doc;
}

Json to_json(const CommonResidueAnalysis& analysis) {
    Json doc;
    doc["gammas"] = strings(analysis.gammas);
    doc["kappa"] = std::to_string(analysis.kappa);
    doc["xi"] = std::to_string(analysis.xi);
    doc["gap"] = analysis.gap.str();
    doc["case"] = analysis.case_one ? "I" : "II";
    doc["delta"] = to_string(analysis.delta);
    doc["gamma"] = analysis.gamma.str();
    return doc;
}

Json to_json(const SymmetricProfile& profile) {
    Json doc;
    doc["sum_folding"] = profile.sum_folding.str();
    doc["center"] = to_string(profile.center);
    doc["scale"] = profile.scale.str();
    doc["elementary"] = strings(profile.elementary);
    doc["polynomial"] = strings(profile.polynomial);
    doc["power_sums_signed"] = strings(profile.power_sums_signed);
    doc["newton_consistent"] = profile.newton_consistent;
    doc["bound_check_ok"] = profile.bound_check_ok;
    doc["root_spread"] = profile.root_spread.str();
    return doc;
}

Json to_json(const GrcrtResult& result) {
    Json doc;
    doc["estimates"] = strings(result.estimates);
    doc["folding"] = strings(result.folding);
    Json matched = Json::array();
    for (const auto& row : result.matched_shifted) matched.push_back(strings(row));
    doc["matched_shifted"] = matched;
    Json cols = Json::array();
    for (const auto& row : result.matched_columns) {
        Json r = Json::array();
        for (std::size_t c : row) r.push_back(std::to_string(c));
        cols.push_back(r);
    }
    doc["matched_columns"] = cols;
    doc["analysis"] = to_json(result.analysis);
    doc["profile"] = to_json(result.profile);
    doc["diagnostics"] = result.diagnostics;
    return doc;
}

Json to_json(const RangeCheckReport& report) {
    Json doc;
    doc["d_bound"] = to_string(report.d_bound);
    doc["sum_clause"] = to_string(report.sum_clause);
    doc["sum_ok"] = report.sum_ok;
    Json clauses = Json::array();
    for (std::size_t i = 0; i < report.power_clauses.size(); ++i)
        clauses.push_back(Json{{"k", std::to_string(i + 2)},
                               {"bound", to_string(report.power_clauses[i])},
                               {"ok", report.power_ok[i]}});
    doc["power_clauses"] = clauses;
    doc["repeated_residue_bound"] = report.repeated_residue_bound.str();
    doc["pass"] = report.pass;
    return doc;
}

ResidueTable residue_table_from_json(const Json& doc, const GammaModuli& gm) {
    if (!doc.contains("rows"))
        throw domain_error("residue table: missing \"rows\"");
    const Json& rows_json = doc["rows"];
    if (!rows_json.is_array() || rows_json.empty())
        throw domain_error("residue table: \"rows\" must be a non-empty array");
    std::vector<std::vector<Int>> rows;
    rows.reserve(rows_json.size());
    for (const auto& row : rows_json) rows.push_back(parse_int_array(row, "residue row"));
    std::size_t count = rows.front().size();
    return make_residue_table(gm, count, std::move(rows));
}

Json to_json(const ResidueTable& table) {
    Json doc;
    doc["gamma"] = table.gm.gamma().str();
    doc["coprime_parts"] = strings(table.gm.coprime_parts());
    Json rows = Json::array();
    for (const auto& row : table.rows) rows.push_back(strings(row));
    doc["rows"] = rows;
    doc["count"] = std::to_string(table.count);
    return doc;
}

void save_error_list(const ErrorList& el, const std::string& path) {
    Json doc;
    doc["format"] = "rcrt-error-list";
    doc["version"] = 1;
    doc["moduli"] = strings(el.moduli);
    doc["delta4"] = el.delta4.str();
    doc["alpha_radius"] = el.alpha_radius.str();
    doc["tau"] = el.tau.str();
    doc["skipped_inconsistent"] = std::to_string(el.skipped_inconsistent);
    Json entries = Json::array();
    for (const ErrorListEntry& e : el.entries) {
        Json alphas = Json::array();
        for (const auto& a : e.alphas) alphas.push_back(strings(a));
        entries.push_back(Json{{"value", e.value.str()}, {"alphas", alphas}});
    }
    doc["entries"] = entries;
    std::ofstream out(path);
    if (!out) throw error("save_error_list: cannot open " + path);
    out << doc.dump(1) << "\n";
}

ErrorList load_error_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("load_error_list: cannot open " + path);
    Json doc = Json::parse(in, nullptr, true);
    if (doc.value("format", "") != "rcrt-error-list" || doc.value("version", 0) != 1)
        throw domain_error("load_error_list: unrecognized file format");
    ErrorList el;
    el.moduli = parse_int_array(doc["moduli"], "error list moduli");
    el.delta4 = parse_int(doc["delta4"].get<std::string>());
    el.alpha_radius = parse_int(doc["alpha_radius"].get<std::string>());
    el.tau = parse_int(doc["tau"].get<std::string>());
    el.skipped_inconsistent =
        std::stoull(doc.value("skipped_inconsistent", std::string("0")));
    for (const auto& e : doc["entries"]) {
        ErrorListEntry entry;
        entry.value = parse_int(e["value"].get<std::string>());
        for (const auto& a : e["alphas"])
            entry.alphas.push_back(parse_int_array(a, "alpha vector"));
        el.entries.push_back(std::move(entry));
    }
    return el;
}

}  // namespace rcrt
