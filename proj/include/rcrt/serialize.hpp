#pragma once

/**
 * @file serialize.hpp
 * @brief JSON views of the public types. Every numeric field is emitted as
 *        a decimal string so big integers survive round trips losslessly.
 */

#include "rcrt/multi.hpp"
#include "rcrt/range.hpp"
#include "rcrt/select.hpp"
#include "rcrt/single.hpp"

#include <json.hpp>

#include <string>

namespace rcrt {

using Json = nlohmann::json;

Json to_json(const RangeProfile& profile);
Json to_json(const CapacityBounds& bounds);
Json to_json(const DecodeResult& result);
Json to_json(const SelectionReport& report);
Json to_json(const CommonResidueAnalysis& analysis);
Json to_json(const SymmetricProfile& profile);
Json to_json(const GrcrtResult& result);
Json to_json(const RangeCheckReport& report);

/// {"rows": [[decimal strings]]} -> table over the given moduli.
ResidueTable residue_table_from_json(const Json& doc, const GammaModuli& gm);
Json to_json(const ResidueTable& table);

/// Versioned error-list file: header, tau, then sorted entries.
void save_error_list(const ErrorList& el, const std::string& path);
ErrorList load_error_list(const std::string& path);

std::string format_real(double v);

}  // namespace rcrt
