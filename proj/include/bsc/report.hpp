#pragma once

#include <string>

#include "json.hpp"

namespace bsc {

inline constexpr const char* kToolName = "bsc";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "bsc-report/1";

// Report skeleton with stable field order; findings are filled per command.
nlohmann::ordered_json make_report(const std::string& command, const std::string& input_path,
                                   const std::string& input_bytes);

// Rendering used everywhere a report is written (stable bytes).
std::string render_report(const nlohmann::ordered_json& rep);

// Copy with the timing field removed, for determinism comparisons.
nlohmann::ordered_json strip_timing(nlohmann::ordered_json rep);

}  // namespace bsc
