#pragma once

#include <string>

#include <json.hpp>

namespace mgl {

inline constexpr const char* kToolName = "mglab";
inline constexpr const char* kToolVersion = "0.1.0";

// Standard envelope for every CLI report.  Deterministic content lives in
// "inputs" and "results"; wall time and other run-dependent metadata are
// confined to "meta" so byte comparison of stripped reports is meaningful.
// The anchor names the mathematical statement the report checks.
nlohmann::json make_report(const std::string& command, const std::string& anchor,
                           const nlohmann::json& inputs,
                           const nlohmann::json& results, bool pass);

// Adds run-dependent metadata in place.  Keys under "meta" never affect
// determinism comparisons.
void attach_meta(nlohmann::json& report, double wall_seconds);

// Copy of the report with every "meta" object removed, recursively.
nlohmann::json strip_meta(nlohmann::json report);

// Serializes with a trailing newline.  Path "-" writes to stdout.
void write_report(const nlohmann::json& report, const std::string& path);

}  // namespace mgl
