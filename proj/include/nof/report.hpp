#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "nof/cylinder_core.hpp"
#include "nof/help_model.hpp"
#include "nof/rational.hpp"

namespace nof {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

using Json = nlohmann::json;

Json rational_json(const Rational& r);
Json rectangle_json(const Rectangle& r);
Json complexity_report_json(const ComplexityReport& rep);

/// Envelope every persisted report shares: tool_version, format_version,
/// config, results.
Json make_report(const std::string& command, Json config, Json results);

void write_report(const Json& record, const std::string& path);

/// Rejects unknown format versions (VersionError) and malformed files
/// (ParseError).
Json load_report(const std::string& path);

}  // namespace nof
