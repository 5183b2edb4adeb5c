#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "opineq/generators.hpp"
#include "opineq/inequalities.hpp"
#include "opineq/operator_analysis.hpp"

namespace opineq {

inline constexpr std::string_view kToolVersion = "opineq 1.0.0";

struct ReportDocument {
  std::string tool_version{kToolVersion};
  std::string command;
  /// SHA-256 (hex) of the input bytes: matrix files, or the canonical
  /// ensemble description for sweeps.
  std::string input_digest;
  std::optional<EnsembleSpec> ensemble;
  std::optional<OperatorProfile> profile;
  std::vector<InequalityReport> reports;
  std::vector<FactorizationResult> factorizations;
  Summary summary;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

/// Non-finite reals are written as the strings "inf", "-inf", "nan";
/// undefined optionals as null.
nlohmann::json to_json(const ReportDocument& doc);
/// Throws Error(Parse) on schema mismatches.
ReportDocument report_from_json(const nlohmann::json& j);

std::string emit_json(const ReportDocument& doc);
ReportDocument parse_report(std::string_view text);

std::string sha256_hex(std::string_view bytes);

}  // namespace opineq
