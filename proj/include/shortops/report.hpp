#pragma once

#include <string>

#include <json.hpp>

#include "shortops/policy.hpp"
#include "shortops/psd_core.hpp"
#include "shortops/verify.hpp"

namespace shortops {

using Json = nlohmann::json;

// Reports are versioned and key-sorted, so byte-identical runs produce
// byte-identical documents.
inline constexpr const char* kReportSchema = "shorted-ops/report-v1";

Json policy_to_json(const TolerancePolicy& pol);
Json matrix_to_json(const Matrix& m);
Json check_to_json(const PropertyCheck& check);
Json battery_to_json(const PropertyReport& report);

/// Skeleton report: schema, command, empty inputs/outputs/diagnostics.
Json make_report(const std::string& command);

/// Append {path, digest} to report["inputs"].
void add_input(Json& report, const std::string& path, const Matrix& m);

}  // namespace shortops
