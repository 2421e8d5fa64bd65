#pragma once

#include <iosfwd>
#include <string>

#include "elastmix/analysis.hpp"
#include "elastmix/spectral.hpp"

namespace elastmix {

inline constexpr int kReportSchemaVersion = 1;

/// Resolved study configuration as a compact JSON object.
std::string study_config_json(const StudyConfig& config);

/// One row per (nu, k, mode, N), ordered that way. The leading '#' lines
/// carry the schema version and the resolved config.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);

/// {"schema_version", "config", "blocks": [{nu, k, N, h, modes: [...]}]}.
void write_report_json(std::ostream& out, const ConvergenceReport& report);

/// Shortest round-trip decimal form; "nan" / "inf" for non-finite values.
std::string format_double(double v);

}  // namespace elastmix
