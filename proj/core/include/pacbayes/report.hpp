#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pacbayes/experiment.hpp"

namespace pacbayes {

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(std::string_view name);

/// Column names of the flat CSV schema; one row per (report, bound).
const std::vector<std::string>& csv_columns();

nlohmann::json to_json(const BoundReport& report);
BoundReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const std::vector<BoundReport>& reports);
std::vector<BoundReport> reports_from_json(const nlohmann::json& j);

void write_csv(const std::vector<BoundReport>& reports, std::ostream& out);
void write_json(const std::vector<BoundReport>& reports, std::ostream& out);

/// Writes `reports` to `path`. Throws DataError if the file cannot be written
/// and DomainError for an empty report list.
void emit_report(const std::vector<BoundReport>& reports, ReportFormat format,
                 const std::filesystem::path& path);

/// Same, to a stream.
void emit_report(const std::vector<BoundReport>& reports, ReportFormat format, std::ostream& out);

}  // namespace pacbayes
