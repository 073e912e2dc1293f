#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bcreg/simbench.hpp"

namespace bcreg {

inline constexpr int kReportSchemaVersion = 1;

std::string report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const std::string& text);

/// Bundle of several reports under one schema_version. The reader also
/// accepts a single bare report.
std::string reports_to_json(const std::vector<MetricsReport>& reports);
std::vector<MetricsReport> reports_from_json(const std::string& text);

/// Header line and one flat row for table assembly.
std::string report_csv_header();
std::string report_csv_row(const MetricsReport& r);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Table in the "MSPE x 0.1" convention used by published tables: each
/// entry is mspe_mean / 10 with the bootstrap SE / 10 beside it.
std::string format_report_table(const std::vector<MetricsReport>& reports);

}  // namespace bcreg
