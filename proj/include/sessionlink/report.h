#ifndef SESSIONLINK_REPORT_H_
#define SESSIONLINK_REPORT_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sessionlink/experiment.h"

namespace sessionlink {

enum class ReportFormat {
  kText,        // aligned table, two decimals
  kDelimited,   // CSV, full precision
  kStructured,  // versioned JSON, full precision
};

std::optional<ReportFormat> ParseReportFormat(std::string_view name);

// "F1 Precision Recall Reach" values at two decimals, e.g.
// "0.47 0.35 0.70 14".
std::string FormatMetricsRow(const MetricsResult& metrics);
std::string FormatAveragesRow(const MetricAverages& averages);

// Columns: Method Statistic F1 Precision Recall Reach, one "worst" and one
// "average" row per report. An empty list yields only the header.
void EmitReports(std::span<const ExperimentReport> reports, ReportFormat format,
                 std::ostream& out);

// Undefended and defended reports plus the change in worst-case and average
// F1 (defended minus undefended).
void EmitDefenseComparison(const ExperimentReport& undefended,
                           const ExperimentReport& defended,
                           ReportFormat format, std::ostream& out);

// One row per value: Axis Value, the worst-case metrics, then AvgF1
// AvgPrecision AvgRecall AvgReach. Failed values appear with their error.
void EmitSweep(std::span<const SweepEntry> entries, SweepAxis axis,
               ReportFormat format, std::ostream& out);

nlohmann::json ReportToJson(const ExperimentReport& report);
ExperimentReport ReportFromJson(const nlohmann::json& j);

// Reads the "reports" array of a structured report document.
std::vector<ExperimentReport> ParseStructuredReports(std::istream& in);

}  // namespace sessionlink

#endif  // SESSIONLINK_REPORT_H_
