#include "sessionlink/report.h"

#include <cstdio>
#include <istream>
#include <ostream>

#include "sessionlink/errors.h"
#include "sessionlink/json_io.h"

namespace sessionlink {
namespace {

using nlohmann::json;

constexpr const char* kReportFormat = "sessionlink.report";
constexpr int kReportVersion = 1;
constexpr const char* kColumns = "F1 Precision Recall Reach";

std::string Fixed2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

json MetricsToJson(const MetricsResult& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"reach", m.reach},
          {"cutoff", m.cutoff}};
}

MetricsResult MetricsFromJson(const json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(),
          j.at("f1").get<double>(), j.at("reach").get<int>(),
          j.at("cutoff").get<double>()};
}

// Rows shared by every format: prefix columns, statistic, then metrics.
struct Row {
  std::vector<std::string> prefix;
  std::string statistic;
  std::string text_values;
  std::vector<std::string> full_values;
};

std::vector<Row> ReportRows(const ExperimentReport& r,
                            std::vector<std::string> prefix) {
  const MetricsResult& w = r.worst_case;
  const MetricAverages& a = r.averages;
  return {
      {prefix, "worst", FormatMetricsRow(w),
       {FormatDouble(w.f1), FormatDouble(w.precision), FormatDouble(w.recall),
        std::to_string(w.reach)}},
      {prefix, "average", FormatAveragesRow(a),
       {FormatDouble(a.f1), FormatDouble(a.precision), FormatDouble(a.recall),
        FormatDouble(a.reach)}},
  };
}

void WriteRows(const std::vector<std::string>& prefix_header,
               const std::vector<Row>& rows, ReportFormat format,
               std::ostream& out) {
  const bool csv = format == ReportFormat::kDelimited;
  const char sep = csv ? ',' : ' ';
  for (const std::string& h : prefix_header) out << h << sep;
  if (csv) {
    out << "statistic,f1,precision,recall,reach\n";
  } else {
    out << "Statistic " << kColumns << '\n';
  }
  for (const Row& row : rows) {
    for (const std::string& p : row.prefix) out << (csv ? CsvField(p) : p) << sep;
    out << row.statistic << sep;
    if (csv) {
      for (std::size_t i = 0; i < row.full_values.size(); ++i) {
        out << (i ? "," : "") << row.full_values[i];
      }
    } else {
      out << row.text_values;
    }
    out << '\n';
  }
}

}  // namespace

std::optional<ReportFormat> ParseReportFormat(std::string_view name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kDelimited;
  if (name == "json") return ReportFormat::kStructured;
  return std::nullopt;
}

std::string FormatMetricsRow(const MetricsResult& m) {
  return Fixed2(m.f1) + " " + Fixed2(m.precision) + " " + Fixed2(m.recall) +
         " " + std::to_string(m.reach);
}

std::string FormatAveragesRow(const MetricAverages& a) {
  return Fixed2(a.f1) + " " + Fixed2(a.precision) + " " + Fixed2(a.recall) +
         " " + Fixed2(a.reach);
}

json ReportToJson(const ExperimentReport& report) {
  json trials = json::array();
  for (const MetricsResult& m : report.trials) trials.push_back(MetricsToJson(m));
  json worst = MetricsToJson(report.worst_case);
  worst["trial"] = report.worst_case_trial;
  return {{"label", report.label},
          {"config", report.config},
          {"trials", trials},
          {"worst_case", worst},
          {"averages",
           {{"precision", report.averages.precision},
            {"recall", report.averages.recall},
            {"f1", report.averages.f1},
            {"reach", report.averages.reach}}}};
}

ExperimentReport ReportFromJson(const json& j) {
  try {
    ExperimentReport r;
    r.label = j.at("label").get<std::string>();
    r.config = j.at("config");
    for (const json& t : j.at("trials")) r.trials.push_back(MetricsFromJson(t));
    r.worst_case = MetricsFromJson(j.at("worst_case"));
    r.worst_case_trial = j.at("worst_case").at("trial").get<int>();
    const json& a = j.at("averages");
    r.averages = {a.at("precision").get<double>(), a.at("recall").get<double>(),
                  a.at("f1").get<double>(), a.at("reach").get<double>()};
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad report: ") + e.what(), 0);
  }
}

void EmitReports(std::span<const ExperimentReport> reports, ReportFormat format,
                 std::ostream& out) {
  if (format == ReportFormat::kStructured) {
    json list = json::array();
    for (const ExperimentReport& r : reports) list.push_back(ReportToJson(r));
    out << json{{"format", kReportFormat},
                {"version", kReportVersion},
                {"reports", list}}
               .dump(2)
        << '\n';
    return;
  }
  std::vector<Row> rows;
  for (const ExperimentReport& r : reports) {
    for (Row& row : ReportRows(r, {r.label})) rows.push_back(std::move(row));
  }
  WriteRows({format == ReportFormat::kDelimited ? "method" : "Method"}, rows,
            format, out);
}

void EmitDefenseComparison(const ExperimentReport& undefended,
                           const ExperimentReport& defended,
                           ReportFormat format, std::ostream& out) {
  const double worst_delta = defended.worst_case.f1 - undefended.worst_case.f1;
  const double average_delta = defended.averages.f1 - undefended.averages.f1;
  if (format == ReportFormat::kStructured) {
    out << json{{"format", kReportFormat},
                {"version", kReportVersion},
                {"reports",
                 {ReportToJson(undefended), ReportToJson(defended)}},
                {"f1_delta",
                 {{"worst_case", worst_delta}, {"average", average_delta}}}}
               .dump(2)
        << '\n';
    return;
  }
  const ExperimentReport both[] = {undefended, defended};
  EmitReports(both, format, out);
  if (format == ReportFormat::kDelimited) {
    out << "f1_delta,worst," << FormatDouble(worst_delta) << '\n'
        << "f1_delta,average," << FormatDouble(average_delta) << '\n';
  } else {
    out << "F1 delta (defended - undefended): worst " << Fixed2(worst_delta)
        << ", average " << Fixed2(average_delta) << '\n';
  }
}

void EmitSweep(std::span<const SweepEntry> entries, SweepAxis axis,
               ReportFormat format, std::ostream& out) {
  const std::string axis_name(SweepAxisName(axis));
  if (format == ReportFormat::kStructured) {
    json list = json::array();
    for (const SweepEntry& e : entries) {
      json item = {{"value", e.value}};
      if (e.report) {
        item["report"] = ReportToJson(*e.report);
      } else {
        item["error"] = e.error;
      }
      list.push_back(std::move(item));
    }
    out << json{{"format", kReportFormat},
                {"version", kReportVersion},
                {"axis", axis_name},
                {"sweep", list}}
               .dump(2)
        << '\n';
    return;
  }
  // One row per value: worst-case metrics followed by the averages.
  const bool csv = format == ReportFormat::kDelimited;
  if (csv) {
    out << "axis,value,f1,precision,recall,reach,avg_f1,avg_precision,"
           "avg_recall,avg_reach,error\n";
  } else {
    out << "Axis Value " << kColumns
        << " AvgF1 AvgPrecision AvgRecall AvgReach\n";
  }
  for (const SweepEntry& e : entries) {
    out << axis_name << (csv ? ',' : ' ') << e.value << (csv ? ',' : ' ');
    if (!e.report) {
      out << (csv ? ",,,,,,,," + CsvField(e.error) : "error: " + e.error) << '\n';
      continue;
    }
    const MetricsResult& w = e.report->worst_case;
    const MetricAverages& a = e.report->averages;
    if (csv) {
      out << FormatDouble(w.f1) << ',' << FormatDouble(w.precision) << ','
          << FormatDouble(w.recall) << ',' << w.reach << ',' << FormatDouble(a.f1)
          << ',' << FormatDouble(a.precision) << ',' << FormatDouble(a.recall)
          << ',' << FormatDouble(a.reach) << ",\n";
    } else {
      out << FormatMetricsRow(w) << ' ' << FormatAveragesRow(a) << '\n';
    }
  }
}

std::vector<ExperimentReport> ParseStructuredReports(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
  if (doc.value("format", "") != kReportFormat ||
      doc.value("version", 0) != kReportVersion) {
    throw ParseError("not a version 1 report document", 0);
  }
  std::vector<ExperimentReport> reports;
  for (const json& r : doc.at("reports")) reports.push_back(ReportFromJson(r));
  return reports;
}

}  // namespace sessionlink
