#include "sessionlink/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "sessionlink/config.h"
#include "sessionlink/errors.h"

namespace sessionlink {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config;
  std::string output;
  std::string format;
  int parallel = -1;
  std::string log_level = "warn";
};

fs::path FindConfig(const std::string& name) {
  const fs::path path(name);
  if (path.is_absolute() || fs::exists(path)) return path;
  if (const char* dir = std::getenv(kConfigDirEnv)) {
    const fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate;
  }
  return path;
}

RunConfigFile LoadWithOverrides(const GlobalOptions& g) {
  if (g.config.empty()) throw UsageError("--config is required");
  RunConfigFile config = LoadRunConfig(FindConfig(g.config));
  if (!g.output.empty()) config.output.path = g.output;
  if (!g.format.empty()) {
    const auto f = ParseReportFormat(g.format);
    if (!f) throw UsageError("unknown --format '" + g.format + "' (text, csv, json)");
    config.output.format = *f;
  }
  if (g.parallel >= 0) config.experiment.parallel = g.parallel;
  return config;
}

ExperimentReport Run(const Corpus& corpus, const RunConfigFile& config) {
  ExperimentReport report = RunExperiment(corpus, config.experiment);
  report.config = RunConfigEcho(config);
  return report;
}

// Writes to the configured output path, or to `out` when none is set.
// Returns true when the report went to a file.
bool WriteOutput(const OutputSpec& output, std::ostream& out,
                 const std::function<void(std::ostream&)>& emit) {
  if (!output.path) {
    emit(out);
    return false;
  }
  std::ofstream file(*output.path, std::ios::binary);
  if (!file) throw Error("cannot write " + output.path->string());
  emit(file);
  if (!file) throw Error("error writing " + output.path->string());
  return true;
}

std::vector<int> ParseValues(const std::string& text) {
  std::vector<int> values;
  std::size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw UsageError("bad value '" + item + "' in --values");
    }
    values.push_back(value);
    start = end + 1;
  }
  if (values.empty()) throw UsageError("--values must list at least one value");
  return values;
}

int CmdStats(const std::string& format, const std::string& input, int top,
             std::ostream& out) {
  const auto f = ParseCorpusFormat(format);
  if (!f) throw UsageError("unknown corpus format '" + format + "' (msnbc, records)");
  if (top < 0) throw UsageError("--top must be >= 0");
  const Corpus corpus = LoadCorpus(input, *f);
  WriteStats(CorpusStats(corpus, top), out);
  return kExitOk;
}

int CmdAttack(const GlobalOptions& g, std::ostream& out) {
  const RunConfigFile config = LoadWithOverrides(g);
  const Corpus corpus = LoadRunCorpus(config.corpus);
  const ExperimentReport report = Run(corpus, config);
  const ExperimentReport reports[] = {report};
  if (WriteOutput(config.output, out, [&](std::ostream& s) {
        EmitReports(reports, config.output.format, s);
      })) {
    out << report.label << " worst " << FormatMetricsRow(report.worst_case) << '\n';
  }
  return kExitOk;
}

int CmdDefend(const GlobalOptions& g, std::ostream& out) {
  RunConfigFile defended = LoadWithOverrides(g);
  if (!defended.experiment.defense) {
    throw ConfigError({"defense: missing section"});
  }
  RunConfigFile undefended = defended;
  undefended.experiment.defense.reset();
  const Corpus corpus = LoadRunCorpus(defended.corpus);
  const ExperimentReport before = Run(corpus, undefended);
  const ExperimentReport after = Run(corpus, defended);
  if (WriteOutput(defended.output, out, [&](std::ostream& s) {
        EmitDefenseComparison(before, after, defended.output.format, s);
      })) {
    out << before.label << " worst " << FormatMetricsRow(before.worst_case) << '\n'
        << after.label << " worst " << FormatMetricsRow(after.worst_case) << '\n';
  }
  return kExitOk;
}

int CmdSweep(const GlobalOptions& g, const std::string& axis_name,
             const std::string& values_text, std::ostream& out) {
  const auto axis = ParseSweepAxis(axis_name);
  if (!axis) {
    throw UsageError("unknown --axis '" + axis_name + "' (n_users, min_pages)");
  }
  const std::vector<int> values = ParseValues(values_text);
  const RunConfigFile config = LoadWithOverrides(g);
  const Corpus corpus = LoadRunCorpus(config.corpus);
  std::vector<SweepEntry> entries = RunSweep(corpus, config.experiment, *axis, values);
  for (SweepEntry& e : entries) {
    if (!e.report) continue;
    RunConfigFile echo = config;
    (*axis == SweepAxis::kNUsers ? echo.experiment.n_users
                                 : echo.experiment.min_pages) = e.value;
    e.report->config = RunConfigEcho(echo);
  }
  if (WriteOutput(config.output, out, [&](std::ostream& s) {
        EmitSweep(entries, *axis, config.output.format, s);
      })) {
    for (const SweepEntry& e : entries) {
      out << SweepAxisName(*axis) << ' ' << e.value << ' '
          << (e.report ? "worst " + FormatMetricsRow(e.report->worst_case)
                       : "error " + e.error)
          << '\n';
    }
  }
  return kExitOk;
}

// Routes library log output to `err` for the duration of a run.
class LogScope {
 public:
  LogScope(std::ostream& err, spdlog::level::level_enum level)
      : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    sink->set_pattern("%l: %v");
    auto logger = std::make_shared<spdlog::logger>("sessionlink", sink);
    logger->set_level(level);
    spdlog::set_default_logger(logger);
  }
  ~LogScope() { spdlog::set_default_logger(previous_); }

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Links browsing sessions of the same user from page content."};
  app.name("sessionlink");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Run configuration (JSON)");
  app.add_option("--output", g.output, "Report path, overriding the config");
  app.add_option("--format", g.format, "Report format: text, csv, json");
  app.add_option("--parallel", g.parallel, "Maximum concurrent trials")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--log-level", g.log_level,
                 "trace, debug, info, warn, error, critical, off");

  std::string corpus_format = "msnbc";
  std::string input;
  int top = 10;
  CLI::App* stats = app.add_subcommand("stats", "Summarise a corpus");
  stats->add_option("--format", corpus_format, "Corpus format: msnbc, records");
  stats->add_option("--input", input, "Corpus file")->required();
  stats->add_option("--top", top, "Domains and tags to list");

  CLI::App* attack = app.add_subcommand("attack", "Run an attack experiment");
  CLI::App* defend =
      app.add_subcommand("defend", "Compare an attack with and without chaff");

  std::string axis;
  std::string values;
  CLI::App* sweep = app.add_subcommand("sweep", "Repeat an experiment over one parameter");
  sweep->add_option("--axis", axis, "n_users or min_pages")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const auto level = spdlog::level::from_str(g.log_level);
  if (level == spdlog::level::off && g.log_level != "off") {
    err << "error: unknown --log-level '" << g.log_level << "'\n";
    return kExitUsage;
  }
  LogScope log_scope(err, level);

  try {
    if (*stats) return CmdStats(corpus_format, input, top, out);
    if (*attack) return CmdAttack(g, out);
    if (*defend) return CmdDefend(g, out);
    if (*sweep) return CmdSweep(g, axis, values, out);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const EmptyCorpusError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InvalidSpecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace sessionlink
