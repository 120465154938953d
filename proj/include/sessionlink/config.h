#ifndef SESSIONLINK_CONFIG_H_
#define SESSIONLINK_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "sessionlink/corpus.h"
#include "sessionlink/experiment.h"
#include "sessionlink/report.h"

namespace sessionlink {

enum class CorpusSourceKind { kMsnbc, kPageRecords, kSynthetic };

struct CorpusSource {
  std::filesystem::path path;
  CorpusSourceKind kind = CorpusSourceKind::kMsnbc;
};

struct OutputSpec {
  std::optional<std::filesystem::path> path;
  ReportFormat format = ReportFormat::kText;
};

// A run definition as stored on disk. Relative paths are resolved against
// the directory holding the config file.
struct RunConfigFile {
  CorpusSource corpus;
  ExperimentConfig experiment;
  OutputSpec output;
};

// Validates every field and throws ConfigError listing all problems. The
// protocol seed is mandatory and referenced input files must exist.
RunConfigFile ParseRunConfig(const nlohmann::json& j,
                             const std::filesystem::path& base_dir);
RunConfigFile LoadRunConfig(const std::filesystem::path& path);

Corpus LoadRunCorpus(const CorpusSource& source);

// Echo written into reports: the experiment config plus the corpus source.
nlohmann::json RunConfigEcho(const RunConfigFile& config);

}  // namespace sessionlink

#endif  // SESSIONLINK_CONFIG_H_
