#ifndef SESSIONLINK_EXPERIMENT_H_
#define SESSIONLINK_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sessionlink/attack.h"
#include "sessionlink/corpus.h"
#include "sessionlink/defense.h"
#include "sessionlink/fingerprint.h"
#include "sessionlink/metrics.h"

namespace sessionlink {

struct ExperimentConfig {
  FingerprintSpec fingerprint;
  AttackConfig attack;
  // Seeds inside are ignored; each trial derives its own.
  std::optional<DefenseConfig> defense;
  int n_users = 20;
  int min_pages = 40;
  int n_trials = 20;
  std::uint64_t master_seed = 0;
  bool truncate_to_k = false;
  // Concurrent trials; 0 means the hardware concurrency. Results do not
  // depend on this.
  int parallel = 0;
};

struct MetricAverages {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double reach = 0;

  friend bool operator==(const MetricAverages&, const MetricAverages&) = default;
};

// "Worst case" follows the privacy reading: the trial where the attacker
// did best, i.e. the highest F1 (earliest trial on ties).
struct ExperimentReport {
  std::string label;
  nlohmann::json config;  // echo of the ExperimentConfig
  std::vector<MetricsResult> trials;
  int worst_case_trial = 0;
  MetricsResult worst_case;
  MetricAverages averages;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

// Short method description used as the report row label, e.g.
// "weighted_closeness/tag_count+chaff(S=1,P=10)".
std::string ExperimentLabel(const ExperimentConfig& config);

// One trial: sample and split, optional chaff, fingerprint, score, pick
// the F1-maximising cutoff. Classifier attacks additionally draw a disjoint
// set of n users to train on.
MetricsResult RunTrial(const Corpus& corpus, const ExperimentConfig& config,
                       int trial_index);

// Runs n_trials trials and aggregates them. A failing trial aborts the
// experiment with a TrialError carrying its index.
ExperimentReport RunExperiment(const Corpus& corpus,
                               const ExperimentConfig& config);

ExperimentReport AggregateTrials(std::string label, nlohmann::json config,
                                 std::vector<MetricsResult> trials);

enum class SweepAxis { kNUsers, kMinPages };

std::string_view SweepAxisName(SweepAxis axis);
std::optional<SweepAxis> ParseSweepAxis(std::string_view name);

struct SweepEntry {
  int value = 0;
  std::optional<ExperimentReport> report;
  std::string error;  // set when report is empty
};

// One experiment per value, all with the base master seed. A failing value
// is recorded and the sweep continues.
std::vector<SweepEntry> RunSweep(const Corpus& corpus,
                                 const ExperimentConfig& base, SweepAxis axis,
                                 std::span<const int> values);

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config);

}  // namespace sessionlink

#endif  // SESSIONLINK_EXPERIMENT_H_
