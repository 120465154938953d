#include "sessionlink/experiment.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "sessionlink/errors.h"
#include "sessionlink/random.h"
#include "sessionlink/sessionizer.h"

namespace sessionlink {
namespace {

using nlohmann::json;

std::vector<SessionView> Views(const Trial& trial) { return trial.AttackView(); }

std::vector<SparseVector> Fingerprints(std::span<const SessionView> views,
                                       const Corpus& corpus,
                                       const ExperimentConfig& config,
                                       std::uint64_t trial_seed) {
  return ExtractFingerprints(views, config.fingerprint, corpus.category_table(),
                             DeriveSeed(trial_seed, "autoencoder"));
}

Trial MaybeChaff(Trial trial, const ExperimentConfig& config,
                 std::uint64_t seed) {
  if (!config.defense) return trial;
  DefenseConfig defense = *config.defense;
  defense.seed = seed;
  return ApplyChaff(trial, defense).trial;
}

MetricsResult RunClassifierTrial(const Corpus& corpus,
                                 const ExperimentConfig& config,
                                 std::uint64_t trial_seed) {
  const int n = config.n_users;
  std::vector<UserLog> users = SampleUsers(corpus, 2 * n, config.min_pages,
                                           DeriveSeed(trial_seed, "sample"));
  const std::span<const UserLog> all(users);
  TrialConfig test_config{n, config.min_pages, trial_seed, config.truncate_to_k};
  TrialConfig train_config = test_config;
  train_config.seed = DeriveSeed(trial_seed, "train");

  const Trial test = MaybeChaff(MakeTrialFromUsers(all.first(n), test_config),
                                config, DeriveSeed(trial_seed, "defense"));
  const Trial train =
      MaybeChaff(MakeTrialFromUsers(all.subspan(n), train_config), config,
                 DeriveSeed(trial_seed, "defense-train"));

  // Vocabularies and the autoencoder are fitted on both samples, which the
  // attacker holds unlabelled.
  std::vector<SessionView> views = Views(train);
  const std::vector<SessionView> test_views = Views(test);
  views.insert(views.end(), test_views.begin(), test_views.end());
  std::vector<SparseVector> fingerprints =
      Fingerprints(views, corpus, config, trial_seed);
  const std::span<const SparseVector> train_fp(fingerprints.data(), train.size());
  const std::span<const SparseVector> test_fp(fingerprints.data() + train.size(),
                                              test.size());

  ClassifierOptions options = config.attack.classifier;
  options.seed = DeriveSeed(trial_seed, "attack");
  const PairClassifier model =
      TrainPairClassifier(train_fp, train.truth_pairs(), options);
  const ScoreMatrix scores = ScorePairsClassifier(model, test_fp);
  return SweepCutoff(scores, test.truth_pairs()).metrics;
}

}  // namespace

std::string ExperimentLabel(const ExperimentConfig& config) {
  std::string label = std::string(AttackMethodName(config.attack.method));
  if (config.attack.method != AttackMethod::kBaseline) {
    label += "/" + std::string(FingerprintKindName(config.fingerprint.kind));
  }
  if (config.attack.method == AttackMethod::kWeightedCloseness &&
      config.attack.closeness.variant != DenominatorVariant::kReciprocal) {
    label += "[" +
             std::string(DenominatorVariantName(config.attack.closeness.variant)) +
             "]";
  }
  if (config.defense) {
    label += "+chaff(S=" + std::to_string(config.defense->session_sample_size) +
             ",P=" + std::to_string(config.defense->page_sample_size) + ")";
  }
  return label;
}

MetricsResult RunTrial(const Corpus& corpus, const ExperimentConfig& config,
                       int trial_index) {
  const std::uint64_t trial_seed =
      DeriveSeed(config.master_seed, "trial", static_cast<std::uint64_t>(trial_index));
  if (config.attack.method == AttackMethod::kClassifier) {
    return RunClassifierTrial(corpus, config, trial_seed);
  }
  const TrialConfig trial_config{config.n_users, config.min_pages, trial_seed,
                                 config.truncate_to_k};
  const Trial trial = MaybeChaff(MakeTrial(corpus, trial_config), config,
                                 DeriveSeed(trial_seed, "defense"));
  ScoreMatrix scores;
  if (config.attack.method == AttackMethod::kBaseline) {
    scores = BaselineRandom(trial.size(), DeriveSeed(trial_seed, "attack"));
  } else {
    const std::vector<SessionView> views = Views(trial);
    const std::vector<SparseVector> fingerprints =
        Fingerprints(views, corpus, config, trial_seed);
    scores = WeightedCloseness(fingerprints, config.attack.closeness);
  }
  return SweepCutoff(scores, trial.truth_pairs()).metrics;
}

ExperimentReport AggregateTrials(std::string label, json config,
                                 std::vector<MetricsResult> trials) {
  if (trials.empty()) throw InvalidSpecError("no trials to aggregate");
  ExperimentReport report;
  report.label = std::move(label);
  report.config = std::move(config);
  report.trials = std::move(trials);
  const double count = static_cast<double>(report.trials.size());
  for (std::size_t t = 0; t < report.trials.size(); ++t) {
    const MetricsResult& m = report.trials[t];
    if (m.f1 > report.trials[report.worst_case_trial].f1) {
      report.worst_case_trial = static_cast<int>(t);
    }
    report.averages.precision += m.precision / count;
    report.averages.recall += m.recall / count;
    report.averages.f1 += m.f1 / count;
    report.averages.reach += m.reach / count;
  }
  report.worst_case = report.trials[report.worst_case_trial];
  return report;
}

ExperimentReport RunExperiment(const Corpus& corpus,
                               const ExperimentConfig& config) {
  if (config.n_trials < 1) throw InvalidSpecError("n_trials must be at least 1");
  const int n = config.n_trials;
  std::vector<MetricsResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  int workers = config.parallel > 0
                    ? config.parallel
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n);

  std::atomic<int> next{0};
  const auto work = [&] {
    for (int t = next++; t < n; t = next++) {
      try {
        results[t] = RunTrial(corpus, config, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (int t = 0; t < n; ++t) {
    if (!errors[t]) continue;
    try {
      std::rethrow_exception(errors[t]);
    } catch (const std::exception& e) {
      throw TrialError(t, e.what());
    }
  }
  return AggregateTrials(ExperimentLabel(config), ExperimentConfigToJson(config),
                         std::move(results));
}

std::string_view SweepAxisName(SweepAxis axis) {
  return axis == SweepAxis::kNUsers ? "n_users" : "min_pages";
}

std::optional<SweepAxis> ParseSweepAxis(std::string_view name) {
  if (name == "n_users") return SweepAxis::kNUsers;
  if (name == "min_pages") return SweepAxis::kMinPages;
  return std::nullopt;
}

std::vector<SweepEntry> RunSweep(const Corpus& corpus,
                                 const ExperimentConfig& base, SweepAxis axis,
                                 std::span<const int> values) {
  std::vector<SweepEntry> entries;
  entries.reserve(values.size());
  for (int value : values) {
    ExperimentConfig config = base;
    (axis == SweepAxis::kNUsers ? config.n_users : config.min_pages) = value;
    SweepEntry entry{value, std::nullopt, {}};
    try {
      entry.report = RunExperiment(corpus, config);
    } catch (const Error& e) {
      spdlog::warn("sweep {}={} failed: {}", SweepAxisName(axis), value, e.what());
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

json ExperimentConfigToJson(const ExperimentConfig& config) {
  json fingerprint = {{"kind", FingerprintKindName(config.fingerprint.kind)}};
  if (config.fingerprint.kind == FingerprintKind::kTfidf) {
    fingerprint["max_document_fraction"] =
        config.fingerprint.tfidf.max_document_fraction;
    fingerprint["stopword_count"] = config.fingerprint.tfidf.stopwords.size();
    fingerprint["autoencoder"] = {
        {"hidden_dim", config.fingerprint.autoencoder.hidden_dim},
        {"epochs", config.fingerprint.autoencoder.epochs},
        {"learning_rate", config.fingerprint.autoencoder.learning_rate}};
  }
  json attack = {{"method", AttackMethodName(config.attack.method)}};
  if (config.attack.method == AttackMethod::kWeightedCloseness) {
    attack["epsilon"] = config.attack.closeness.epsilon;
    attack["denominator"] =
        DenominatorVariantName(config.attack.closeness.variant);
    attack["exclude_pair"] = config.attack.closeness.exclude_pair;
  } else if (config.attack.method == AttackMethod::kClassifier) {
    const ClassifierOptions& c = config.attack.classifier;
    attack["classifier"] = {{"hidden_units", c.hidden_units},
                            {"epochs", c.epochs},
                            {"learning_rate", c.learning_rate},
                            {"balance_classes", c.balance_classes}};
  }
  json j = {{"fingerprint", fingerprint},
            {"attack", attack},
            {"protocol",
             {{"n_users", config.n_users},
              {"min_pages", config.min_pages},
              {"n_trials", config.n_trials},
              {"seed", config.master_seed},
              {"truncate_to_k", config.truncate_to_k}}}};
  if (config.defense) {
    j["defense"] = {{"session_sample_size", config.defense->session_sample_size},
                    {"page_sample_size", config.defense->page_sample_size}};
  }
  return j;
}

}  // namespace sessionlink
