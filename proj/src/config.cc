#include "sessionlink/config.h"

#include <fstream>

#include "sessionlink/errors.h"
#include "sessionlink/synthetic.h"

namespace sessionlink {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Collects every validation problem instead of stopping at the first.
class Validator {
 public:
  // Null when the section is absent or not an object; fields of a null
  // section are not reported individually.
  const json* Section(const json* root, const std::string& name, bool required) {
    if (root == nullptr) return nullptr;
    if (!root->contains(name)) {
      if (required) Problem(name, "missing section");
      return nullptr;
    }
    if (!(*root)[name].is_object()) {
      Problem(name, "must be an object");
      return nullptr;
    }
    return &(*root)[name];
  }

  template <typename T>
  std::optional<T> Get(const json* section, const std::string& prefix,
                       const std::string& key, bool required) {
    if (section == nullptr) return std::nullopt;
    const std::string field = prefix + "." + key;
    if (!section->contains(key)) {
      if (required) Problem(field, "missing");
      return std::nullopt;
    }
    try {
      return (*section)[key].get<T>();
    } catch (const json::exception&) {
      Problem(field, "has the wrong type");
      return std::nullopt;
    }
  }

  void Problem(const std::string& field, const std::string& message) {
    problems_.push_back(field + ": " + message);
  }

  std::vector<std::string>& problems() { return problems_; }

 private:
  std::vector<std::string> problems_;
};

fs::path Resolve(const fs::path& base, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

RunConfigFile ParseRunConfig(const json& j, const fs::path& base_dir) {
  Validator v;
  RunConfigFile config;
  if (!j.is_object()) throw ConfigError({"config: must be a JSON object"});

  // corpus
  const json* corpus = v.Section(&j, "corpus", true);
  if (const auto format = v.Get<std::string>(corpus, "corpus", "format", true)) {
    if (*format == "synthetic") {
      config.corpus.kind = CorpusSourceKind::kSynthetic;
    } else if (const auto f = ParseCorpusFormat(*format)) {
      config.corpus.kind = *f == CorpusFormat::kMsnbc ? CorpusSourceKind::kMsnbc
                                                      : CorpusSourceKind::kPageRecords;
    } else {
      v.Problem("corpus.format", "unknown format '" + *format +
                                     "' (msnbc, records, synthetic)");
    }
  }
  if (const auto path = v.Get<std::string>(corpus, "corpus", "path", true)) {
    config.corpus.path = Resolve(base_dir, *path);
    if (!fs::exists(config.corpus.path)) {
      v.Problem("corpus.path", "no such file '" + config.corpus.path.string() + "'");
    }
  }

  // fingerprint
  ExperimentConfig& e = config.experiment;
  const json* fp = v.Section(&j, "fingerprint", true);
  if (const auto kind = v.Get<std::string>(fp, "fingerprint", "kind", true)) {
    if (const auto k = ParseFingerprintKind(*kind)) {
      e.fingerprint.kind = *k;
    } else {
      v.Problem("fingerprint.kind", "unknown kind '" + *kind + "'");
    }
  }
  if (const auto f = v.Get<double>(fp, "fingerprint", "max_document_fraction", false)) {
    if (*f <= 0 || *f > 1) {
      v.Problem("fingerprint.max_document_fraction", "must lie in (0, 1]");
    }
    e.fingerprint.tfidf.max_document_fraction = *f;
  }
  e.fingerprint.tfidf.stopwords = DefaultStopwords();
  if (const auto path = v.Get<std::string>(fp, "fingerprint", "stopwords", false)) {
    const fs::path resolved = Resolve(base_dir, *path);
    if (!fs::exists(resolved)) {
      v.Problem("fingerprint.stopwords", "no such file '" + resolved.string() + "'");
    } else {
      e.fingerprint.tfidf.stopwords = LoadStopwords(resolved);
    }
  }
  const json* ae = v.Section(fp, "autoencoder", false);
  if (const auto h = v.Get<int>(ae, "fingerprint.autoencoder", "hidden_dim", false)) {
    if (*h < 0) v.Problem("fingerprint.autoencoder.hidden_dim", "must be >= 0");
    e.fingerprint.autoencoder.hidden_dim = *h;
  }
  if (const auto n = v.Get<int>(ae, "fingerprint.autoencoder", "epochs", false)) {
    if (*n < 1) v.Problem("fingerprint.autoencoder.epochs", "must be >= 1");
    e.fingerprint.autoencoder.epochs = *n;
  }
  if (const auto lr = v.Get<double>(ae, "fingerprint.autoencoder", "learning_rate", false)) {
    if (!(*lr > 0)) v.Problem("fingerprint.autoencoder.learning_rate", "must be > 0");
    e.fingerprint.autoencoder.learning_rate = *lr;
  }

  // attack
  const json* attack = v.Section(&j, "attack", true);
  if (const auto method = v.Get<std::string>(attack, "attack", "method", true)) {
    if (const auto m = ParseAttackMethod(*method)) {
      e.attack.method = *m;
    } else {
      v.Problem("attack.method", "unknown method '" + *method + "'");
    }
  }
  if (const auto eps = v.Get<double>(attack, "attack", "epsilon", false)) {
    if (!(*eps > 0)) v.Problem("attack.epsilon", "must be > 0");
    e.attack.closeness.epsilon = *eps;
  }
  if (const auto d = v.Get<std::string>(attack, "attack", "denominator", false)) {
    if (const auto variant = ParseDenominatorVariant(*d)) {
      e.attack.closeness.variant = *variant;
    } else {
      v.Problem("attack.denominator", "unknown variant '" + *d +
                                          "' (reciprocal, linear)");
    }
  }
  if (const auto x = v.Get<bool>(attack, "attack", "exclude_pair", false)) {
    e.attack.closeness.exclude_pair = *x;
  }
  const json* cls = v.Section(attack, "classifier", false);
  ClassifierOptions& c = e.attack.classifier;
  if (const auto h = v.Get<int>(cls, "attack.classifier", "hidden_units", false)) {
    if (*h < 1) v.Problem("attack.classifier.hidden_units", "must be >= 1");
    c.hidden_units = *h;
  }
  if (const auto n = v.Get<int>(cls, "attack.classifier", "epochs", false)) {
    if (*n < 1) v.Problem("attack.classifier.epochs", "must be >= 1");
    c.epochs = *n;
  }
  if (const auto lr = v.Get<double>(cls, "attack.classifier", "learning_rate", false)) {
    if (!(*lr > 0)) v.Problem("attack.classifier.learning_rate", "must be > 0");
    c.learning_rate = *lr;
  }
  if (const auto b = v.Get<bool>(cls, "attack.classifier", "balance_classes", false)) {
    c.balance_classes = *b;
  }

  // defense
  if (j.contains("defense") && !j["defense"].is_null()) {
    const json* d = v.Section(&j, "defense", true);
    DefenseConfig defense;
    if (const auto s = v.Get<int>(d, "defense", "session_sample_size", true)) {
      if (*s < 1) v.Problem("defense.session_sample_size", "must be >= 1");
      defense.session_sample_size = *s;
    }
    if (const auto p = v.Get<int>(d, "defense", "page_sample_size", true)) {
      if (*p < 1) v.Problem("defense.page_sample_size", "must be >= 1");
      defense.page_sample_size = *p;
    }
    e.defense = defense;
  }

  // protocol
  const json* protocol = v.Section(&j, "protocol", true);
  if (const auto n = v.Get<int>(protocol, "protocol", "n_users", true)) {
    if (*n < 1) v.Problem("protocol.n_users", "must be >= 1");
    e.n_users = *n;
  }
  if (const auto k = v.Get<int>(protocol, "protocol", "min_pages", true)) {
    if (*k < 2) v.Problem("protocol.min_pages", "must be >= 2");
    e.min_pages = *k;
  }
  if (const auto t = v.Get<int>(protocol, "protocol", "n_trials", false)) {
    if (*t < 1) v.Problem("protocol.n_trials", "must be >= 1");
    e.n_trials = *t;
  }
  if (const auto seed = v.Get<std::uint64_t>(protocol, "protocol", "seed", true)) {
    e.master_seed = *seed;
  }
  if (const auto t = v.Get<bool>(protocol, "protocol", "truncate_to_k", false)) {
    e.truncate_to_k = *t;
  }

  // output
  const json* output = v.Section(&j, "output", false);
  if (const auto path = v.Get<std::string>(output, "output", "path", false)) {
    config.output.path = Resolve(base_dir, *path);
  }
  if (const auto format = v.Get<std::string>(output, "output", "format", false)) {
    if (const auto f = ParseReportFormat(*format)) {
      config.output.format = *f;
    } else {
      v.Problem("output.format", "unknown format '" + *format + "' (text, csv, json)");
    }
  }

  if (!v.problems().empty()) throw ConfigError(std::move(v.problems()));
  return config;
}

RunConfigFile LoadRunConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open '" + path.string() + "'"});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({"config: " + std::string(e.what())});
  }
  return ParseRunConfig(j, path.parent_path());
}

Corpus LoadRunCorpus(const CorpusSource& source) {
  switch (source.kind) {
    case CorpusSourceKind::kMsnbc:
      return LoadCorpus(source.path, CorpusFormat::kMsnbc);
    case CorpusSourceKind::kPageRecords:
      return LoadCorpus(source.path, CorpusFormat::kPageRecords);
    case CorpusSourceKind::kSynthetic: {
      const SyntheticSpec spec = LoadSyntheticSpec(source.path);
      return GenerateSynthetic(spec, spec.seed);
    }
  }
  throw UsageError("unknown corpus source");
}

json RunConfigEcho(const RunConfigFile& config) {
  json echo = ExperimentConfigToJson(config.experiment);
  const char* kind = config.corpus.kind == CorpusSourceKind::kMsnbc ? "msnbc"
                     : config.corpus.kind == CorpusSourceKind::kPageRecords
                         ? "records"
                         : "synthetic";
  echo["corpus"] = {{"format", kind},
                    {"file", config.corpus.path.filename().string()}};
  return echo;
}

}  // namespace sessionlink
