#include "sessionlink/fingerprint.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "sessionlink/errors.h"
#include "stopwords_data.h"

namespace sessionlink {
namespace {

void RequireChannel(std::span<const PageVisit> visits, Channel channel) {
  for (const PageVisit& v : visits) {
    if (!v.channels().Has(channel)) {
      throw ChannelError("session lacks the " + std::string(ChannelName(channel)) +
                         " channel");
    }
  }
}

// Distinct features a single page contributes on a count channel.
std::vector<std::string_view> PageFeatures(const PageVisit& visit,
                                           Channel channel) {
  std::vector<std::string_view> out;
  if (channel == Channel::kDomain) {
    out.push_back(*visit.domain);
  } else if (channel == Channel::kTags) {
    for (const std::string& tag : *visit.tags) out.push_back(tag);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  } else {
    throw ChannelError("count vectors support the domain and tags channels");
  }
  return out;
}

std::vector<std::string> ParseStopwords(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(begin, end - begin + 1));
  }
  return words;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> features,
                       std::vector<std::uint32_t> document_frequency,
                       std::uint32_t n_documents)
    : features_(std::move(features)),
      document_frequency_(std::move(document_frequency)),
      n_documents_(n_documents) {
  if (features_.size() != document_frequency_.size()) {
    throw ShapeError("vocabulary needs one document frequency per feature");
  }
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (i > 0 && !(features_[i - 1] < features_[i])) {
      throw InvalidSpecError("vocabulary features must be sorted and unique");
    }
    index_.emplace(features_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::IndexOf(std::string_view feature) const {
  const auto it = index_.find(std::string(feature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void WriteVocabulary(const Vocabulary& vocabulary, std::ostream& out) {
  out << "sessionlink-vocabulary 1\n";
  out << "n_documents " << vocabulary.n_documents() << '\n';
  out << "size " << vocabulary.size() << '\n';
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    out << vocabulary.document_frequency(i) << ' '
        << nlohmann::json(vocabulary.feature(i)).dump() << '\n';
  }
}

Vocabulary ReadVocabulary(std::istream& in) {
  std::string word;
  long version = 0;
  std::uint32_t n_documents = 0;
  std::size_t size = 0;
  if (!(in >> word >> version) || word != "sessionlink-vocabulary" ||
      version != 1) {
    throw ParseError("not a version 1 vocabulary file", 1);
  }
  if (!(in >> word >> n_documents) || word != "n_documents") {
    throw ParseError("expected n_documents", 2);
  }
  if (!(in >> word >> size) || word != "size") {
    throw ParseError("expected size", 3);
  }
  std::string line;
  std::getline(in, line);
  std::vector<std::string> features;
  std::vector<std::uint32_t> df;
  for (std::size_t i = 0; i < size; ++i) {
    if (!std::getline(in, line)) throw ParseError("truncated vocabulary", 4 + i);
    const auto space = line.find(' ');
    try {
      df.push_back(static_cast<std::uint32_t>(std::stoul(line.substr(0, space))));
      features.push_back(
          nlohmann::json::parse(line.substr(space + 1)).get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad vocabulary entry: ") + e.what(), 4 + i);
    }
  }
  return Vocabulary(std::move(features), std::move(df), n_documents);
}

SparseVector CategoryProportion(std::span<const PageVisit> visits,
                                std::size_t category_count) {
  RequireChannel(visits, Channel::kCategory);
  if (visits.empty()) throw InvalidSpecError("empty session");
  std::map<std::uint32_t, std::size_t> counts;
  for (const PageVisit& v : visits) {
    if (*v.category < 1 || static_cast<std::size_t>(*v.category) > category_count) {
      throw ShapeError("category " + std::to_string(*v.category) +
                       " outside the table");
    }
    ++counts[static_cast<std::uint32_t>(*v.category - 1)];
  }
  std::vector<SparseVector::Entry> entries;
  const double n = static_cast<double>(visits.size());
  for (const auto& [index, count] : counts) {
    entries.push_back({index, static_cast<double>(count) / n});
  }
  return SparseVector(category_count, std::move(entries));
}

Vocabulary BuildVocabulary(std::span<const SessionView> sessions,
                           Channel channel) {
  std::map<std::string, std::uint32_t> df;
  for (const SessionView& s : sessions) {
    RequireChannel(s.visits, channel);
    std::set<std::string_view> seen;
    for (const PageVisit& v : s.visits) {
      for (std::string_view f : PageFeatures(v, channel)) seen.insert(f);
    }
    for (std::string_view f : seen) ++df[std::string(f)];
  }
  std::vector<std::string> features;
  std::vector<std::uint32_t> freq;
  for (auto& [feature, count] : df) {
    features.push_back(feature);
    freq.push_back(count);
  }
  return Vocabulary(std::move(features), std::move(freq),
                    static_cast<std::uint32_t>(sessions.size()));
}

SparseVector CountVector(std::span<const PageVisit> visits, Channel channel,
                         const Vocabulary& vocabulary) {
  RequireChannel(visits, channel);
  std::vector<SparseVector::Entry> entries;
  for (const PageVisit& v : visits) {
    for (std::string_view f : PageFeatures(v, channel)) {
      if (const auto index = vocabulary.IndexOf(f)) {
        entries.push_back({*index, 1.0});
      }
    }
  }
  SparseVector vector(vocabulary.size(), std::move(entries));
  if (vector.is_zero()) {
    spdlog::warn("session shares no {} with the vocabulary", ChannelName(channel));
  }
  return vector;
}

TfidfResult BuildTfidf(std::span<const SessionView> sessions,
                       const TfidfOptions& options) {
  if (sessions.size() < 2) {
    throw InsufficientSessionsError("TFIDF needs at least 2 sessions");
  }
  const std::unordered_set<std::string> stopwords(options.stopwords.begin(),
                                                  options.stopwords.end());
  std::vector<std::map<std::string, std::uint32_t>> term_counts(sessions.size());
  std::map<std::string, std::uint32_t> df;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    RequireChannel(sessions[i].visits, Channel::kTokens);
    for (const PageVisit& v : sessions[i].visits) {
      for (const std::string& token : *v.tokens) {
        if (!stopwords.contains(token)) ++term_counts[i][token];
      }
    }
    for (const auto& [term, count] : term_counts[i]) ++df[term];
  }
  const double n = static_cast<double>(sessions.size());
  std::vector<std::string> features;
  std::vector<std::uint32_t> freq;
  for (const auto& [term, count] : df) {
    if (static_cast<double>(count) / n > options.max_document_fraction) continue;
    features.push_back(term);
    freq.push_back(count);
  }
  if (features.empty()) {
    throw VocabularyError("no terms left after stopword and frequency filtering");
  }
  TfidfResult result{Vocabulary(std::move(features), std::move(freq),
                                static_cast<std::uint32_t>(sessions.size())),
                     {}};
  result.vectors.reserve(sessions.size());
  for (const auto& counts : term_counts) {
    std::vector<SparseVector::Entry> entries;
    for (const auto& [term, count] : counts) {
      const auto index = result.vocabulary.IndexOf(term);
      if (!index) continue;
      const double idf =
          std::log(n / result.vocabulary.document_frequency(*index));
      entries.push_back({*index, count * idf});
    }
    result.vectors.emplace_back(result.vocabulary.size(), std::move(entries));
  }
  return result;
}

const std::vector<std::string>& DefaultStopwords() {
  static const std::vector<std::string> words = [] {
    std::istringstream in{std::string(kStopwordsData)};
    return ParseStopwords(in);
  }();
  return words;
}

std::vector<std::string> LoadStopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return ParseStopwords(in);
}

std::string_view FingerprintKindName(FingerprintKind kind) {
  switch (kind) {
    case FingerprintKind::kCategoryProportion:
      return "category_proportion";
    case FingerprintKind::kDomainCount:
      return "domain_count";
    case FingerprintKind::kTagCount:
      return "tag_count";
    case FingerprintKind::kTfidf:
      return "tfidf";
  }
  return "unknown";
}

std::optional<FingerprintKind> ParseFingerprintKind(std::string_view name) {
  for (FingerprintKind k :
       {FingerprintKind::kCategoryProportion, FingerprintKind::kDomainCount,
        FingerprintKind::kTagCount, FingerprintKind::kTfidf}) {
    if (FingerprintKindName(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<SparseVector> ExtractFingerprints(
    std::span<const SessionView> sessions, const FingerprintSpec& spec,
    const std::optional<CategoryTable>& categories,
    std::uint64_t autoencoder_seed) {
  std::vector<SparseVector> out;
  out.reserve(sessions.size());
  switch (spec.kind) {
    case FingerprintKind::kCategoryProportion: {
      if (!categories) throw ChannelError("corpus has no category table");
      for (const SessionView& s : sessions) {
        out.push_back(CategoryProportion(s.visits, categories->size()));
      }
      break;
    }
    case FingerprintKind::kDomainCount:
    case FingerprintKind::kTagCount: {
      const Channel channel = spec.kind == FingerprintKind::kDomainCount
                                  ? Channel::kDomain
                                  : Channel::kTags;
      const Vocabulary vocabulary = BuildVocabulary(sessions, channel);
      for (const SessionView& s : sessions) {
        out.push_back(CountVector(s.visits, channel, vocabulary));
      }
      break;
    }
    case FingerprintKind::kTfidf: {
      TfidfResult tfidf = BuildTfidf(sessions, spec.tfidf);
      if (spec.autoencoder.hidden_dim <= 0) return std::move(tfidf.vectors);
      AutoencoderOptions options = spec.autoencoder;
      options.seed = autoencoder_seed;
      // A vocabulary narrower than the requested code keeps its raw form.
      if (static_cast<std::size_t>(options.hidden_dim) >= tfidf.vocabulary.size()) {
        spdlog::warn("vocabulary of {} terms too small for hidden_dim {}; "
                     "using raw TFIDF",
                     tfidf.vocabulary.size(), options.hidden_dim);
        return std::move(tfidf.vectors);
      }
      const AutoencoderModel model = TrainAutoencoder(tfidf.vectors, options);
      for (const SparseVector& v : tfidf.vectors) out.push_back(Encode(model, v));
      break;
    }
  }
  return out;
}

}  // namespace sessionlink
