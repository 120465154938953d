#ifndef SESSIONLINK_FINGERPRINT_H_
#define SESSIONLINK_FINGERPRINT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sessionlink/autoencoder.h"
#include "sessionlink/corpus.h"
#include "sessionlink/sessionizer.h"
#include "sessionlink/sparse_vector.h"

namespace sessionlink {

// Feature name <-> dense index, with document frequencies over the sessions
// the vocabulary was built from. Indices follow lexicographic feature order.
class Vocabulary {
 public:
  Vocabulary() = default;
  // `features` must be sorted and unique; one frequency per feature.
  Vocabulary(std::vector<std::string> features,
             std::vector<std::uint32_t> document_frequency,
             std::uint32_t n_documents);

  std::size_t size() const { return features_.size(); }
  std::uint32_t n_documents() const { return n_documents_; }
  const std::string& feature(std::size_t index) const { return features_[index]; }
  std::uint32_t document_frequency(std::size_t index) const {
    return document_frequency_[index];
  }
  std::optional<std::uint32_t> IndexOf(std::string_view feature) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.features_ == b.features_ &&
           a.document_frequency_ == b.document_frequency_ &&
           a.n_documents_ == b.n_documents_;
  }

 private:
  std::vector<std::string> features_;
  std::vector<std::uint32_t> document_frequency_;
  std::uint32_t n_documents_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
};

void WriteVocabulary(const Vocabulary& vocabulary, std::ostream& out);
Vocabulary ReadVocabulary(std::istream& in);

// Entry c - 1 holds the share of visits with category c. Sums to 1.
SparseVector CategoryProportion(std::span<const PageVisit> visits,
                                std::size_t category_count);

// Vocabulary of the domain or tag channel across the given sessions. A
// session counts once towards a feature's document frequency.
Vocabulary BuildVocabulary(std::span<const SessionView> sessions,
                           Channel channel);

// Domain: pages per domain. Tags: pages carrying the tag (a page repeating a
// tag counts once). Features outside the vocabulary are ignored.
SparseVector CountVector(std::span<const PageVisit> visits, Channel channel,
                         const Vocabulary& vocabulary);

struct TfidfOptions {
  double max_document_fraction = 0.95;
  std::vector<std::string> stopwords;
};

struct TfidfResult {
  Vocabulary vocabulary;
  std::vector<SparseVector> vectors;
};

// Each session is one document of all its tokens. Weight = raw count *
// ln(N / df). Words in more than max_document_fraction of the documents and
// stopwords are dropped before indexing.
TfidfResult BuildTfidf(std::span<const SessionView> sessions,
                       const TfidfOptions& options);

// The bundled English list (data/stopwords_en.txt, compiled in).
const std::vector<std::string>& DefaultStopwords();
// One word per line; blank lines and lines starting with '#' are skipped.
std::vector<std::string> LoadStopwords(const std::filesystem::path& path);

enum class FingerprintKind {
  kCategoryProportion,
  kDomainCount,
  kTagCount,
  kTfidf,
};

std::string_view FingerprintKindName(FingerprintKind kind);
std::optional<FingerprintKind> ParseFingerprintKind(std::string_view name);

struct FingerprintSpec {
  FingerprintKind kind = FingerprintKind::kCategoryProportion;
  TfidfOptions tfidf;
  // Autoencoder reduction of TFIDF vectors; hidden_dim 0 keeps raw TFIDF.
  AutoencoderOptions autoencoder;
};

// Fingerprints for a set of sessions, fitting any vocabulary and the
// autoencoder on exactly these sessions. The category table is required for
// kCategoryProportion. `autoencoder_seed` overrides spec.autoencoder.seed.
std::vector<SparseVector> ExtractFingerprints(
    std::span<const SessionView> sessions, const FingerprintSpec& spec,
    const std::optional<CategoryTable>& categories,
    std::uint64_t autoencoder_seed);

}  // namespace sessionlink

#endif  // SESSIONLINK_FINGERPRINT_H_
