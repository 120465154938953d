#ifndef SESSIONLINK_CORPUS_H_
#define SESSIONLINK_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sessionlink {

// Semantic channels a page visit can carry.
enum class Channel : std::uint8_t {
  kCategory = 1 << 0,
  kDomain = 1 << 1,
  kTags = 1 << 2,
  kTokens = 1 << 3,
};

std::string_view ChannelName(Channel channel);

class ChannelSet {
 public:
  constexpr ChannelSet() = default;

  void Add(Channel c) { bits_ |= static_cast<std::uint8_t>(c); }
  bool Has(Channel c) const { return bits_ & static_cast<std::uint8_t>(c); }
  bool empty() const { return bits_ == 0; }
  // Comma-separated channel names, e.g. "domain,tags,tokens".
  std::string ToString() const;

  friend bool operator==(ChannelSet, ChannelSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

// One page view. Only the channels the source corpus provides are set.
struct PageVisit {
  std::optional<int> category;  // 1-based index into the CategoryTable
  std::optional<std::string> domain;
  std::optional<std::vector<std::string>> tags;
  std::optional<std::vector<std::string>> tokens;

  ChannelSet channels() const;

  friend bool operator==(const PageVisit&, const PageVisit&) = default;
};

struct UserLog {
  std::string user_id;
  std::vector<PageVisit> visits;

  friend bool operator==(const UserLog&, const UserLog&) = default;
};

struct CategoryTable {
  std::vector<std::string> names;  // names[i] is category i + 1

  std::size_t size() const { return names.size(); }

  friend bool operator==(const CategoryTable&, const CategoryTable&) = default;
};

inline constexpr std::size_t kMsnbcCategoryCount = 17;

// An immutable collection of user logs. The constructor enforces that user
// ids are unique, every log is non-empty, every visit exposes the same
// channel set, and categories fall inside the table.
class Corpus {
 public:
  Corpus(std::vector<UserLog> users, std::optional<CategoryTable> categories);

  const std::vector<UserLog>& users() const { return users_; }
  const std::optional<CategoryTable>& category_table() const {
    return categories_;
  }
  ChannelSet channels() const { return channels_; }
  std::size_t size() const { return users_.size(); }
  std::size_t total_visits() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<UserLog> users_;
  std::optional<CategoryTable> categories_;
  ChannelSet channels_;
};

enum class CorpusFormat { kMsnbc, kPageRecords };

std::optional<CorpusFormat> ParseCorpusFormat(std::string_view name);

// MSNBC category-sequence layout: '%' comment lines, one line of category
// names, then one line of 1-based category integers per user. User ids are
// the 1-based data line ordinals.
Corpus ParseMsnbc(std::istream& in);
void WriteMsnbc(const Corpus& corpus, std::ostream& out);

// JSON Lines page records: {"user_id", "url", "tags", "tokens"}. Records with
// a url whose host cannot be extracted are dropped; a description of each is
// appended to `warnings` when non-null and logged.
Corpus ParsePageRecords(std::istream& in,
                        std::vector<std::string>* warnings = nullptr);
// Emits "http://<domain>/" as the url so that parsing recovers the corpus.
void WritePageRecords(const Corpus& corpus, std::ostream& out);

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format);

// Lowercased host of an absolute url with port and userinfo removed. "www."
// is kept. Returns nullopt for anything that is not scheme://host[...].
std::optional<std::string> ExtractHostname(std::string_view url);

struct RankedCount {
  std::string name;
  std::uint64_t count = 0;

  friend bool operator==(const RankedCount&, const RankedCount&) = default;
};

struct StatsReport {
  std::size_t users = 0;
  std::uint64_t total_visits = 0;
  // Populated only for corpora with the category channel.
  std::vector<std::string> category_names;
  std::vector<std::uint64_t> category_frequency;
  std::vector<double> category_proportion;
  // Ranked by count descending, ties lexicographic.
  std::vector<RankedCount> top_domains;
  std::vector<RankedCount> top_tags;
};

StatsReport CorpusStats(const Corpus& corpus, std::size_t top_n = 10);
void WriteStats(const StatsReport& report, std::ostream& out);

}  // namespace sessionlink

#endif  // SESSIONLINK_CORPUS_H_
