#include "sessionlink/corpus.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sessionlink/errors.h"
#include "sessionlink/json_io.h"

namespace sessionlink {
namespace {

using nlohmann::json;

std::string_view Trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<RankedCount> Rank(const std::unordered_map<std::string, std::uint64_t>& counts,
                              std::size_t top_n) {
  std::vector<RankedCount> ranked;
  ranked.reserve(counts.size());
  for (const auto& [name, count] : counts) ranked.push_back({name, count});
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedCount& a, const RankedCount& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.name < b.name;
            });
  if (ranked.size() > top_n) ranked.resize(top_n);
  return ranked;
}

std::vector<std::string> StringList(const json& record, const char* key,
                                    std::size_t line) {
  if (!record.contains(key) || record[key].is_null()) return {};
  const json& value = record[key];
  if (!value.is_array()) {
    throw ParseError(std::string("field '") + key + "' must be an array", line);
  }
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_string()) {
      throw ParseError(std::string("field '") + key + "' must hold strings",
                       line);
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view ChannelName(Channel channel) {
  switch (channel) {
    case Channel::kCategory:
      return "category";
    case Channel::kDomain:
      return "domain";
    case Channel::kTags:
      return "tags";
    case Channel::kTokens:
      return "tokens";
  }
  return "unknown";
}

std::string ChannelSet::ToString() const {
  std::string out;
  for (Channel c : {Channel::kCategory, Channel::kDomain, Channel::kTags,
                    Channel::kTokens}) {
    if (!Has(c)) continue;
    if (!out.empty()) out += ',';
    out += ChannelName(c);
  }
  return out;
}

ChannelSet PageVisit::channels() const {
  ChannelSet set;
  if (category) set.Add(Channel::kCategory);
  if (domain) set.Add(Channel::kDomain);
  if (tags) set.Add(Channel::kTags);
  if (tokens) set.Add(Channel::kTokens);
  return set;
}

Corpus::Corpus(std::vector<UserLog> users,
               std::optional<CategoryTable> categories)
    : users_(std::move(users)), categories_(std::move(categories)) {
  if (users_.empty()) throw EmptyCorpusError("corpus has no users");
  std::unordered_set<std::string> seen;
  bool first = true;
  for (const UserLog& user : users_) {
    if (!seen.insert(user.user_id).second) {
      throw InvalidSpecError("duplicate user id '" + user.user_id + "'");
    }
    if (user.visits.empty()) {
      throw InvalidSpecError("user '" + user.user_id + "' has no visits");
    }
    for (const PageVisit& visit : user.visits) {
      const ChannelSet set = visit.channels();
      if (set.empty()) {
        throw InvalidSpecError("user '" + user.user_id +
                               "' has a visit with no channels");
      }
      if (first) {
        channels_ = set;
        first = false;
      } else if (set != channels_) {
        throw InvalidSpecError("user '" + user.user_id + "' exposes channels {" +
                               set.ToString() + "}, corpus has {" +
                               channels_.ToString() + "}");
      }
      if (visit.category) {
        const int c = *visit.category;
        if (!categories_ || c < 1 ||
            static_cast<std::size_t>(c) > categories_->size()) {
          throw InvalidSpecError("category " + std::to_string(c) +
                                 " outside the category table");
        }
      }
    }
  }
}

std::size_t Corpus::total_visits() const {
  std::size_t total = 0;
  for (const UserLog& user : users_) total += user.visits.size();
  return total;
}

std::optional<CorpusFormat> ParseCorpusFormat(std::string_view name) {
  if (name == "msnbc") return CorpusFormat::kMsnbc;
  if (name == "records" || name == "page_records") {
    return CorpusFormat::kPageRecords;
  }
  return std::nullopt;
}

Corpus ParseMsnbc(std::istream& in) {
  std::optional<CategoryTable> table;
  std::vector<UserLog> users;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = Trim(line);
    if (text.empty() || text.front() == '%') continue;
    const auto fields = SplitWhitespace(text);
    if (!table) {
      CategoryTable header;
      for (std::string_view name : fields) header.names.emplace_back(name);
      if (header.size() != kMsnbcCategoryCount) {
        throw ParseError("expected " + std::to_string(kMsnbcCategoryCount) +
                             " category names, found " +
                             std::to_string(header.size()),
                         line_no);
      }
      table = std::move(header);
      continue;
    }
    UserLog user;
    user.user_id = std::to_string(users.size() + 1);
    user.visits.reserve(fields.size());
    for (std::string_view field : fields) {
      int value = 0;
      const auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("malformed category '" + std::string(field) + "'",
                         line_no);
      }
      if (value < 1 || static_cast<std::size_t>(value) > table->size()) {
        throw ParseError("category " + std::to_string(value) +
                             " outside [1, " + std::to_string(table->size()) +
                             "]",
                         line_no);
      }
      PageVisit visit;
      visit.category = value;
      user.visits.push_back(std::move(visit));
    }
    users.push_back(std::move(user));
  }
  if (!table) throw EmptyCorpusError("no category header line");
  if (users.empty()) throw EmptyCorpusError("no sequence lines");
  return Corpus(std::move(users), std::move(table));
}

void WriteMsnbc(const Corpus& corpus, std::ostream& out) {
  if (!corpus.channels().Has(Channel::kCategory) || !corpus.category_table()) {
    throw ChannelError("MSNBC output needs the category channel");
  }
  out << "% Different categories found in input file:\n\n";
  const auto& names = corpus.category_table()->names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (i ? " " : "") << names[i];
  }
  out << "\n\n% Sequences:\n\n";
  for (const UserLog& user : corpus.users()) {
    for (std::size_t i = 0; i < user.visits.size(); ++i) {
      out << (i ? " " : "") << *user.visits[i].category;
    }
    out << '\n';
  }
}

std::optional<std::string> ExtractHostname(std::string_view url) {
  url = Trim(url);
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) {
    return std::nullopt;
  }
  for (char c : url.substr(0, scheme_end)) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.') {
      return std::nullopt;
    }
  }
  std::string_view authority = url.substr(scheme_end + 3);
  authority = authority.substr(0, authority.find_first_of("/?#"));
  if (const std::size_t at = authority.rfind('@');
      at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  std::string_view host;
  std::string_view rest;
  if (!authority.empty() && authority.front() == '[') {
    const std::size_t close = authority.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    host = authority.substr(0, close + 1);
    rest = authority.substr(close + 1);
  } else {
    const std::size_t colon = authority.find(':');
    host = authority.substr(0, colon);
    rest = colon == std::string_view::npos ? std::string_view()
                                           : authority.substr(colon);
  }
  if (!rest.empty()) {
    if (rest.front() != ':') return std::nullopt;
    for (char c : rest.substr(1)) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
  }
  if (host.empty()) return std::nullopt;
  std::string lowered;
  lowered.reserve(host.size());
  for (char c : host) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '.' && c != '-' && c != '_' && c != '[' &&
        c != ']' && c != ':' && u < 0x80) {
      return std::nullopt;
    }
    lowered.push_back(static_cast<char>(std::tolower(u)));
  }
  return lowered;
}

Corpus ParsePageRecords(std::istream& in, std::vector<std::string>* warnings) {
  std::vector<UserLog> users;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!record.is_object()) throw ParseError("record is not an object", line_no);
    if (!record.contains("user_id") || !record["user_id"].is_string() ||
        record["user_id"].get<std::string>().empty()) {
      throw ParseError("missing user_id", line_no);
    }
    if (!record.contains("url") || !record["url"].is_string() ||
        record["url"].get<std::string>().empty()) {
      throw ParseError("missing url", line_no);
    }
    const std::string url = record["url"].get<std::string>();
    std::optional<std::string> host = ExtractHostname(url);
    if (!host) {
      const std::string message = "line " + std::to_string(line_no) +
                                  ": dropping record with unparsable url '" +
                                  url + "'";
      spdlog::warn("{}", message);
      if (warnings) warnings->push_back(message);
      continue;
    }
    PageVisit visit;
    visit.domain = std::move(host);
    visit.tags = StringList(record, "tags", line_no);
    visit.tokens = StringList(record, "tokens", line_no);

    const std::string user_id = record["user_id"].get<std::string>();
    auto [it, inserted] = index.try_emplace(user_id, users.size());
    if (inserted) users.push_back(UserLog{user_id, {}});
    users[it->second].visits.push_back(std::move(visit));
  }
  if (users.empty()) throw EmptyCorpusError("no page records");
  return Corpus(std::move(users), std::nullopt);
}

void WritePageRecords(const Corpus& corpus, std::ostream& out) {
  if (!corpus.channels().Has(Channel::kDomain)) {
    throw ChannelError("page-record output needs the domain channel");
  }
  for (const UserLog& user : corpus.users()) {
    for (const PageVisit& visit : user.visits) {
      json record;
      record["user_id"] = user.user_id;
      record["url"] = "http://" + *visit.domain + "/";
      record["tags"] = visit.tags.value_or(std::vector<std::string>{});
      record["tokens"] = visit.tokens.value_or(std::vector<std::string>{});
      out << record.dump() << '\n';
    }
  }
}

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  try {
    return format == CorpusFormat::kMsnbc ? ParseMsnbc(in)
                                          : ParsePageRecords(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

StatsReport CorpusStats(const Corpus& corpus, std::size_t top_n) {
  StatsReport report;
  report.users = corpus.size();
  report.total_visits = corpus.total_visits();
  std::unordered_map<std::string, std::uint64_t> domains;
  std::unordered_map<std::string, std::uint64_t> tags;
  if (corpus.category_table()) {
    report.category_names = corpus.category_table()->names;
    report.category_frequency.assign(report.category_names.size(), 0);
  }
  for (const UserLog& user : corpus.users()) {
    for (const PageVisit& visit : user.visits) {
      if (visit.category) ++report.category_frequency[*visit.category - 1];
      if (visit.domain) ++domains[*visit.domain];
      if (visit.tags) {
        for (const std::string& tag : *visit.tags) ++tags[tag];
      }
    }
  }
  if (corpus.channels().Has(Channel::kCategory)) {
    for (std::uint64_t f : report.category_frequency) {
      report.category_proportion.push_back(
          static_cast<double>(f) / static_cast<double>(report.total_visits));
    }
  }
  report.top_domains = Rank(domains, top_n);
  report.top_tags = Rank(tags, top_n);
  return report;
}

void WriteStats(const StatsReport& report, std::ostream& out) {
  out << "users " << report.users << "\nvisits " << report.total_visits
      << "\n";
  if (!report.category_proportion.empty()) {
    out << "\nPage Category\tFrequency\tProportion\n";
    for (std::size_t i = 0; i < report.category_names.size(); ++i) {
      char proportion[32];
      std::snprintf(proportion, sizeof(proportion), "%.3f",
                    report.category_proportion[i]);
      out << report.category_names[i] << '\t' << report.category_frequency[i]
          << '\t' << proportion << '\n';
    }
  }
  const auto write_ranked = [&out](const char* title,
                                   const std::vector<RankedCount>& list) {
    if (list.empty()) return;
    out << '\n' << title << "\tCount\n";
    for (const RankedCount& item : list) {
      out << item.name << '\t' << item.count << '\n';
    }
  };
  write_ranked("Top Domains", report.top_domains);
  write_ranked("Top Tags", report.top_tags);
}

nlohmann::json VisitToJson(const PageVisit& visit) {
  json j = json::object();
  if (visit.category) j["category"] = *visit.category;
  if (visit.domain) j["domain"] = *visit.domain;
  if (visit.tags) j["tags"] = *visit.tags;
  if (visit.tokens) j["tokens"] = *visit.tokens;
  return j;
}

PageVisit VisitFromJson(const nlohmann::json& j) {
  PageVisit visit;
  if (j.contains("category")) visit.category = j.at("category").get<int>();
  if (j.contains("domain")) visit.domain = j.at("domain").get<std::string>();
  if (j.contains("tags")) {
    visit.tags = j.at("tags").get<std::vector<std::string>>();
  }
  if (j.contains("tokens")) {
    visit.tokens = j.at("tokens").get<std::vector<std::string>>();
  }
  return visit;
}

std::string FormatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace sessionlink
