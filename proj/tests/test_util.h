#ifndef SESSIONLINK_TESTS_TEST_UTIL_H_
#define SESSIONLINK_TESTS_TEST_UTIL_H_

#include <string>
#include <vector>

#include "sessionlink/corpus.h"
#include "sessionlink/sessionizer.h"

namespace sessionlink::testing {

inline const char* kMsnbcHeader =
    "% Different categories found in input file:\n\n"
    "frontpage news tech local opinion on-air misc weather msn-news health "
    "living business msn-sports sports summary bbs travel\n\n"
    "% Sequences:\n\n";

inline PageVisit CategoryVisit(int category) {
  PageVisit v;
  v.category = category;
  return v;
}

inline PageVisit TagVisit(std::string domain, std::vector<std::string> tags) {
  PageVisit v;
  v.domain = std::move(domain);
  v.tags = std::move(tags);
  v.tokens = std::vector<std::string>{};
  return v;
}

inline std::vector<PageVisit> CategoryVisits(const std::vector<int>& categories) {
  std::vector<PageVisit> visits;
  for (int c : categories) visits.push_back(CategoryVisit(c));
  return visits;
}

inline CategoryTable NumberedTable(std::size_t n) {
  CategoryTable table;
  for (std::size_t i = 1; i <= n; ++i) table.names.push_back("c" + std::to_string(i));
  return table;
}

// One user per entry, ids "u0", "u1", ...
inline Corpus CategoryCorpus(const std::vector<std::vector<int>>& logs,
                             std::size_t categories = kMsnbcCategoryCount) {
  std::vector<UserLog> users;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    users.push_back({"u" + std::to_string(i), CategoryVisits(logs[i])});
  }
  return Corpus(std::move(users), NumberedTable(categories));
}

}  // namespace sessionlink::testing

#endif  // SESSIONLINK_TESTS_TEST_UTIL_H_
