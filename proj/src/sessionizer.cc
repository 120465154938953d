#include "sessionlink/sessionizer.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "sessionlink/errors.h"
#include "sessionlink/json_io.h"
#include "sessionlink/random.h"

namespace sessionlink {
namespace {

using nlohmann::json;

constexpr const char* kTrialFormat = "sessionlink.trial";
constexpr int kTrialVersion = 1;

std::string SessionId(std::size_t index, std::size_t count) {
  const int width = static_cast<int>(std::to_string(count).size());
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%0*zu", width, index + 1);
  return buf;
}

json ConfigToJson(const TrialConfig& config) {
  return {{"n_users", config.n_users},
          {"min_pages", config.min_pages},
          {"seed", config.seed},
          {"truncate_to_k", config.truncate_to_k}};
}

}  // namespace

Trial::Trial(std::vector<Session> sessions, TrialConfig config)
    : sessions_(std::move(sessions)), config_(config) {
  std::unordered_set<std::string> ids;
  std::map<std::string, std::vector<std::size_t>> by_owner;
  for (std::size_t i = 0; i < sessions_.size(); ++i) {
    const Session& s = sessions_[i];
    if (!ids.insert(s.session_id).second) {
      throw InvalidSpecError("duplicate session id '" + s.session_id + "'");
    }
    if (s.visits.empty()) {
      throw InvalidSpecError("session '" + s.session_id + "' is empty");
    }
    by_owner[s.true_user].push_back(i);
  }
  for (const auto& [owner, members] : by_owner) {
    if (members.size() != 2) {
      throw InvalidSpecError("user '" + owner + "' owns " +
                             std::to_string(members.size()) +
                             " sessions, expected 2");
    }
    truth_pairs_.emplace_back(members[0], members[1]);
  }
  std::sort(truth_pairs_.begin(), truth_pairs_.end());
}

std::vector<SessionView> Trial::AttackView() const {
  std::vector<SessionView> view;
  view.reserve(sessions_.size());
  for (const Session& s : sessions_) view.push_back({s.session_id, s.visits});
  return view;
}

std::vector<std::string> Trial::SessionIds() const {
  std::vector<std::string> ids;
  ids.reserve(sessions_.size());
  for (const Session& s : sessions_) ids.push_back(s.session_id);
  return ids;
}

std::vector<UserLog> SampleUsers(const Corpus& corpus, int n, int k,
                                 std::uint64_t seed) {
  if (n <= 0) throw InvalidSpecError("n_users must be positive");
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < corpus.users().size(); ++i) {
    if (static_cast<int>(corpus.users()[i].visits.size()) >= k) {
      eligible.push_back(i);
    }
  }
  if (static_cast<int>(eligible.size()) < n) {
    throw InsufficientDataError(
        "need " + std::to_string(n) + " users with at least " +
        std::to_string(k) + " visits, corpus has " +
        std::to_string(eligible.size()));
  }
  Rng rng(seed);
  // Partial Fisher-Yates: the first n positions end up a uniform sample.
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, eligible.size() - 1);
    std::swap(eligible[i], eligible[pick(rng)]);
  }
  std::vector<UserLog> sample;
  sample.reserve(n);
  for (int i = 0; i < n; ++i) sample.push_back(corpus.users()[eligible[i]]);
  return sample;
}

std::pair<Session, Session> SplitUser(const UserLog& user, std::uint64_t seed,
                                      std::optional<int> limit) {
  if (user.visits.size() < 2) {
    throw SplitError("user '" + user.user_id + "' has fewer than 2 visits");
  }
  std::vector<PageVisit> visits = user.visits;
  Rng rng(seed);
  std::shuffle(visits.begin(), visits.end(), rng);
  if (limit) {
    if (*limit < 2) throw SplitError("split limit must be at least 2");
    if (static_cast<std::size_t>(*limit) < visits.size()) visits.resize(*limit);
  }
  const std::size_t half = (visits.size() + 1) / 2;
  Session a{user.user_id + "#0",
            {visits.begin(), visits.begin() + static_cast<std::ptrdiff_t>(half)},
            user.user_id};
  Session b{user.user_id + "#1",
            {visits.begin() + static_cast<std::ptrdiff_t>(half), visits.end()},
            user.user_id};
  return {std::move(a), std::move(b)};
}

Trial MakeTrialFromUsers(std::span<const UserLog> users,
                         const TrialConfig& config) {
  std::vector<Session> sessions;
  sessions.reserve(2 * users.size());
  const std::optional<int> limit =
      config.truncate_to_k ? std::optional<int>(config.min_pages)
                           : std::nullopt;
  for (const UserLog& user : users) {
    auto [a, b] =
        SplitUser(user, DeriveSeed(config.seed, "split:" + user.user_id), limit);
    sessions.push_back(std::move(a));
    sessions.push_back(std::move(b));
  }
  Rng rng(DeriveSeed(config.seed, "order"));
  std::shuffle(sessions.begin(), sessions.end(), rng);
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    sessions[i].session_id = SessionId(i, sessions.size());
  }
  return Trial(std::move(sessions), config);
}

Trial MakeTrial(const Corpus& corpus, const TrialConfig& config) {
  if (config.min_pages < 2) {
    throw InvalidSpecError("min_pages must be at least 2");
  }
  const std::vector<UserLog> users =
      SampleUsers(corpus, config.n_users, config.min_pages,
                  DeriveSeed(config.seed, "sample"));
  return MakeTrialFromUsers(users, config);
}

void WriteTrial(const Trial& trial, std::ostream& out, bool include_owner) {
  json header = {{"format", kTrialFormat},
                 {"version", kTrialVersion},
                 {"config", ConfigToJson(trial.config())}};
  out << header.dump() << '\n';
  for (const Session& s : trial.sessions()) {
    json record;
    record["session_id"] = s.session_id;
    if (include_owner) record["user_id"] = s.true_user;
    json visits = json::array();
    for (const PageVisit& v : s.visits) visits.push_back(VisitToJson(v));
    record["visits"] = std::move(visits);
    out << record.dump() << '\n';
  }
}

Trial ReadTrial(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<TrialConfig> config;
  std::vector<Session> sessions;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json record = json::parse(line);
      if (!config) {
        if (record.value("format", "") != kTrialFormat ||
            record.value("version", 0) != kTrialVersion) {
          throw ParseError("not a version 1 trial file", line_no);
        }
        const json& c = record.at("config");
        config = TrialConfig{c.at("n_users").get<int>(),
                             c.at("min_pages").get<int>(),
                             c.at("seed").get<std::uint64_t>(),
                             c.at("truncate_to_k").get<bool>()};
        continue;
      }
      if (!record.contains("user_id")) {
        throw ParseError("session without user_id (attack view?)", line_no);
      }
      Session s;
      s.session_id = record.at("session_id").get<std::string>();
      s.true_user = record.at("user_id").get<std::string>();
      for (const json& v : record.at("visits")) {
        s.visits.push_back(VisitFromJson(v));
      }
      sessions.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!config) throw ParseError("empty trial file", 0);
  return Trial(std::move(sessions), *config);
}

}  // namespace sessionlink
