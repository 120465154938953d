#ifndef SESSIONLINK_SESSIONIZER_H_
#define SESSIONLINK_SESSIONIZER_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sessionlink/corpus.h"

namespace sessionlink {

struct Session {
  std::string session_id;
  std::vector<PageVisit> visits;
  // Ground truth. Only evaluation and defense code may read this; attacks
  // receive SessionView.
  std::string true_user;

  friend bool operator==(const Session&, const Session&) = default;
};

// What an attacker sees of a session.
struct SessionView {
  std::string_view session_id;
  std::span<const PageVisit> visits;
};

// Unordered pair of session positions, stored with first < second.
struct SessionPair {
  std::uint32_t first = 0;
  std::uint32_t second = 0;

  SessionPair() = default;
  SessionPair(std::size_t a, std::size_t b)
      : first(static_cast<std::uint32_t>(a < b ? a : b)),
        second(static_cast<std::uint32_t>(a < b ? b : a)) {}

  friend auto operator<=>(const SessionPair&, const SessionPair&) = default;
};

struct TrialConfig {
  int n_users = 20;
  int min_pages = 40;  // k
  std::uint64_t seed = 0;
  // Use a random k-subset of each sampled user's visits instead of all.
  bool truncate_to_k = false;

  friend bool operator==(const TrialConfig&, const TrialConfig&) = default;
};

// 2n sessions, two per user, in an order that carries no pairing
// information. Truth pairs index into sessions() and are sorted.
class Trial {
 public:
  // Throws InvalidSpecError unless ids are unique, sessions are non-empty
  // and every owner has exactly two sessions.
  Trial(std::vector<Session> sessions, TrialConfig config);

  const std::vector<Session>& sessions() const { return sessions_; }
  const std::vector<SessionPair>& truth_pairs() const { return truth_pairs_; }
  const TrialConfig& config() const { return config_; }
  std::size_t size() const { return sessions_.size(); }

  std::vector<SessionView> AttackView() const;
  std::vector<std::string> SessionIds() const;

  friend bool operator==(const Trial&, const Trial&) = default;

 private:
  std::vector<Session> sessions_;
  std::vector<SessionPair> truth_pairs_;
  TrialConfig config_;
};

// Uniform sample without replacement of n users having at least k visits.
std::vector<UserLog> SampleUsers(const Corpus& corpus, int n, int k,
                                 std::uint64_t seed);

// Random permutation of the visits split at the midpoint: the first
// ceil(m/2) go to the first session. With `limit`, only the first `limit`
// permuted visits are used. Session ids are "<user>#0" and "<user>#1".
std::pair<Session, Session> SplitUser(const UserLog& user, std::uint64_t seed,
                                      std::optional<int> limit = std::nullopt);

Trial MakeTrial(const Corpus& corpus, const TrialConfig& config);
// Splits the given users and shuffles the sessions; no sampling.
Trial MakeTrialFromUsers(std::span<const UserLog> users,
                         const TrialConfig& config);

// JSON Lines: a header record, then one record per session. With
// include_owner false the output is the attack-facing view.
void WriteTrial(const Trial& trial, std::ostream& out, bool include_owner);
Trial ReadTrial(std::istream& in);

}  // namespace sessionlink

#endif  // SESSIONLINK_SESSIONIZER_H_
