#ifndef SESSIONLINK_DEFENSE_H_
#define SESSIONLINK_DEFENSE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sessionlink/sessionizer.h"

namespace sessionlink {

struct DefenseConfig {
  int session_sample_size = 1;  // donors per session (S)
  int page_sample_size = 10;    // visits taken from each donor (P)
  std::uint64_t seed = 0;

  friend bool operator==(const DefenseConfig&, const DefenseConfig&) = default;
};

struct InjectedVisit {
  std::string donor_session_id;
  std::size_t donor_visit_index = 0;

  friend bool operator==(const InjectedVisit&, const InjectedVisit&) = default;
};

// Evaluator-only record of what was appended to one session.
struct SessionProvenance {
  std::size_t original_length = 0;
  std::vector<InjectedVisit> injected;

  friend bool operator==(const SessionProvenance&,
                         const SessionProvenance&) = default;
};

struct ObfuscatedTrial {
  Trial trial;  // same ids, owners and truth pairs; augmented visits
  std::vector<SessionProvenance> provenance;  // parallel to trial.sessions()

  friend bool operator==(const ObfuscatedTrial&, const ObfuscatedTrial&) = default;
};

// Chaff injection. For every session, S donor sessions owned by other users
// are drawn without replacement from the original trial, and min(P, donor
// length) visits drawn without replacement from each are appended. Throws
// DefenseConfigError for S < 1, P < 1 or too few donors.
ObfuscatedTrial ApplyChaff(const Trial& trial, const DefenseConfig& config);

// Drops the injected visits recorded in `provenance`.
Session StripChaff(const Session& session, const SessionProvenance& provenance);

void WriteObfuscatedTrial(const ObfuscatedTrial& obfuscated, std::ostream& out);
ObfuscatedTrial ReadObfuscatedTrial(std::istream& in);

}  // namespace sessionlink

#endif  // SESSIONLINK_DEFENSE_H_
