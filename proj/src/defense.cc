#include "sessionlink/defense.h"

#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "sessionlink/errors.h"
#include "sessionlink/random.h"

namespace sessionlink {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "sessionlink.obfuscated_trial";

// First `count` entries of `items` become a uniform sample without
// replacement.
template <typename T>
void PartialShuffle(std::vector<T>& items, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng)]);
  }
}

}  // namespace

ObfuscatedTrial ApplyChaff(const Trial& trial, const DefenseConfig& config) {
  if (config.session_sample_size < 1) {
    throw DefenseConfigError("session_sample_size must be at least 1");
  }
  if (config.page_sample_size < 1) {
    throw DefenseConfigError("page_sample_size must be at least 1");
  }
  const auto& originals = trial.sessions();
  const auto donors_needed = static_cast<std::size_t>(config.session_sample_size);
  std::vector<Session> augmented;
  std::vector<SessionProvenance> provenance;
  augmented.reserve(originals.size());
  provenance.reserve(originals.size());

  for (const Session& target : originals) {
    std::vector<std::size_t> donors;
    for (std::size_t k = 0; k < originals.size(); ++k) {
      if (originals[k].true_user != target.true_user) donors.push_back(k);
    }
    if (donors.size() < donors_needed) {
      throw DefenseConfigError("session '" + target.session_id + "' has " +
                               std::to_string(donors.size()) +
                               " eligible donors, need " +
                               std::to_string(donors_needed));
    }
    Rng rng(DeriveSeed(config.seed, "chaff:" + target.session_id));
    PartialShuffle(donors, donors_needed, rng);

    Session out = target;
    SessionProvenance record{target.visits.size(), {}};
    for (std::size_t d = 0; d < donors_needed; ++d) {
      const Session& donor = originals[donors[d]];
      std::vector<std::size_t> pages(donor.visits.size());
      std::iota(pages.begin(), pages.end(), std::size_t{0});
      const std::size_t take = std::min(
          pages.size(), static_cast<std::size_t>(config.page_sample_size));
      PartialShuffle(pages, take, rng);
      for (std::size_t p = 0; p < take; ++p) {
        out.visits.push_back(donor.visits[pages[p]]);
        record.injected.push_back({donor.session_id, pages[p]});
      }
    }
    augmented.push_back(std::move(out));
    provenance.push_back(std::move(record));
  }
  return {Trial(std::move(augmented), trial.config()), std::move(provenance)};
}

Session StripChaff(const Session& session, const SessionProvenance& provenance) {
  if (session.visits.size() !=
      provenance.original_length + provenance.injected.size()) {
    throw InvalidSpecError("provenance does not match session '" +
                           session.session_id + "'");
  }
  Session original = session;
  original.visits.resize(provenance.original_length);
  return original;
}

void WriteObfuscatedTrial(const ObfuscatedTrial& obfuscated, std::ostream& out) {
  out << json{{"format", kFormat},
              {"version", 1},
              {"sessions", obfuscated.trial.size()}}
             .dump()
      << '\n';
  WriteTrial(obfuscated.trial, out, /*include_owner=*/true);
  const auto& sessions = obfuscated.trial.sessions();
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    json injected = json::array();
    for (const InjectedVisit& v : obfuscated.provenance[i].injected) {
      injected.push_back({v.donor_session_id, v.donor_visit_index});
    }
    out << json{{"session_id", sessions[i].session_id},
                {"original_length", obfuscated.provenance[i].original_length},
                {"injected", injected}}
               .dump()
        << '\n';
  }
}

ObfuscatedTrial ReadObfuscatedTrial(std::istream& in) {
  std::string line;
  std::size_t count = 0;
  try {
    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    const json header = json::parse(line);
    if (header.value("format", "") != kFormat || header.value("version", 0) != 1) {
      throw ParseError("not a version 1 obfuscated trial file", 1);
    }
    count = header.at("sessions").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 1);
  }
  std::ostringstream trial_text;
  for (std::size_t i = 0; i < count + 1; ++i) {
    if (!std::getline(in, line)) throw ParseError("truncated trial section", 0);
    trial_text << line << '\n';
  }
  std::istringstream trial_in(trial_text.str());
  Trial trial = ReadTrial(trial_in);

  std::vector<SessionProvenance> provenance;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw ParseError("truncated provenance", 0);
    try {
      const json record = json::parse(line);
      if (record.at("session_id").get<std::string>() !=
          trial.sessions()[i].session_id) {
        throw ParseError("provenance out of order", count + 3 + i);
      }
      SessionProvenance p;
      p.original_length = record.at("original_length").get<std::size_t>();
      for (const json& v : record.at("injected")) {
        p.injected.push_back(
            {v.at(0).get<std::string>(), v.at(1).get<std::size_t>()});
      }
      provenance.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), count + 3 + i);
    }
  }
  return {std::move(trial), std::move(provenance)};
}

}  // namespace sessionlink
