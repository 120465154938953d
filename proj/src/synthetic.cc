#include "sessionlink/synthetic.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "sessionlink/errors.h"
#include "sessionlink/random.h"

namespace sessionlink {
namespace {

using nlohmann::json;

std::vector<double> Zipf(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 / (i + 1);
  return w;
}

std::vector<double> Normalized(std::vector<double> w) {
  double total = 0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

// (1 - background) * Dirichlet(concentration) + background * popularity.
std::vector<double> DrawProfile(int n, double concentration, double background,
                                const std::vector<double>& popularity,
                                Rng& rng) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> profile(n);
  double total = 0;
  for (double& x : profile) {
    x = gamma(rng);
    total += x;
  }
  if (total <= 0) {
    // Every draw underflowed; fall back to a single random component.
    std::uniform_int_distribution<int> pick(0, n - 1);
    profile.assign(n, 0.0);
    profile[pick(rng)] = 1.0;
    total = 1.0;
  }
  for (int i = 0; i < n; ++i) {
    profile[i] = (1.0 - background) * profile[i] / total +
                 background * popularity[i];
  }
  return profile;
}

std::string UserId(int index, int users) {
  const int width = static_cast<int>(std::to_string(users).size());
  char buf[32];
  std::snprintf(buf, sizeof(buf), "u%0*d", width, index + 1);
  return buf;
}

void Validate(const SyntheticSpec& spec) {
  if (spec.users <= 0) throw InvalidSpecError("synthetic spec: users must be > 0");
  if (spec.visits_per_user <= 0) {
    throw InvalidSpecError("synthetic spec: visits_per_user must be > 0");
  }
  if (spec.categories <= 0) {
    throw InvalidSpecError("synthetic spec: categories must be > 0");
  }
  if (spec.kind == SyntheticKind::kDisjointCategories &&
      spec.users > spec.categories) {
    throw InvalidSpecError(
        "synthetic spec: disjoint supports need users <= categories");
  }
  if (spec.concentration <= 0) {
    throw InvalidSpecError("synthetic spec: concentration must be > 0");
  }
  if (spec.background < 0 || spec.background > 1) {
    throw InvalidSpecError("synthetic spec: background must lie in [0, 1]");
  }
  if (spec.kind == SyntheticKind::kTagMixture) {
    if (spec.vocabulary <= 0 || spec.domains <= 0) {
      throw InvalidSpecError("synthetic spec: vocabulary and domains must be > 0");
    }
    if (spec.tags_per_visit <= 0 || spec.tags_per_visit > spec.vocabulary) {
      throw InvalidSpecError(
          "synthetic spec: tags_per_visit must lie in [1, vocabulary]");
    }
  }
  const int support = spec.kind == SyntheticKind::kTagMixture
                          ? spec.vocabulary
                          : spec.categories;
  if (!spec.popularity.empty() &&
      static_cast<int>(spec.popularity.size()) != support) {
    throw InvalidSpecError("synthetic spec: popularity has " +
                           std::to_string(spec.popularity.size()) +
                           " weights, expected " + std::to_string(support));
  }
}

CategoryTable MakeCategoryTable(int n) {
  CategoryTable table;
  for (int i = 1; i <= n; ++i) table.names.push_back("c" + std::to_string(i));
  return table;
}

Corpus GenerateCategories(const SyntheticSpec& spec, std::uint64_t seed) {
  const int n = spec.categories;
  const std::vector<double> popularity =
      Normalized(spec.popularity.empty() ? Zipf(n) : spec.popularity);
  std::vector<UserLog> users;
  users.reserve(spec.users);
  for (int u = 0; u < spec.users; ++u) {
    Rng rng(DeriveSeed(seed, "synthetic-user", u));
    std::vector<double> profile;
    switch (spec.kind) {
      case SyntheticKind::kDisjointCategories:
        profile.assign(n, 0.0);
        profile[u] = 1.0;
        break;
      case SyntheticKind::kUniformCategories:
        profile.assign(n, 1.0);
        break;
      default:
        profile = DrawProfile(n, spec.concentration, spec.background,
                              popularity, rng);
    }
    std::discrete_distribution<int> draw(profile.begin(), profile.end());
    UserLog log{UserId(u, spec.users), {}};
    log.visits.reserve(spec.visits_per_user);
    for (int v = 0; v < spec.visits_per_user; ++v) {
      PageVisit visit;
      visit.category = draw(rng) + 1;
      log.visits.push_back(std::move(visit));
    }
    users.push_back(std::move(log));
  }
  return Corpus(std::move(users), MakeCategoryTable(n));
}

Corpus GenerateTags(const SyntheticSpec& spec, std::uint64_t seed) {
  const std::vector<double> tag_popularity = Normalized(
      spec.popularity.empty() ? Zipf(spec.vocabulary) : spec.popularity);
  const std::vector<double> domain_popularity =
      Normalized(Zipf(spec.domains));
  std::vector<UserLog> users;
  users.reserve(spec.users);
  for (int u = 0; u < spec.users; ++u) {
    Rng rng(DeriveSeed(seed, "synthetic-user", u));
    const std::vector<double> tag_profile =
        DrawProfile(spec.vocabulary, spec.concentration, spec.background,
                    tag_popularity, rng);
    const std::vector<double> domain_profile =
        DrawProfile(spec.domains, spec.concentration, spec.background,
                    domain_popularity, rng);
    std::discrete_distribution<int> draw_tag(tag_profile.begin(),
                                             tag_profile.end());
    std::discrete_distribution<int> draw_domain(domain_profile.begin(),
                                                domain_profile.end());
    UserLog log{UserId(u, spec.users), {}};
    for (int v = 0; v < spec.visits_per_user; ++v) {
      std::vector<int> picked;
      for (int attempt = 0;
           static_cast<int>(picked.size()) < spec.tags_per_visit &&
           attempt < 64 * spec.tags_per_visit;
           ++attempt) {
        const int t = draw_tag(rng);
        if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
          picked.push_back(t);
        }
      }
      PageVisit visit;
      visit.domain = "site" + std::to_string(draw_domain(rng)) + ".example";
      visit.tags.emplace();
      // Filler words exercise the stopword list and the document-frequency
      // cap of the text fingerprint.
      visit.tokens = std::vector<std::string>{"the", "page"};
      for (int t : picked) {
        visit.tags->push_back("tag" + std::to_string(t));
        visit.tokens->push_back("word" + std::to_string(t));
      }
      log.visits.push_back(std::move(visit));
    }
    users.push_back(std::move(log));
  }
  return Corpus(std::move(users), std::nullopt);
}

const std::pair<const char*, SyntheticKind> kKindNames[] = {
    {"disjoint_categories", SyntheticKind::kDisjointCategories},
    {"uniform_categories", SyntheticKind::kUniformCategories},
    {"category_mixture", SyntheticKind::kCategoryMixture},
    {"tag_mixture", SyntheticKind::kTagMixture},
};

}  // namespace

Corpus GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  Validate(spec);
  return spec.kind == SyntheticKind::kTagMixture ? GenerateTags(spec, seed)
                                                 : GenerateCategories(spec, seed);
}

SyntheticSpec SyntheticSpecFromJson(const json& j) {
  SyntheticSpec spec;
  try {
    const std::string kind = j.at("distribution").get<std::string>();
    bool known = false;
    for (const auto& [name, value] : kKindNames) {
      if (kind == name) {
        spec.kind = value;
        known = true;
      }
    }
    if (!known) throw InvalidSpecError("unknown distribution '" + kind + "'");
    spec.users = j.at("users").get<int>();
    spec.visits_per_user = j.at("visits_per_user").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    const json params = j.value("parameters", json::object());
    spec.categories = params.value("categories", spec.categories);
    spec.concentration = params.value("concentration", spec.concentration);
    spec.background = params.value("background", spec.background);
    spec.popularity = params.value("popularity", spec.popularity);
    spec.vocabulary = params.value("vocabulary", spec.vocabulary);
    spec.tags_per_visit = params.value("tags_per_visit", spec.tags_per_visit);
    spec.domains = params.value("domains", spec.domains);
  } catch (const json::exception& e) {
    throw InvalidSpecError(std::string("synthetic spec: ") + e.what());
  }
  return spec;
}

json SyntheticSpecToJson(const SyntheticSpec& spec) {
  json j;
  for (const auto& [name, value] : kKindNames) {
    if (value == spec.kind) j["distribution"] = name;
  }
  j["users"] = spec.users;
  j["visits_per_user"] = spec.visits_per_user;
  j["seed"] = spec.seed;
  json params;
  params["categories"] = spec.categories;
  params["concentration"] = spec.concentration;
  params["background"] = spec.background;
  params["popularity"] = spec.popularity;
  params["vocabulary"] = spec.vocabulary;
  params["tags_per_visit"] = spec.tags_per_visit;
  params["domains"] = spec.domains;
  j["parameters"] = params;
  return j;
}

SyntheticSpec LoadSyntheticSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  return SyntheticSpecFromJson(j);
}

}  // namespace sessionlink
