#ifndef SESSIONLINK_SYNTHETIC_H_
#define SESSIONLINK_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sessionlink/corpus.h"

namespace sessionlink {

enum class SyntheticKind {
  // User i visits only category i + 1. Needs users <= categories.
  kDisjointCategories,
  // Every visit is uniform over all categories.
  kUniformCategories,
  // Each user draws a category profile from a Dirichlet, blended with a
  // shared popularity distribution.
  kCategoryMixture,
  // Same construction over tags and domains; visits carry the domain, tags
  // and tokens channels like a page-record corpus.
  kTagMixture,
};

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kUniformCategories;
  int users = 0;
  int visits_per_user = 0;
  int categories = static_cast<int>(kMsnbcCategoryCount);
  // Mixture kinds. Per-user profile = (1 - background) * Dirichlet(
  // concentration) + background * popularity, where popularity is
  // `popularity` when given and Zipf(1) otherwise.
  double concentration = 0.5;
  double background = 0.0;
  std::vector<double> popularity;
  // Tag mixture only.
  int vocabulary = 200;
  int tags_per_visit = 3;
  int domains = 50;
  std::uint64_t seed = 0;
};

// Pure function of (spec, seed). Throws InvalidSpecError for zero users or
// visits and for parameters the kind cannot satisfy.
Corpus GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed);

SyntheticSpec SyntheticSpecFromJson(const nlohmann::json& j);
nlohmann::json SyntheticSpecToJson(const SyntheticSpec& spec);
SyntheticSpec LoadSyntheticSpec(const std::filesystem::path& path);

}  // namespace sessionlink

#endif  // SESSIONLINK_SYNTHETIC_H_
