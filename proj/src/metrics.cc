#include "sessionlink/metrics.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "sessionlink/errors.h"

namespace sessionlink {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void Union(std::size_t a, std::size_t b) { parent_[Find(a)] = Find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

double F1Score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0 ? 2.0 * precision * recall / sum : 0.0;
}

MetricsResult ComputeMetrics(std::span<const SessionPair> predicted,
                             std::span<const SessionPair> truth,
                             std::size_t session_count) {
  if (truth.empty()) throw InvalidSpecError("truth pair set is empty");
  const std::set<SessionPair> truth_set(truth.begin(), truth.end());
  const std::set<SessionPair> predicted_set(predicted.begin(), predicted.end());

  DisjointSets users(session_count);
  for (const SessionPair& p : truth_set) {
    if (p.second >= session_count) {
      throw ShapeError("truth pair references session " +
                       std::to_string(p.second) + " of " +
                       std::to_string(session_count));
    }
    users.Union(p.first, p.second);
  }

  std::size_t hits = 0;
  std::set<std::size_t> reached;
  for (const SessionPair& p : predicted_set) {
    if (truth_set.contains(p)) {
      ++hits;
      reached.insert(users.Find(p.first));
    }
  }

  MetricsResult m;
  m.precision = predicted_set.empty()
                    ? 0.0
                    : static_cast<double>(hits) / predicted_set.size();
  m.recall = static_cast<double>(hits) / truth_set.size();
  m.f1 = F1Score(m.precision, m.recall);
  m.reach = static_cast<int>(reached.size());
  return m;
}

}  // namespace sessionlink
