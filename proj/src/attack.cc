#include "sessionlink/attack.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "sessionlink/autoencoder.h"
#include "sessionlink/errors.h"
#include "sessionlink/random.h"

namespace sessionlink {
namespace {

double CosineWithNorms(const SparseVector& u, double u_norm,
                       const SparseVector& v, double v_norm) {
  if (u_norm == 0.0 || v_norm == 0.0) return 0.0;
  return u.Dot(v) / (u_norm * v_norm);
}

}  // namespace

double Cosine(const SparseVector& u, const SparseVector& v) {
  if (u.dim() != v.dim()) {
    throw ShapeError("cosine of vectors with dimension " +
                     std::to_string(u.dim()) + " and " + std::to_string(v.dim()));
  }
  const double u_norm = u.Norm();
  const double v_norm = v.Norm();
  if (u_norm == 0.0 || v_norm == 0.0) {
    spdlog::warn("cosine of a zero-norm fingerprint, scoring 0");
  }
  return CosineWithNorms(u, u_norm, v, v_norm);
}

std::string_view DenominatorVariantName(DenominatorVariant variant) {
  return variant == DenominatorVariant::kReciprocal ? "reciprocal"
                                                   : "linear";
}

std::optional<DenominatorVariant> ParseDenominatorVariant(std::string_view name) {
  if (name == "reciprocal") return DenominatorVariant::kReciprocal;
  if (name == "linear") return DenominatorVariant::kLinear;
  return std::nullopt;
}

ScoreMatrix WeightedCloseness(std::span<const SparseVector> fingerprints,
                              const ClosenessOptions& options) {
  const std::size_t n = fingerprints.size();
  if (n < 3) {
    throw InsufficientSessionsError(
        "weighted closeness needs at least 3 sessions, got " + std::to_string(n));
  }
  if (!(options.epsilon > 0)) throw InvalidSpecError("epsilon must be > 0");

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (fingerprints[i].dim() != fingerprints[0].dim()) {
      throw ShapeError("fingerprints of differing dimension");
    }
    norms[i] = fingerprints[i].Norm();
    if (norms[i] == 0.0) {
      spdlog::warn("session {} has a zero fingerprint; its similarities are 0", i);
    }
  }

  // Clamped similarities; the diagonal is never read.
  std::vector<double> sim(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = std::max(
          CosineWithNorms(fingerprints[i], norms[i], fingerprints[j], norms[j]),
          options.epsilon);
      sim[i * n + j] = s;
      sim[j * n + i] = s;
    }
  }

  const bool reciprocal = options.variant == DenominatorVariant::kReciprocal;
  // Sum over k of the per-variant term for row `row`, skipping `row` itself
  // and, when excluding the pair, also `other`.
  const auto row_sum = [&](std::size_t row, std::size_t other) {
    double sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == row || (options.exclude_pair && k == other)) continue;
      const double s = sim[row * n + k];
      sum += reciprocal ? 1.0 / s : s;
    }
    return sum;
  };

  ScoreMatrix scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      scores.set(i, j, sim[i * n + j] / (row_sum(i, j) + row_sum(j, i)));
    }
  }
  return scores;
}

ScoreMatrix BaselineRandom(std::size_t session_count, std::uint64_t seed) {
  if (session_count < 2) {
    throw InsufficientSessionsError("baseline needs at least 2 sessions");
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  ScoreMatrix scores(session_count);
  for (std::size_t i = 0; i < session_count; ++i) {
    for (std::size_t j = i + 1; j < session_count; ++j) scores.set(i, j, uniform(rng));
  }
  return scores;
}

ScoreMatrix ScorePairsClassifier(const PairClassifier& model,
                                 std::span<const SparseVector> fingerprints) {
  const std::size_t n = fingerprints.size();
  if (n < 2) throw InsufficientSessionsError("scoring needs at least 2 sessions");
  for (const SparseVector& f : fingerprints) {
    if (static_cast<int>(f.dim()) != model.input_dim()) {
      throw ShapeError("fingerprint dimension " + std::to_string(f.dim()) +
                       " != classifier input " +
                       std::to_string(model.input_dim()));
    }
  }
  const Eigen::MatrixXd dense = StackDense(fingerprints);
  Eigen::MatrixXd features(static_cast<Eigen::Index>(n * (n - 1) / 2),
                           dense.cols());
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++row) {
      features.row(row) = (dense.row(static_cast<Eigen::Index>(i)) -
                           dense.row(static_cast<Eigen::Index>(j)))
                              .cwiseAbs();
    }
  }
  const Eigen::VectorXd p = model.Probabilities(features);
  ScoreMatrix scores(n);
  row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++row) scores.set(i, j, p(row));
  }
  return scores;
}

CutoffResult SweepCutoff(const ScoreMatrix& scores,
                         std::span<const SessionPair> truth) {
  if (truth.empty()) throw InvalidSpecError("truth pair set is empty");
  if (scores.pair_count() == 0) {
    throw InsufficientSessionsError("no pairs to score");
  }
  const std::set<SessionPair> truth_set(truth.begin(), truth.end());
  struct Scored {
    double score;
    bool is_true;
  };
  std::vector<Scored> ranked;
  ranked.reserve(scores.pair_count());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = i + 1; j < scores.size(); ++j) {
      ranked.push_back({scores.at(i, j), truth_set.contains(SessionPair(i, j))});
    }
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const Scored& a, const Scored& b) { return a.score > b.score; });

  // F1 at a cutoff is 2 tp / (predicted + |St|); compared exactly in
  // integers. Cutoffs are visited from high to low, so only a strict
  // improvement moves to a lower cutoff.
  const std::uint64_t truth_count = truth_set.size();
  std::uint64_t tp = 0;
  std::uint64_t best_tp = 0;
  std::uint64_t best_predicted = 1;
  double best_cutoff = ranked.front().score;
  bool have_best = false;
  for (std::size_t pos = 0; pos < ranked.size();) {
    const double cutoff = ranked[pos].score;
    while (pos < ranked.size() && ranked[pos].score == cutoff) {
      tp += ranked[pos].is_true;
      ++pos;
    }
    const std::uint64_t predicted = pos;
    if (!have_best || tp * (best_predicted + truth_count) >
                          best_tp * (predicted + truth_count)) {
      best_tp = tp;
      best_predicted = predicted;
      best_cutoff = cutoff;
      have_best = true;
    }
  }

  CutoffResult result;
  result.prediction.cutoff = best_cutoff;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = i + 1; j < scores.size(); ++j) {
      if (scores.at(i, j) >= best_cutoff) {
        result.prediction.predicted_pairs.emplace_back(i, j);
      }
    }
  }
  result.metrics =
      ComputeMetrics(result.prediction.predicted_pairs, truth, scores.size());
  result.metrics.cutoff = best_cutoff;
  return result;
}

std::string_view AttackMethodName(AttackMethod method) {
  switch (method) {
    case AttackMethod::kWeightedCloseness:
      return "weighted_closeness";
    case AttackMethod::kClassifier:
      return "classifier";
    case AttackMethod::kBaseline:
      return "baseline";
  }
  return "unknown";
}

std::optional<AttackMethod> ParseAttackMethod(std::string_view name) {
  for (AttackMethod m : {AttackMethod::kWeightedCloseness,
                         AttackMethod::kClassifier, AttackMethod::kBaseline}) {
    if (AttackMethodName(m) == name) return m;
  }
  return std::nullopt;
}

}  // namespace sessionlink
