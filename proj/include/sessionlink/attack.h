#ifndef SESSIONLINK_ATTACK_H_
#define SESSIONLINK_ATTACK_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sessionlink/metrics.h"
#include "sessionlink/pair_classifier.h"
#include "sessionlink/score_matrix.h"
#include "sessionlink/sessionizer.h"
#include "sessionlink/sparse_vector.h"

namespace sessionlink {

// Cosine similarity. A zero-norm operand yields 0 and a warning.
double Cosine(const SparseVector& u, const SparseVector& v);

enum class DenominatorVariant {
  // Sum over k of 1 / Sim(s_i, s_k) plus the same for s_j.
  kReciprocal,
  // Sum over k of Sim(s_i, s_k) plus the same for s_j: generic sessions
  // are penalised.
  kLinear,
};

std::string_view DenominatorVariantName(DenominatorVariant variant);
std::optional<DenominatorVariant> ParseDenominatorVariant(std::string_view name);

struct ClosenessOptions {
  // Lower clamp on Sim inside the denominator.
  double epsilon = 1e-6;
  DenominatorVariant variant = DenominatorVariant::kReciprocal;
  // Whether k skips the pair members i and j.
  bool exclude_pair = true;
};

// Score(i, j) = Cosine(i, j) / (D(i) + D(j)) with D as selected by the
// variant, Sim = max(Cosine, epsilon). Throws InsufficientSessionsError for
// fewer than 3 fingerprints and InvalidSpecError for epsilon <= 0.
ScoreMatrix WeightedCloseness(std::span<const SparseVector> fingerprints,
                              const ClosenessOptions& options);

// i.i.d. uniform [0, 1) scores.
ScoreMatrix BaselineRandom(std::size_t session_count, std::uint64_t seed);

// score(i, j) = classifier probability on |c_i - c_j|.
ScoreMatrix ScorePairsClassifier(const PairClassifier& model,
                                 std::span<const SparseVector> fingerprints);

struct AttackPrediction {
  std::vector<SessionPair> predicted_pairs;  // every pair scoring >= cutoff
  double cutoff = 0;
};

struct CutoffResult {
  AttackPrediction prediction;
  MetricsResult metrics;
};

// Tries every distinct score as a cutoff (predict score >= cutoff) and keeps
// the one with the highest F1, preferring the larger cutoff on ties.
CutoffResult SweepCutoff(const ScoreMatrix& scores,
                         std::span<const SessionPair> truth);

enum class AttackMethod { kWeightedCloseness, kClassifier, kBaseline };

std::string_view AttackMethodName(AttackMethod method);
std::optional<AttackMethod> ParseAttackMethod(std::string_view name);

struct AttackConfig {
  AttackMethod method = AttackMethod::kWeightedCloseness;
  ClosenessOptions closeness;
  ClassifierOptions classifier;
};

}  // namespace sessionlink

#endif  // SESSIONLINK_ATTACK_H_
