#ifndef SESSIONLINK_PAIR_CLASSIFIER_H_
#define SESSIONLINK_PAIR_CLASSIFIER_H_

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sessionlink/sessionizer.h"
#include "sessionlink/sparse_vector.h"

namespace sessionlink {

struct ClassifierOptions {
  int hidden_units = 100;
  int epochs = 300;
  double learning_rate = 0.01;
  // Weight positives by negatives / positives in the loss.
  bool balance_classes = true;
  std::uint64_t seed = 0;
};

// One ReLU hidden layer and a logistic output giving P(same user).
struct PairClassifier {
  Eigen::MatrixXd hidden_weights;  // input_dim x hidden_units
  Eigen::RowVectorXd hidden_bias;
  Eigen::VectorXd output_weights;  // hidden_units
  double output_bias = 0;
  std::vector<double> loss_history;

  int input_dim() const { return static_cast<int>(hidden_weights.rows()); }
  int hidden_units() const { return static_cast<int>(hidden_weights.cols()); }

  // Pre-sigmoid outputs for a batch (rows are examples).
  Eigen::VectorXd Logits(const Eigen::MatrixXd& features) const;
  Eigen::VectorXd Probabilities(const Eigen::MatrixXd& features) const;
};

// Labelled |c_i - c_j| rows for every unordered pair of fingerprints.
struct PairExamples {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;   // 1 = same user
  Eigen::VectorXd weights;  // per-example loss weight
};

PairExamples BuildPairExamples(std::span<const SparseVector> fingerprints,
                               std::span<const SessionPair> truth,
                               bool balance_classes);

struct ClassifierGradients {
  Eigen::MatrixXd hidden_weights;
  Eigen::RowVectorXd hidden_bias;
  Eigen::VectorXd output_weights;
  double output_bias = 0;
};

PairClassifier InitPairClassifier(int input_dim, int hidden_units,
                                  std::uint64_t seed);

// Weighted cross-entropy, normalised by the total weight.
double ClassifierLoss(const PairClassifier& model, const PairExamples& data);
ClassifierGradients ClassifierLossGradients(const PairClassifier& model,
                                            const PairExamples& data);

// Full-batch gradient descent. Throws DegenerateLabelsError when only one
// class is present and DivergenceError on a non-finite loss.
PairClassifier TrainPairClassifier(const PairExamples& data,
                                   const ClassifierOptions& options);
PairClassifier TrainPairClassifier(std::span<const SparseVector> fingerprints,
                                   std::span<const SessionPair> truth,
                                   const ClassifierOptions& options);

void WritePairClassifier(const PairClassifier& model, std::ostream& out);
PairClassifier ReadPairClassifier(std::istream& in);

}  // namespace sessionlink

#endif  // SESSIONLINK_PAIR_CLASSIFIER_H_
