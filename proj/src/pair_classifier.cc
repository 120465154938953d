#include "sessionlink/pair_classifier.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <string>

#include "model_io.h"
#include "sessionlink/autoencoder.h"
#include "sessionlink/errors.h"
#include "sessionlink/random.h"

namespace sessionlink {
namespace {

constexpr int kFormatVersion = 1;

double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Eigen::MatrixXd HiddenPre(const PairClassifier& model,
                          const Eigen::MatrixXd& features) {
  Eigen::MatrixXd z = features * model.hidden_weights;
  z.rowwise() += model.hidden_bias;
  return z;
}

}  // namespace

Eigen::VectorXd PairClassifier::Logits(const Eigen::MatrixXd& features) const {
  const Eigen::MatrixXd active = HiddenPre(*this, features).cwiseMax(0.0);
  return (active * output_weights).array() + output_bias;
}

Eigen::VectorXd PairClassifier::Probabilities(
    const Eigen::MatrixXd& features) const {
  return Logits(features).unaryExpr(&Logistic);
}

PairExamples BuildPairExamples(std::span<const SparseVector> fingerprints,
                               std::span<const SessionPair> truth,
                               bool balance_classes) {
  const std::size_t n = fingerprints.size();
  if (n < 2) throw InsufficientSessionsError("pair examples need 2 sessions");
  const Eigen::MatrixXd dense = StackDense(fingerprints);
  const std::set<SessionPair> same(truth.begin(), truth.end());
  const Eigen::Index rows = static_cast<Eigen::Index>(n * (n - 1) / 2);
  PairExamples data;
  data.features.resize(rows, dense.cols());
  data.labels = Eigen::VectorXd::Zero(rows);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++row) {
      data.features.row(row) =
          (dense.row(static_cast<Eigen::Index>(i)) -
           dense.row(static_cast<Eigen::Index>(j))).cwiseAbs();
      if (same.contains(SessionPair(i, j))) data.labels(row) = 1.0;
    }
  }
  const double positives = data.labels.sum();
  const double negatives = static_cast<double>(rows) - positives;
  data.weights = Eigen::VectorXd::Ones(rows);
  if (balance_classes && positives > 0 && negatives > 0) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (data.labels(r) == 1.0) data.weights(r) = negatives / positives;
    }
  }
  return data;
}

PairClassifier InitPairClassifier(int input_dim, int hidden_units,
                                  std::uint64_t seed) {
  Rng rng(seed);
  PairClassifier model;
  const double r1 = std::sqrt(6.0 / (input_dim + hidden_units));
  std::uniform_real_distribution<double> first(-r1, r1);
  model.hidden_weights.resize(input_dim, hidden_units);
  for (int i = 0; i < input_dim; ++i) {
    for (int j = 0; j < hidden_units; ++j) model.hidden_weights(i, j) = first(rng);
  }
  model.hidden_bias = Eigen::RowVectorXd::Zero(hidden_units);
  const double r2 = std::sqrt(6.0 / (hidden_units + 1));
  std::uniform_real_distribution<double> second(-r2, r2);
  model.output_weights.resize(hidden_units);
  for (int j = 0; j < hidden_units; ++j) model.output_weights(j) = second(rng);
  return model;
}

double ClassifierLoss(const PairClassifier& model, const PairExamples& data) {
  const Eigen::VectorXd z = model.Logits(data.features);
  double total = 0;
  for (Eigen::Index r = 0; r < z.size(); ++r) {
    total += data.weights(r) * (Softplus(z(r)) - data.labels(r) * z(r));
  }
  return total / data.weights.sum();
}

ClassifierGradients ClassifierLossGradients(const PairClassifier& model,
                                            const PairExamples& data) {
  const Eigen::MatrixXd pre = HiddenPre(model, data.features);
  const Eigen::MatrixXd active = pre.cwiseMax(0.0);
  const Eigen::VectorXd z = (active * model.output_weights).array() +
                            model.output_bias;
  const double total_weight = data.weights.sum();
  Eigen::VectorXd d_z(z.size());
  for (Eigen::Index r = 0; r < z.size(); ++r) {
    d_z(r) = data.weights(r) * (Logistic(z(r)) - data.labels(r)) / total_weight;
  }
  ClassifierGradients g;
  g.output_weights = active.transpose() * d_z;
  g.output_bias = d_z.sum();
  Eigen::MatrixXd d_pre = d_z * model.output_weights.transpose();
  d_pre = d_pre.cwiseProduct(
      pre.unaryExpr([](double v) { return v > 0 ? 1.0 : 0.0; }));
  g.hidden_weights = data.features.transpose() * d_pre;
  g.hidden_bias = d_pre.colwise().sum();
  return g;
}

PairClassifier TrainPairClassifier(const PairExamples& data,
                                   const ClassifierOptions& options) {
  const double positives = data.labels.sum();
  if (positives == 0 || positives == data.labels.size()) {
    throw DegenerateLabelsError("classifier training data has a single class");
  }
  if (options.hidden_units <= 0 || options.epochs <= 0 ||
      !(options.learning_rate > 0)) {
    throw InvalidSpecError(
        "classifier needs positive hidden units, epochs and learning rate");
  }
  PairClassifier model = InitPairClassifier(
      static_cast<int>(data.features.cols()), options.hidden_units, options.seed);
  model.loss_history.reserve(options.epochs);
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    const double loss = ClassifierLoss(model, data);
    if (!std::isfinite(loss)) throw DivergenceError("pair classifier", epoch);
    model.loss_history.push_back(loss);
    const ClassifierGradients g = ClassifierLossGradients(model, data);
    model.hidden_weights -= options.learning_rate * g.hidden_weights;
    model.hidden_bias -= options.learning_rate * g.hidden_bias;
    model.output_weights -= options.learning_rate * g.output_weights;
    model.output_bias -= options.learning_rate * g.output_bias;
  }
  return model;
}

PairClassifier TrainPairClassifier(std::span<const SparseVector> fingerprints,
                                   std::span<const SessionPair> truth,
                                   const ClassifierOptions& options) {
  return TrainPairClassifier(
      BuildPairExamples(fingerprints, truth, options.balance_classes), options);
}

void WritePairClassifier(const PairClassifier& model, std::ostream& out) {
  model_io::WriteHeader(out, "pair-classifier", kFormatVersion);
  model_io::WriteMatrix(out, "hidden_weights", model.hidden_weights);
  model_io::WriteMatrix(out, "hidden_bias", model.hidden_bias);
  model_io::WriteMatrix(out, "output_weights", model.output_weights);
  model_io::WriteValues(out, "output_bias", {model.output_bias});
  model_io::WriteValues(out, "loss_history", model.loss_history);
}

PairClassifier ReadPairClassifier(std::istream& in) {
  model_io::ExpectHeader(in, "pair-classifier", kFormatVersion);
  PairClassifier model;
  model.hidden_weights = model_io::ReadMatrix(in, "hidden_weights");
  model.hidden_bias = model_io::ReadRow(in, "hidden_bias");
  const Eigen::MatrixXd output = model_io::ReadMatrix(in, "output_weights");
  const std::vector<double> bias = model_io::ReadValues(in, "output_bias");
  model.loss_history = model_io::ReadValues(in, "loss_history");
  if (output.cols() != 1 || output.rows() != model.hidden_units() ||
      model.hidden_bias.size() != model.hidden_units() || bias.size() != 1) {
    throw ParseError("inconsistent pair classifier shapes", 0);
  }
  model.output_weights = output.col(0);
  model.output_bias = bias[0];
  return model;
}

}  // namespace sessionlink
