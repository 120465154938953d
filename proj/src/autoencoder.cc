#include "sessionlink/autoencoder.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "model_io.h"
#include "sessionlink/errors.h"
#include "sessionlink/random.h"

namespace sessionlink {
namespace {

constexpr int kFormatVersion = 1;

Eigen::MatrixXd Sigmoid(const Eigen::MatrixXd& z) {
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Eigen::MatrixXd GlorotUniform(int fan_in, int fan_out, Rng& rng) {
  const double r = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-r, r);
  Eigen::MatrixXd m(fan_in, fan_out);
  // Fill order is fixed (row-major) so models do not depend on Eigen's
  // storage order.
  for (int i = 0; i < fan_in; ++i) {
    for (int j = 0; j < fan_out; ++j) m(i, j) = dist(rng);
  }
  return m;
}

}  // namespace

Eigen::MatrixXd AutoencoderModel::Hidden(const Eigen::MatrixXd& batch) const {
  Eigen::MatrixXd z = batch * encoder_weights;
  z.rowwise() += encoder_bias;
  return Sigmoid(z);
}

Eigen::MatrixXd AutoencoderModel::Reconstruct(
    const Eigen::MatrixXd& batch) const {
  Eigen::MatrixXd out = Hidden(batch) * decoder_weights;
  out.rowwise() += decoder_bias;
  return out;
}

AutoencoderModel InitAutoencoder(int input_dim, int hidden_dim,
                                 std::uint64_t seed) {
  Rng rng(seed);
  AutoencoderModel model;
  model.encoder_weights = GlorotUniform(input_dim, hidden_dim, rng);
  model.encoder_bias = Eigen::RowVectorXd::Zero(hidden_dim);
  model.decoder_weights = GlorotUniform(hidden_dim, input_dim, rng);
  model.decoder_bias = Eigen::RowVectorXd::Zero(input_dim);
  return model;
}

double ReconstructionLoss(const AutoencoderModel& model,
                          const Eigen::MatrixXd& batch) {
  return (model.Reconstruct(batch) - batch).squaredNorm() /
         static_cast<double>(batch.rows());
}

AutoencoderGradients ReconstructionGradients(const AutoencoderModel& model,
                                             const Eigen::MatrixXd& batch) {
  const Eigen::MatrixXd hidden = model.Hidden(batch);
  Eigen::MatrixXd out = hidden * model.decoder_weights;
  out.rowwise() += model.decoder_bias;
  const Eigen::MatrixXd d_out =
      (out - batch) * (2.0 / static_cast<double>(batch.rows()));
  const Eigen::MatrixXd d_hidden = d_out * model.decoder_weights.transpose();
  const Eigen::MatrixXd d_pre =
      d_hidden.cwiseProduct(hidden.cwiseProduct((1.0 - hidden.array()).matrix()));

  AutoencoderGradients g;
  g.decoder_weights = hidden.transpose() * d_out;
  g.decoder_bias = d_out.colwise().sum();
  g.encoder_weights = batch.transpose() * d_pre;
  g.encoder_bias = d_pre.colwise().sum();
  return g;
}

Eigen::MatrixXd StackDense(std::span<const SparseVector> vectors) {
  if (vectors.empty()) return {};
  const std::size_t dim = vectors.front().dim();
  Eigen::MatrixXd batch = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    if (vectors[r].dim() != dim) {
      throw ShapeError("vectors of dimension " + std::to_string(dim) + " and " +
                       std::to_string(vectors[r].dim()));
    }
    for (const auto& e : vectors[r].entries()) {
      batch(static_cast<Eigen::Index>(r), e.index) = e.weight;
    }
  }
  return batch;
}

AutoencoderModel TrainAutoencoder(const Eigen::MatrixXd& batch,
                                  const AutoencoderOptions& options) {
  if (batch.rows() == 0) throw InvalidSpecError("autoencoder needs input vectors");
  if (options.hidden_dim <= 0 || options.hidden_dim >= batch.cols()) {
    throw InvalidSpecError("hidden_dim " + std::to_string(options.hidden_dim) +
                           " must lie in [1, " + std::to_string(batch.cols()) +
                           ")");
  }
  if (options.epochs <= 0 || !(options.learning_rate > 0)) {
    throw InvalidSpecError("autoencoder needs positive epochs and learning rate");
  }
  AutoencoderModel model = InitAutoencoder(
      static_cast<int>(batch.cols()), options.hidden_dim, options.seed);
  model.loss_history.reserve(options.epochs);
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    const double loss = ReconstructionLoss(model, batch);
    if (!std::isfinite(loss)) throw DivergenceError("autoencoder", epoch);
    model.loss_history.push_back(loss);
    const AutoencoderGradients g = ReconstructionGradients(model, batch);
    model.encoder_weights -= options.learning_rate * g.encoder_weights;
    model.encoder_bias -= options.learning_rate * g.encoder_bias;
    model.decoder_weights -= options.learning_rate * g.decoder_weights;
    model.decoder_bias -= options.learning_rate * g.decoder_bias;
  }
  if (!model.encoder_weights.allFinite() || !model.decoder_weights.allFinite()) {
    throw DivergenceError("autoencoder", options.epochs);
  }
  return model;
}

AutoencoderModel TrainAutoencoder(std::span<const SparseVector> vectors,
                                  const AutoencoderOptions& options) {
  return TrainAutoencoder(StackDense(vectors), options);
}

SparseVector Encode(const AutoencoderModel& model, const SparseVector& input) {
  if (static_cast<int>(input.dim()) != model.input_dim()) {
    throw ShapeError("input dimension " + std::to_string(input.dim()) +
                     " != model input " + std::to_string(model.input_dim()));
  }
  const Eigen::MatrixXd hidden = model.Hidden(StackDense({&input, 1}));
  std::vector<SparseVector::Entry> entries;
  entries.reserve(hidden.cols());
  for (Eigen::Index j = 0; j < hidden.cols(); ++j) {
    entries.push_back({static_cast<std::uint32_t>(j), hidden(0, j)});
  }
  return SparseVector(static_cast<std::size_t>(hidden.cols()),
                      std::move(entries));
}

void WriteAutoencoder(const AutoencoderModel& model, std::ostream& out) {
  model_io::WriteHeader(out, "autoencoder", kFormatVersion);
  model_io::WriteMatrix(out, "encoder_weights", model.encoder_weights);
  model_io::WriteMatrix(out, "encoder_bias", model.encoder_bias);
  model_io::WriteMatrix(out, "decoder_weights", model.decoder_weights);
  model_io::WriteMatrix(out, "decoder_bias", model.decoder_bias);
  model_io::WriteValues(out, "loss_history", model.loss_history);
}

AutoencoderModel ReadAutoencoder(std::istream& in) {
  model_io::ExpectHeader(in, "autoencoder", kFormatVersion);
  AutoencoderModel model;
  model.encoder_weights = model_io::ReadMatrix(in, "encoder_weights");
  model.encoder_bias = model_io::ReadRow(in, "encoder_bias");
  model.decoder_weights = model_io::ReadMatrix(in, "decoder_weights");
  model.decoder_bias = model_io::ReadRow(in, "decoder_bias");
  model.loss_history = model_io::ReadValues(in, "loss_history");
  const int in_dim = model.input_dim();
  const int hid = model.hidden_dim();
  if (model.encoder_bias.size() != hid || model.decoder_weights.rows() != hid ||
      model.decoder_weights.cols() != in_dim ||
      model.decoder_bias.size() != in_dim) {
    throw ParseError("inconsistent autoencoder shapes", 0);
  }
  return model;
}

}  // namespace sessionlink
