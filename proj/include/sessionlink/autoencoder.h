#ifndef SESSIONLINK_AUTOENCODER_H_
#define SESSIONLINK_AUTOENCODER_H_

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sessionlink/sparse_vector.h"

namespace sessionlink {

struct AutoencoderOptions {
  int hidden_dim = 64;
  int epochs = 500;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
};

// Single hidden layer: h = sigmoid(x W_enc + b_enc), x' = h W_dec + b_dec.
// Row vectors throughout; a batch is an N x input_dim matrix.
struct AutoencoderModel {
  Eigen::MatrixXd encoder_weights;  // input_dim x hidden_dim
  Eigen::RowVectorXd encoder_bias;  // hidden_dim
  Eigen::MatrixXd decoder_weights;  // hidden_dim x input_dim
  Eigen::RowVectorXd decoder_bias;  // input_dim
  // Loss of the forward pass at the start of each epoch.
  std::vector<double> loss_history;

  int input_dim() const { return static_cast<int>(encoder_weights.rows()); }
  int hidden_dim() const { return static_cast<int>(encoder_weights.cols()); }

  Eigen::MatrixXd Hidden(const Eigen::MatrixXd& batch) const;
  Eigen::MatrixXd Reconstruct(const Eigen::MatrixXd& batch) const;
};

struct AutoencoderGradients {
  Eigen::MatrixXd encoder_weights;
  Eigen::RowVectorXd encoder_bias;
  Eigen::MatrixXd decoder_weights;
  Eigen::RowVectorXd decoder_bias;
};

// Glorot-uniform weights, zero biases.
AutoencoderModel InitAutoencoder(int input_dim, int hidden_dim,
                                 std::uint64_t seed);

// Mean over rows of the squared reconstruction error ||x' - x||^2.
double ReconstructionLoss(const AutoencoderModel& model,
                          const Eigen::MatrixXd& batch);
AutoencoderGradients ReconstructionGradients(const AutoencoderModel& model,
                                             const Eigen::MatrixXd& batch);

// Full-batch gradient descent. Throws InvalidSpecError for an empty input or
// hidden_dim >= input dimension and DivergenceError on a non-finite loss.
AutoencoderModel TrainAutoencoder(std::span<const SparseVector> vectors,
                                  const AutoencoderOptions& options);
AutoencoderModel TrainAutoencoder(const Eigen::MatrixXd& batch,
                                  const AutoencoderOptions& options);

// Hidden activation as a dense hidden_dim vector. ShapeError on mismatch.
SparseVector Encode(const AutoencoderModel& model, const SparseVector& input);

Eigen::MatrixXd StackDense(std::span<const SparseVector> vectors);

void WriteAutoencoder(const AutoencoderModel& model, std::ostream& out);
AutoencoderModel ReadAutoencoder(std::istream& in);

}  // namespace sessionlink

#endif  // SESSIONLINK_AUTOENCODER_H_
