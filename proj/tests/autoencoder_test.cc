#include "sessionlink/autoencoder.h"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "sessionlink/errors.h"

namespace sessionlink {
namespace {

double RelativeError(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), 1e-7});
}

// Central differences of `loss` with respect to every entry of `param`.
template <typename Param, typename Grad>
double MaxRelativeError(Param& param, const Grad& analytic,
                        const std::function<double()>& loss) {
  const double h = 1e-6;
  double worst = 0;
  for (Eigen::Index r = 0; r < param.rows(); ++r) {
    for (Eigen::Index c = 0; c < param.cols(); ++c) {
      const double saved = param(r, c);
      param(r, c) = saved + h;
      const double up = loss();
      param(r, c) = saved - h;
      const double down = loss();
      param(r, c) = saved;
      worst = std::max(worst, RelativeError(analytic(r, c), (up - down) / (2 * h)));
    }
  }
  return worst;
}

Eigen::MatrixXd RandomMatrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

TEST(Autoencoder, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(1);
  AutoencoderModel model = InitAutoencoder(4, 3, 7);
  model.encoder_bias = RandomMatrix(1, 3, rng);
  model.decoder_bias = RandomMatrix(1, 4, rng);
  const Eigen::MatrixXd batch = RandomMatrix(5, 4, rng);
  const AutoencoderGradients g = ReconstructionGradients(model, batch);
  const auto loss = [&] { return ReconstructionLoss(model, batch); };

  EXPECT_LT(MaxRelativeError(model.encoder_weights, g.encoder_weights, loss), 1e-4);
  EXPECT_LT(MaxRelativeError(model.decoder_weights, g.decoder_weights, loss), 1e-4);
  EXPECT_LT(MaxRelativeError(model.encoder_bias, g.encoder_bias, loss), 1e-4);
  EXPECT_LT(MaxRelativeError(model.decoder_bias, g.decoder_bias, loss), 1e-4);
}

TEST(Autoencoder, InitIsGlorotWithZeroBiases) {
  const AutoencoderModel model = InitAutoencoder(10, 4, 3);
  const double limit = std::sqrt(6.0 / 14.0);
  EXPECT_LE(model.encoder_weights.cwiseAbs().maxCoeff(), limit);
  EXPECT_LE(model.decoder_weights.cwiseAbs().maxCoeff(), limit);
  EXPECT_TRUE(model.encoder_bias.isZero());
  EXPECT_TRUE(model.decoder_bias.isZero());
  EXPECT_EQ(InitAutoencoder(10, 4, 3).encoder_weights, model.encoder_weights);
}

TEST(Autoencoder, LossDecreasesOnDefaults) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd batch = RandomMatrix(30, 12, rng).cwiseAbs();
  AutoencoderOptions options;
  options.hidden_dim = 4;
  options.seed = 5;
  const AutoencoderModel model = TrainAutoencoder(batch, options);
  ASSERT_EQ(model.loss_history.size(), 500u);
  EXPECT_LE(ReconstructionLoss(model, batch), model.loss_history.front());
  EXPECT_LE(model.loss_history.back(), model.loss_history.front());
}

// Rows are a * b1 + c * b2 for an orthonormal pair b1, b2 in R^10.
Eigen::MatrixXd SubspaceData(int rows, std::mt19937_64& rng) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(RandomMatrix(10, 2, rng));
  const Eigen::MatrixXd basis =
      (qr.householderQ() * Eigen::MatrixXd::Identity(10, 2)).transpose();
  std::uniform_real_distribution<double> coef(-0.5, 0.5);
  Eigen::MatrixXd coefficients(rows, 2);
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    coefficients.data()[i] = coef(rng);
  }
  return coefficients * basis;
}

class SubspaceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(11);
    data_ = SubspaceData(50, rng);
    AutoencoderOptions options;
    options.hidden_dim = 2;
    options.epochs = kEpochs;
    options.learning_rate = kLearningRate;
    options.seed = 3;
    model_ = TrainAutoencoder(data_, options);
  }

  static constexpr int kEpochs = 20000;
  static constexpr double kLearningRate = 0.5;
  Eigen::MatrixXd data_;
  AutoencoderModel model_;
};

TEST_F(SubspaceTest, DataHasRankTwo) {
  // Least-squares oracle: the best rank-2 approximation is exact.
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(data_);
  EXPECT_GT(svd.singularValues()(1), 1e-3);
  EXPECT_LT(svd.singularValues()(2), 1e-12);
}

TEST_F(SubspaceTest, ReconstructionErrorSmall) {
  EXPECT_LT(ReconstructionLoss(model_, data_), 1e-3);
}

TEST_F(SubspaceTest, EncodeDecodeRoundTrip) {
  const Eigen::RowVectorXd x = data_.row(0);
  const SparseVector code =
      Encode(model_, SparseVector::FromDense(std::vector<double>(x.data(), x.data() + 10)));
  ASSERT_EQ(code.dim(), 2u);
  const std::vector<double> h = code.ToDense();
  const Eigen::RowVectorXd back =
      Eigen::Map<const Eigen::RowVectorXd>(h.data(), 2) * model_.decoder_weights +
      model_.decoder_bias;
  EXPECT_LT((back - x).squaredNorm(), 1e-3);
}

TEST(Autoencoder, EncodeShapes) {
  AutoencoderModel model = InitAutoencoder(5, 3, 1);
  const SparseVector code = Encode(model, SparseVector(5));
  ASSERT_EQ(code.dim(), 3u);
  for (double v : code.ToDense()) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_THROW(Encode(model, SparseVector(4)), ShapeError);
}

TEST(Autoencoder, RejectsBadOptions) {
  const Eigen::MatrixXd batch = Eigen::MatrixXd::Ones(3, 4);
  AutoencoderOptions options;
  options.hidden_dim = 4;
  EXPECT_THROW(TrainAutoencoder(batch, options), InvalidSpecError);
  options.hidden_dim = 2;
  options.learning_rate = 0;
  EXPECT_THROW(TrainAutoencoder(batch, options), InvalidSpecError);
}

TEST(Autoencoder, DivergenceIsReported) {
  const Eigen::MatrixXd batch = Eigen::MatrixXd::Constant(4, 6, 1e3);
  AutoencoderOptions options;
  options.hidden_dim = 2;
  options.learning_rate = 1e3;
  options.epochs = 200;
  EXPECT_THROW(TrainAutoencoder(batch, options), DivergenceError);
}

TEST(Autoencoder, SerializationRoundTrip) {
  std::mt19937_64 rng(4);
  AutoencoderOptions options;
  options.hidden_dim = 3;
  options.epochs = 10;
  const AutoencoderModel model = TrainAutoencoder(RandomMatrix(8, 6, rng), options);
  std::stringstream buffer;
  WriteAutoencoder(model, buffer);
  const AutoencoderModel back = ReadAutoencoder(buffer);
  EXPECT_EQ(back.encoder_weights, model.encoder_weights);
  EXPECT_EQ(back.encoder_bias, model.encoder_bias);
  EXPECT_EQ(back.decoder_weights, model.decoder_weights);
  EXPECT_EQ(back.decoder_bias, model.decoder_bias);
}

TEST(Autoencoder, ReadRejectsGarbage) {
  std::istringstream in("not a model\n");
  EXPECT_THROW(ReadAutoencoder(in), ParseError);
}

}  // namespace
}  // namespace sessionlink
