#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "cafpono/cdf_flow.hpp"
#include "cafpono/mlp.hpp"

namespace cafpono {

struct FitConfig {
  int components = 10;  // flow mixture size
  int hidden_dim = 64;
  double learning_rate = 1e-3;
  int batch_size = 128;
  int max_epochs = 500;
  int patience = 20;  // epochs without validation improvement before stopping
  std::uint64_t seed = 0;

  void validate() const;
};

// Post-nonlinear regression y = g(f(x) + eps): the flow plays g^{-1}, the
// inner net plays f, and the recovered noise is eps = flow(y) - f(x).
struct PnlModel {
  CdfFlowParams flow;
  InnerNet net;

  int param_count() const { return 3 * flow.components() + net.param_count(); }
  void validate() const;
};

Eigen::VectorXd estimate_noise(const PnlModel& m,
                               const Eigen::Ref<const Eigen::MatrixXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y);

// Mean negative log-likelihood of y | x under eps ~ N(0, 1):
//   mean_i [ ln sqrt(2 pi) + eps_i^2 / 2 - log|d flow / dy|(y_i) ].
double nll_loss(const PnlModel& m, const Eigen::Ref<const Eigen::MatrixXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& y);

// Same loss plus its gradient w.r.t. the packed parameter vector.
double nll_loss_grad(const PnlModel& m, const Eigen::Ref<const Eigen::MatrixXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y, Eigen::VectorXd& grad);

// Flat layout: [flow raw_weights | flow means | flow raw_scales |
//               vec(W1) | b1 | w2 | b2].
Eigen::VectorXd pack(const PnlModel& m);
void unpack(const Eigen::Ref<const Eigen::VectorXd>& theta, PnlModel& m);

struct FitResult {
  PnlModel model;
  double train_nll = 0.0;
  double val_nll = 0.0;
  int epochs_run = 0;
};

// Mini-batch Adam with a seeded 80/20 train/validation split of the given
// rows and patience-based early stopping; returns the parameters with the
// best validation loss seen. Bitwise deterministic given cfg.seed. Throws
// std::runtime_error naming the epoch if the loss stops being finite.
FitResult fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
              const Eigen::Ref<const Eigen::VectorXd>& y, const FitConfig& cfg);

struct RegressionResult {
  InnerNet net;
  double train_mse = 0.0;
  double val_mse = 0.0;
  int epochs_run = 0;
};

// Same architecture and training loop, squared-error loss; used where only
// a conditional-mean fit is needed. cfg.components is ignored.
RegressionResult fit_regressor(const Eigen::Ref<const Eigen::MatrixXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               const FitConfig& cfg);

Eigen::VectorXd residuals(const InnerNet& net,
                          const Eigen::Ref<const Eigen::MatrixXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y);

struct HoldoutNoise {
  Eigen::VectorXd noise;       // recovered on the holdout rows
  std::vector<int> test_rows;  // ascending indices into the input rows
  FitResult fit;
};

// 6:4 seeded split: fit on the first part, recover noise on the holdout.
// The split stream is derived from cfg.seed, so a caller that swaps x and y
// sees the same partition.
HoldoutNoise holdout_noise(const Eigen::Ref<const Eigen::MatrixXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y,
                           const FitConfig& cfg);

}  // namespace cafpono
