#pragma once

#include <Eigen/Core>

#include "cafpono/rng.hpp"

namespace cafpono {

// One-hidden-layer tanh network with scalar output: f(x) = w2' tanh(W1 x + b1) + b2.
struct InnerNet {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;  // hidden
  Eigen::VectorXd w2;  // hidden
  double b2 = 0.0;

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  int param_count() const { return hidden_dim() * (input_dim() + 2) + 1; }
  void validate() const;

  static InnerNet glorot(int input_dim, int hidden_dim, Rng& rng);

  // Row-wise outputs for an n x input_dim batch.
  Eigen::VectorXd forward(const Eigen::Ref<const Eigen::MatrixXd>& x) const;

  // Backprop for the batch: given dL/df per row, accumulates parameter
  // gradients into *this-shaped buffers. hidden = tanh activations from
  // forward_cached.
  Eigen::MatrixXd forward_cached(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                 Eigen::VectorXd& out) const;
  void backward(const Eigen::Ref<const Eigen::MatrixXd>& x,
                const Eigen::Ref<const Eigen::MatrixXd>& hidden,
                const Eigen::Ref<const Eigen::VectorXd>& dout,
                InnerNet& grad) const;
};

}  // namespace cafpono
