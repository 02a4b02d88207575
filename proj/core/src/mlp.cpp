#include "cafpono/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace cafpono {

void InnerNet::validate() const {
  if (w1.rows() < 1 || w1.cols() < 1) {
    throw std::invalid_argument("InnerNet: empty weight matrix");
  }
  if (b1.size() != w1.rows() || w2.size() != w1.rows()) {
    throw std::invalid_argument("InnerNet: mismatched layer sizes");
  }
  if (!w1.allFinite() || !b1.allFinite() || !w2.allFinite() || !std::isfinite(b2)) {
    throw std::invalid_argument("InnerNet: non-finite parameter");
  }
}

InnerNet InnerNet::glorot(int input_dim, int hidden_dim, Rng& rng) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw std::invalid_argument("InnerNet: dimensions must be positive");
  }
  InnerNet net;
  net.w1.resize(hidden_dim, input_dim);
  const double s1 = std::sqrt(2.0 / static_cast<double>(input_dim + hidden_dim));
  for (int i = 0; i < hidden_dim; ++i) {
    for (int j = 0; j < input_dim; ++j) net.w1(i, j) = s1 * rng.normal();
  }
  net.b1 = Eigen::VectorXd::Zero(hidden_dim);
  net.w2.resize(hidden_dim);
  const double s2 = std::sqrt(2.0 / static_cast<double>(hidden_dim + 1));
  for (int i = 0; i < hidden_dim; ++i) net.w2[i] = s2 * rng.normal();
  net.b2 = 0.0;
  return net;
}

Eigen::VectorXd InnerNet::forward(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  Eigen::VectorXd out;
  forward_cached(x, out);
  return out;
}

Eigen::MatrixXd InnerNet::forward_cached(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                         Eigen::VectorXd& out) const {
  if (x.cols() != w1.cols()) throw std::invalid_argument("InnerNet: input dim mismatch");
  Eigen::MatrixXd hidden = ((x * w1.transpose()).rowwise() + b1.transpose()).array().tanh();
  out = hidden * w2;
  out.array() += b2;
  return hidden;
}

void InnerNet::backward(const Eigen::Ref<const Eigen::MatrixXd>& x,
                        const Eigen::Ref<const Eigen::MatrixXd>& hidden,
                        const Eigen::Ref<const Eigen::VectorXd>& dout,
                        InnerNet& grad) const {
  // d tanh(a) = 1 - tanh(a)^2; hidden already holds tanh(a).
  const Eigen::MatrixXd dpre =
      (dout * w2.transpose()).array() * (1.0 - hidden.array().square());
  grad.w1 = dpre.transpose() * x;
  grad.b1 = dpre.colwise().sum().transpose();
  grad.w2 = hidden.transpose() * dout;
  grad.b2 = dout.sum();
}

}  // namespace cafpono
