#include "cafpono/pnl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cafpono {
namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

Eigen::MatrixXd gather_rows(const Eigen::Ref<const Eigen::MatrixXd>& x,
                            const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  }
  return out;
}

Eigen::VectorXd gather(const Eigen::Ref<const Eigen::VectorXd>& v,
                       const std::vector<int>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = v[rows[i]];
  }
  return out;
}

void check_xy(const Eigen::Ref<const Eigen::MatrixXd>& x,
              const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.rows() != y.size()) throw std::invalid_argument("pnl: x and y row counts differ");
  if (x.rows() < 1) throw std::invalid_argument("pnl: empty data");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("pnl: non-finite data");
}

struct Adam {
  Eigen::VectorXd m, v;
  double lr;
  int t = 0;

  Adam(Eigen::Index dim, double lr_in)
      : m(Eigen::VectorXd::Zero(dim)), v(Eigen::VectorXd::Zero(dim)), lr(lr_in) {}

  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    ++t;
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(b1, t);
    const double c2 = 1.0 - std::pow(b2, t);
    theta.array() -=
        lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  }
};

struct TrainOutcome {
  Eigen::VectorXd best_theta;
  double best_val = 0.0;
  int epochs_run = 0;
  std::vector<int> train_rows;
};

// Generic mini-batch loop shared by the likelihood and regression fits.
// LossGrad(theta, X, y, grad) and Loss(theta, X, y) both return the loss.
template <typename LossGrad, typename Loss>
TrainOutcome run_adam(Eigen::VectorXd theta, const Eigen::Ref<const Eigen::MatrixXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& y, const FitConfig& cfg,
                      LossGrad&& loss_grad_fn, Loss&& loss_fn) {
  const int n = static_cast<int>(x.rows());
  if (n < 32) throw std::invalid_argument("fit: need at least 32 rows");

  Rng rng_split(mix_seed(cfg.seed, 2));
  std::vector<int> perm = rng_split.permutation(n);
  const int n_val = n / 5;
  const int n_train = n - n_val;
  std::vector<int> train_rows(perm.begin(), perm.begin() + n_train);
  std::vector<int> val_rows(perm.begin() + n_train, perm.end());

  const Eigen::MatrixXd x_train = gather_rows(x, train_rows);
  const Eigen::VectorXd y_train = gather(y, train_rows);
  const Eigen::MatrixXd x_val = gather_rows(x, val_rows);
  const Eigen::VectorXd y_val = gather(y, val_rows);

  Adam adam(theta.size(), cfg.learning_rate);
  Eigen::VectorXd grad(theta.size());

  TrainOutcome out;
  out.best_theta = theta;
  // Best-so-far starts empty: only trained epochs are candidates, so the
  // patience window measures progress against the training run itself
  // rather than against the untrained starting point.
  out.best_val = std::numeric_limits<double>::infinity();
  out.train_rows = std::move(train_rows);

  Rng rng_batch(mix_seed(cfg.seed, 3));
  std::vector<int> order(static_cast<std::size_t>(n_train));
  for (int i = 0; i < n_train; ++i) order[static_cast<std::size_t>(i)] = i;

  int stale = 0;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    out.epochs_run = epoch;
    rng_batch.shuffle(order);
    for (int start = 0; start < n_train; start += cfg.batch_size) {
      const int stop = std::min(start + cfg.batch_size, n_train);
      std::vector<int> batch(order.begin() + start, order.begin() + stop);
      const double loss = loss_grad_fn(theta, gather_rows(x_train, batch),
                                       gather(y_train, batch), grad);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("fit: training diverged at epoch " + std::to_string(epoch));
      }
      adam.step(theta, grad);
    }
    const double val = loss_fn(theta, x_val, y_val);
    if (!std::isfinite(val)) {
      throw std::runtime_error("fit: training diverged at epoch " + std::to_string(epoch));
    }
    if (val < out.best_val) {
      out.best_val = val;
      out.best_theta = theta;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  return out;
}

}  // namespace

void FitConfig::validate() const {
  if (components < 1) throw std::invalid_argument("FitConfig: components must be positive");
  if (hidden_dim < 1) throw std::invalid_argument("FitConfig: hidden_dim must be positive");
  if (!(learning_rate > 0.0) || !(learning_rate < 1.0)) {
    throw std::invalid_argument("FitConfig: learning_rate must lie in (0, 1)");
  }
  if (batch_size < 1) throw std::invalid_argument("FitConfig: batch_size must be positive");
  if (max_epochs < 1) throw std::invalid_argument("FitConfig: max_epochs must be positive");
  if (patience < 1) throw std::invalid_argument("FitConfig: patience must be positive");
}

void PnlModel::validate() const {
  flow.validate();
  net.validate();
}

Eigen::VectorXd estimate_noise(const PnlModel& m,
                               const Eigen::Ref<const Eigen::MatrixXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y) {
  m.validate();
  check_xy(x, y);
  const FlowCache cache(m.flow);
  Eigen::VectorXd z(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) z[i] = cache.eval(y[i]).z;
  return z - m.net.forward(x);
}

double nll_loss(const PnlModel& m, const Eigen::Ref<const Eigen::MatrixXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& y) {
  m.validate();
  check_xy(x, y);
  const FlowCache cache(m.flow);
  const Eigen::VectorXd f = m.net.forward(x);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const FlowEval e = cache.eval(y[i]);
    const double eps = e.z - f[i];
    acc += 0.5 * eps * eps - e.log_deriv;
  }
  return acc / static_cast<double>(y.size()) + kLogSqrt2Pi;
}

double nll_loss_grad(const PnlModel& m, const Eigen::Ref<const Eigen::MatrixXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y, Eigen::VectorXd& grad) {
  m.validate();
  check_xy(x, y);
  const int k = m.flow.components();
  const int n = static_cast<int>(y.size());
  const FlowCache cache(m.flow);

  Eigen::VectorXd f;
  const Eigen::MatrixXd hidden = m.net.forward_cached(x, f);

  Eigen::VectorXd flow_grad_acc = Eigen::VectorXd::Zero(3 * k);
  Eigen::VectorXd dz(3 * k), dld(3 * k);
  Eigen::VectorXd dout(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const FlowEval e = cache.grad(y[i], dz.data(), dld.data());
    const double eps = e.z - f[i];
    acc += 0.5 * eps * eps - e.log_deriv;
    flow_grad_acc += eps * dz - dld;
    dout[i] = -eps;  // dL_i / df_i
  }

  InnerNet ngrad;
  m.net.backward(x, hidden, dout, ngrad);

  PnlModel packed_grad;
  packed_grad.flow.raw_weights = flow_grad_acc.segment(0, k);
  packed_grad.flow.means = flow_grad_acc.segment(k, k);
  packed_grad.flow.raw_scales = flow_grad_acc.segment(2 * k, k);
  packed_grad.net = ngrad;
  grad = pack(packed_grad) / static_cast<double>(n);
  return acc / static_cast<double>(n) + kLogSqrt2Pi;
}

Eigen::VectorXd pack(const PnlModel& m) {
  const int k = m.flow.components();
  const int h = m.net.hidden_dim();
  const int p = m.net.input_dim();
  Eigen::VectorXd theta(3 * k + h * p + 2 * h + 1);
  theta.segment(0, k) = m.flow.raw_weights;
  theta.segment(k, k) = m.flow.means;
  theta.segment(2 * k, k) = m.flow.raw_scales;
  Eigen::Index off = 3 * k;
  theta.segment(off, h * p) = Eigen::Map<const Eigen::VectorXd>(m.net.w1.data(), h * p);
  off += h * p;
  theta.segment(off, h) = m.net.b1;
  off += h;
  theta.segment(off, h) = m.net.w2;
  off += h;
  theta[off] = m.net.b2;
  return theta;
}

void unpack(const Eigen::Ref<const Eigen::VectorXd>& theta, PnlModel& m) {
  const int k = m.flow.components();
  const int h = m.net.hidden_dim();
  const int p = m.net.input_dim();
  if (theta.size() != 3 * k + h * p + 2 * h + 1) {
    throw std::invalid_argument("unpack: parameter vector has wrong length");
  }
  m.flow.raw_weights = theta.segment(0, k);
  m.flow.means = theta.segment(k, k);
  m.flow.raw_scales = theta.segment(2 * k, k);
  Eigen::Index off = 3 * k;
  m.net.w1 = Eigen::Map<const Eigen::MatrixXd>(theta.segment(off, h * p).data(), h, p);
  off += h * p;
  m.net.b1 = theta.segment(off, h);
  off += h;
  m.net.w2 = theta.segment(off, h);
  off += h;
  m.net.b2 = theta[off];
}

FitResult fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
              const Eigen::Ref<const Eigen::VectorXd>& y, const FitConfig& cfg) {
  cfg.validate();
  check_xy(x, y);

  Rng rng_init(mix_seed(cfg.seed, 1));
  PnlModel model;
  model.flow = CdfFlowParams::initial(cfg.components);
  model.net = InnerNet::glorot(static_cast<int>(x.cols()), cfg.hidden_dim, rng_init);

  PnlModel scratch = model;
  const auto loss_grad_fn = [&scratch](const Eigen::VectorXd& theta,
                                       const Eigen::MatrixXd& xb, const Eigen::VectorXd& yb,
                                       Eigen::VectorXd& grad) {
    unpack(theta, scratch);
    return nll_loss_grad(scratch, xb, yb, grad);
  };
  const auto loss_fn = [&scratch](const Eigen::VectorXd& theta, const Eigen::MatrixXd& xv,
                                  const Eigen::VectorXd& yv) {
    unpack(theta, scratch);
    return nll_loss(scratch, xv, yv);
  };

  TrainOutcome out = run_adam(pack(model), x, y, cfg, loss_grad_fn, loss_fn);
  unpack(out.best_theta, model);

  FitResult r;
  r.model = model;
  r.val_nll = out.best_val;
  r.epochs_run = out.epochs_run;
  r.train_nll = nll_loss(model, gather_rows(x, out.train_rows), gather(y, out.train_rows));
  return r;
}

RegressionResult fit_regressor(const Eigen::Ref<const Eigen::MatrixXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               const FitConfig& cfg) {
  cfg.validate();
  check_xy(x, y);

  Rng rng_init(mix_seed(cfg.seed, 1));
  InnerNet net = InnerNet::glorot(static_cast<int>(x.cols()), cfg.hidden_dim, rng_init);

  const int h = net.hidden_dim();
  const int p = net.input_dim();
  const auto pack_net = [h, p](const InnerNet& nn) {
    Eigen::VectorXd theta(h * p + 2 * h + 1);
    theta.segment(0, h * p) = Eigen::Map<const Eigen::VectorXd>(nn.w1.data(), h * p);
    theta.segment(h * p, h) = nn.b1;
    theta.segment(h * p + h, h) = nn.w2;
    theta[h * p + 2 * h] = nn.b2;
    return theta;
  };
  const auto unpack_net = [h, p](const Eigen::VectorXd& theta, InnerNet& nn) {
    nn.w1 = Eigen::Map<const Eigen::MatrixXd>(theta.data(), h, p);
    nn.b1 = theta.segment(h * p, h);
    nn.w2 = theta.segment(h * p + h, h);
    nn.b2 = theta[h * p + 2 * h];
  };

  InnerNet scratch = net;
  const auto loss_grad_fn = [&](const Eigen::VectorXd& theta, const Eigen::MatrixXd& xb,
                                const Eigen::VectorXd& yb, Eigen::VectorXd& grad) {
    unpack_net(theta, scratch);
    Eigen::VectorXd f;
    const Eigen::MatrixXd hidden = scratch.forward_cached(xb, f);
    const Eigen::VectorXd diff = f - yb;
    const double inv_n = 1.0 / static_cast<double>(yb.size());
    InnerNet ngrad;
    scratch.backward(xb, hidden, Eigen::VectorXd(2.0 * inv_n * diff), ngrad);
    grad = pack_net(ngrad);
    return diff.squaredNorm() * inv_n;
  };
  const auto loss_fn = [&](const Eigen::VectorXd& theta, const Eigen::MatrixXd& xv,
                           const Eigen::VectorXd& yv) {
    unpack_net(theta, scratch);
    return (scratch.forward(xv) - yv).squaredNorm() / static_cast<double>(yv.size());
  };

  TrainOutcome out = run_adam(pack_net(net), x, y, cfg, loss_grad_fn, loss_fn);
  unpack_net(out.best_theta, net);

  RegressionResult r;
  r.net = net;
  r.val_mse = out.best_val;
  r.epochs_run = out.epochs_run;
  r.train_mse = (net.forward(gather_rows(x, out.train_rows)) - gather(y, out.train_rows))
                    .squaredNorm() /
                static_cast<double>(out.train_rows.size());
  return r;
}

Eigen::VectorXd residuals(const InnerNet& net, const Eigen::Ref<const Eigen::MatrixXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y) {
  check_xy(x, y);
  return y - net.forward(x);
}

HoldoutNoise holdout_noise(const Eigen::Ref<const Eigen::MatrixXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y,
                           const FitConfig& cfg) {
  check_xy(x, y);
  const int n = static_cast<int>(x.rows());
  Rng rng_split(mix_seed(cfg.seed, 101));
  std::vector<int> perm = rng_split.permutation(n);
  const int n_train = 3 * n / 5;
  std::vector<int> train_rows(perm.begin(), perm.begin() + n_train);
  std::vector<int> test_rows(perm.begin() + n_train, perm.end());
  std::sort(test_rows.begin(), test_rows.end());

  HoldoutNoise out;
  out.fit = fit(gather_rows(x, train_rows), gather(y, train_rows), cfg);
  out.noise = estimate_noise(out.fit.model, gather_rows(x, test_rows), gather(y, test_rows));
  out.test_rows = std::move(test_rows);
  return out;
}

}  // namespace cafpono
