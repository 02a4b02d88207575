#include "cafpono/cdf_flow.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cafpono {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln sqrt(2*pi)
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double norm_cdf(double u) { return 0.5 * std::erfc(-u * kInvSqrt2); }

void check_input(double y) {
  if (!std::isfinite(y)) throw std::domain_error("flow: non-finite input");
}

}  // namespace

Eigen::VectorXd CdfFlowParams::weights() const {
  const double m = raw_weights.maxCoeff();
  const Eigen::ArrayXd e = (raw_weights.array() - m).exp();
  return (e / e.sum()).matrix();
}

Eigen::VectorXd CdfFlowParams::scales() const {
  return (raw_scales.array().exp() + kScaleFloor).matrix();
}

void CdfFlowParams::validate() const {
  const Eigen::Index k = means.size();
  if (k < 1) throw std::invalid_argument("CdfFlowParams: need at least one component");
  if (raw_weights.size() != k || raw_scales.size() != k) {
    throw std::invalid_argument("CdfFlowParams: parameter blocks must have equal length");
  }
  if (!raw_weights.allFinite() || !means.allFinite() || !raw_scales.allFinite()) {
    throw std::invalid_argument("CdfFlowParams: non-finite parameter");
  }
}

CdfFlowParams CdfFlowParams::initial(int k) {
  if (k < 1) throw std::invalid_argument("CdfFlowParams: need at least one component");
  CdfFlowParams p;
  p.raw_weights = Eigen::VectorXd::Zero(k);
  p.means = k == 1 ? Eigen::VectorXd::Zero(1).eval()
                   : Eigen::VectorXd::LinSpaced(k, -2.0, 2.0).eval();
  p.raw_scales = Eigen::VectorXd::Zero(k);
  return p;
}

CdfFlowParams CdfFlowParams::from_moments(const Eigen::VectorXd& w,
                                          const Eigen::VectorXd& mu,
                                          const Eigen::VectorXd& sigma) {
  const Eigen::Index k = mu.size();
  if (k < 1 || w.size() != k || sigma.size() != k) {
    throw std::invalid_argument("CdfFlowParams: parameter blocks must have equal length");
  }
  if (!(w.minCoeff() > 0.0)) {
    throw std::invalid_argument("CdfFlowParams: weights must be positive");
  }
  if (!(sigma.minCoeff() > kScaleFloor)) {
    throw std::invalid_argument("CdfFlowParams: scales must exceed the scale floor");
  }
  CdfFlowParams p;
  p.raw_weights = w.array().log();  // softmax renormalizes, so w need not sum to 1
  p.means = mu;
  p.raw_scales = (sigma.array() - kScaleFloor).log();
  p.validate();
  return p;
}

FlowCache::FlowCache(const CdfFlowParams& p) {
  p.validate();
  w_ = p.weights();
  log_w_ = w_.array().log();
  mu_ = p.means;
  sigma_ = p.scales();
  log_sigma_ = sigma_.array().log();
}

FlowEval FlowCache::eval(double y) const {
  check_input(y);
  const int k = components();
  double t_raw = 0.0;
  // Streaming log-sum-exp over log(w_j) + log N(y; mu_j, sigma_j).
  double lse_max = kNegInf, lse_sum = 0.0;
  for (int j = 0; j < k; ++j) {
    const double u = (y - mu_[j]) / sigma_[j];
    t_raw += w_[j] * norm_cdf(u);
    const double a = log_w_[j] - 0.5 * u * u - kLogSqrt2Pi - log_sigma_[j];
    if (a == kNegInf) continue;
    if (lse_sum == 0.0) {
      lse_max = a;
      lse_sum = 1.0;
    } else if (a <= lse_max) {
      lse_sum += std::exp(a - lse_max);
    } else {
      lse_sum = lse_sum * std::exp(lse_max - a) + 1.0;
      lse_max = a;
    }
  }
  const double log_mix = lse_sum == 0.0 ? kNegInf : lse_max + std::log(lse_sum);

  FlowEval e;
  double t = t_raw;
  if (t < kCdfClamp) {
    t = kCdfClamp;
    e.clamped = true;
  } else if (t > 1.0 - kCdfClamp) {
    t = 1.0 - kCdfClamp;
    e.clamped = true;
  }
  e.t = t;
  e.z = std::log(t) - std::log1p(-t);
  e.log_deriv = -std::log(t) - std::log1p(-t) + log_mix;
  return e;
}

FlowEval FlowCache::grad(double y, double* dz, double* dlog_deriv) const {
  check_input(y);
  const int k = components();
  thread_local std::vector<double> scratch;
  scratch.resize(static_cast<std::size_t>(3 * k));
  double* u = scratch.data();
  double* phi = u + k;
  double* log_dens = phi + k;  // log N(y; mu_j, sigma_j), weight excluded

  double t_raw = 0.0;
  double lse_max = kNegInf, lse_sum = 0.0;
  for (int j = 0; j < k; ++j) {
    u[j] = (y - mu_[j]) / sigma_[j];
    phi[j] = norm_cdf(u[j]);
    t_raw += w_[j] * phi[j];
    log_dens[j] = -0.5 * u[j] * u[j] - kLogSqrt2Pi - log_sigma_[j];
    const double a = log_w_[j] + log_dens[j];
    if (a == kNegInf) continue;
    if (lse_sum == 0.0) {
      lse_max = a;
      lse_sum = 1.0;
    } else if (a <= lse_max) {
      lse_sum += std::exp(a - lse_max);
    } else {
      lse_sum = lse_sum * std::exp(lse_max - a) + 1.0;
      lse_max = a;
    }
  }
  const double log_mix = lse_sum == 0.0 ? kNegInf : lse_max + std::log(lse_sum);

  FlowEval e;
  double t = t_raw;
  if (t < kCdfClamp) {
    t = kCdfClamp;
    e.clamped = true;
  } else if (t > 1.0 - kCdfClamp) {
    t = 1.0 - kCdfClamp;
    e.clamped = true;
  }
  e.t = t;
  e.z = std::log(t) - std::log1p(-t);
  e.log_deriv = -std::log(t) - std::log1p(-t) + log_mix;

  // In the clamped region t is constant, so the t-dependent terms are flat.
  const double tt = t * (1.0 - t);
  const double dz_dt = e.clamped ? 0.0 : 1.0 / tt;
  const double dld_dt = e.clamped ? 0.0 : (2.0 * t - 1.0) / tt;

  // Partials w.r.t. effective weights first; the softmax chain follows.
  double wsum_z = 0.0, wsum_ld = 0.0;
  for (int j = 0; j < k; ++j) {
    const double dens = std::exp(log_dens[j]);
    const double resp = log_mix == kNegInf ? 0.0 : std::exp(log_w_[j] + log_dens[j] - log_mix);
    const double dens_over_mix = log_mix == kNegInf ? 0.0 : std::exp(log_dens[j] - log_mix);

    const double dz_dw = dz_dt * phi[j];
    const double dld_dw = dld_dt * phi[j] + dens_over_mix;
    dz[j] = dz_dw;
    dlog_deriv[j] = dld_dw;
    wsum_z += w_[j] * dz_dw;
    wsum_ld += w_[j] * dld_dw;

    const double dt_dmu = -w_[j] * dens;
    dz[k + j] = dz_dt * dt_dmu;
    dlog_deriv[k + j] = dld_dt * dt_dmu + resp * u[j] / sigma_[j];

    const double dt_dsigma = -w_[j] * dens * u[j];
    const double dld_dsigma = dld_dt * dt_dsigma + resp * (u[j] * u[j] - 1.0) / sigma_[j];
    const double sigma_chain = sigma_[j] - kScaleFloor;  // d sigma / d raw_scale
    dz[2 * k + j] = dz_dt * dt_dsigma * sigma_chain;
    dlog_deriv[2 * k + j] = dld_dsigma * sigma_chain;
  }
  for (int j = 0; j < k; ++j) {
    dz[j] = w_[j] * (dz[j] - wsum_z);
    dlog_deriv[j] = w_[j] * (dlog_deriv[j] - wsum_ld);
  }
  return e;
}

double flow_forward(const CdfFlowParams& p, double y) { return FlowCache(p).eval(y).z; }

double flow_log_deriv(const CdfFlowParams& p, double y) {
  return FlowCache(p).eval(y).log_deriv;
}

double flow_inverse(const CdfFlowParams& p, double z, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("flow_inverse: tol must be positive");
  }
  if (!std::isfinite(z)) throw std::domain_error("flow_inverse: non-finite target");
  const FlowCache cache(p);

  const double center = cache.means().mean();
  constexpr double kRange = 1e6;
  double lo = center - 1.0, hi = center + 1.0;
  double f_lo = cache.eval(lo).z - z;
  double f_hi = cache.eval(hi).z - z;
  for (double step = 1.0; f_lo > 0.0; step *= 2.0) {
    lo -= step;
    if (std::abs(lo) > kRange) {
      throw std::runtime_error("flow_inverse: no root within |y| <= 1e6");
    }
    f_lo = cache.eval(lo).z - z;
  }
  for (double step = 1.0; f_hi < 0.0; step *= 2.0) {
    hi += step;
    if (std::abs(hi) > kRange) {
      throw std::runtime_error("flow_inverse: no root within |y| <= 1e6");
    }
    f_hi = cache.eval(hi).z - z;
  }

  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f_mid = cache.eval(mid).z - z;
    if (std::abs(f_mid) <= tol) return mid;
    // Plateau guard: clamped tails are flat in z, stop once the bracket
    // cannot shrink meaningfully.
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) return mid;
    if (f_mid > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return mid;
}

}  // namespace cafpono
