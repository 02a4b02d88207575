#pragma once

#include <Eigen/Core>

namespace cafpono {

// Additive floor on mixture scales: sigma_j = exp(raw_scales_j) + kScaleFloor.
inline constexpr double kScaleFloor = 1e-3;
// The mixture CDF is clamped to [kCdfClamp, 1 - kCdfClamp] before the logit
// so deep-tail inputs stay finite.
inline constexpr double kCdfClamp = 1e-12;

// Monotone scalar map z = logit(sum_j w_j Phi(y; mu_j, sigma_j)) built from a
// Gaussian-mixture CDF. Weights live on the softmax of raw_weights, scales on
// exp(raw_scales) + floor, so every real-valued parameter vector is valid and
// the map is strictly increasing by construction.
struct CdfFlowParams {
  Eigen::VectorXd raw_weights;
  Eigen::VectorXd means;
  Eigen::VectorXd raw_scales;

  int components() const { return static_cast<int>(means.size()); }
  Eigen::VectorXd weights() const;
  Eigen::VectorXd scales() const;
  void validate() const;

  // Uniform weights, means evenly spaced on [-2, 2] (a single component sits
  // at 0), unit-ish scales. Covers standardized data at initialization.
  static CdfFlowParams initial(int k);
  // Raw parameters recovered from mixture weights/means/scales. Weights must
  // be positive, scales strictly above kScaleFloor.
  static CdfFlowParams from_moments(const Eigen::VectorXd& w,
                                    const Eigen::VectorXd& mu,
                                    const Eigen::VectorXd& sigma);
};

struct FlowEval {
  double t = 0.0;         // clamped mixture CDF at y
  double z = 0.0;         // logit(t)
  double log_deriv = 0.0; // ln dz/dy, computed in log space
  bool clamped = false;   // t hit a clamp bound; z and the z-gradient are flat there
};

// Precomputed per-parameter quantities; reuse one cache for many y when the
// parameters are fixed (training batches, inversion).
class FlowCache {
 public:
  explicit FlowCache(const CdfFlowParams& p);

  FlowEval eval(double y) const;
  // Gradients of z and log_deriv w.r.t. the raw parameter vector, layout
  // [raw_weights | means | raw_scales], each block of length k. Buffers must
  // hold 3k doubles.
  FlowEval grad(double y, double* dz, double* dlog_deriv) const;

  int components() const { return static_cast<int>(mu_.size()); }
  const Eigen::VectorXd& weights() const { return w_; }
  const Eigen::VectorXd& means() const { return mu_; }
  const Eigen::VectorXd& scales() const { return sigma_; }

 private:
  Eigen::VectorXd w_, log_w_, mu_, sigma_, log_sigma_;
};

double flow_forward(const CdfFlowParams& p, double y);
double flow_log_deriv(const CdfFlowParams& p, double y);

// Solves flow_forward(y) = z by bracket expansion plus bisection. Throws
// std::runtime_error if no root is bracketed within |y| <= 1e6, which only
// happens when z lies in the clamp-saturated tails.
double flow_inverse(const CdfFlowParams& p, double z, double tol = 1e-10);

}  // namespace cafpono
