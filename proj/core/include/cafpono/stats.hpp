#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace cafpono {

// Kahan-compensated sum; keeps mean/variance stable enough that
// standardizing twice is a no-op (see standardize below).
inline double compensated_sum(const Eigen::Ref<const Eigen::VectorXd>& v) {
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double t = v[i] - comp;
    const double s = sum + t;
    comp = (s - sum) - t;
    sum = s;
  }
  return sum;
}

inline double mean(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() == 0) throw std::invalid_argument("mean: empty vector");
  return compensated_sum(v) / static_cast<double>(v.size());
}

// Population variance (1/n).
inline double variance(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double m = mean(v);
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double d = v[i] - m;
    const double t = d * d - comp;
    const double s = sum + t;
    comp = (s - sum) - t;
    sum = s;
  }
  return sum / static_cast<double>(v.size());
}

// Zero mean, unit variance. Input that is already standardized to machine
// precision is returned unchanged, which makes the operation exactly
// idempotent; without the shortcut a second pass would still jitter the
// last bit or two.
inline Eigen::VectorXd standardize(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() < 2) throw std::invalid_argument("standardize: need at least 2 values");
  const double m = mean(v);
  const double sd = std::sqrt(variance(v));
  if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(m)) {
    throw std::invalid_argument("standardize: zero or non-finite variance");
  }
  if (std::abs(m) <= 1e-13 && std::abs(sd - 1.0) <= 1e-13) return v;
  return (v.array() - m) / sd;
}

}  // namespace cafpono
