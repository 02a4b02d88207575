#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "cafpono/cdf_flow.hpp"
#include "cafpono/rng.hpp"

namespace test_util {

inline bool approx_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Well-conditioned random flow parameters: means within the standardized
// data range, scales in [0.4, 2.5], weight ratios bounded by e^4.
inline cafpono::CdfFlowParams sample_flow_params(cafpono::Rng& rng, int k) {
  cafpono::CdfFlowParams p;
  p.raw_weights.resize(k);
  p.means.resize(k);
  p.raw_scales.resize(k);
  for (int j = 0; j < k; ++j) {
    p.raw_weights[j] = rng.uniform(-2.0, 2.0);
    p.means[j] = rng.uniform(-2.0, 2.0);
    p.raw_scales[j] = rng.uniform(std::log(0.4), std::log(2.5));
  }
  return p;
}

// A point inside the mixture's effective support (at most 3 scales from a
// component mean), where the CDF is far from the clamp bounds.
inline double sample_support_y(cafpono::Rng& rng, const cafpono::CdfFlowParams& p) {
  const int j = rng.below(p.components());
  const Eigen::VectorXd sigma = p.scales();
  return p.means[j] + sigma[j] * rng.uniform(-3.0, 3.0);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 gen{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace test_util
