#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "cafpono/pnl.hpp"

namespace cafpono {

struct HsicConfig {
  double bandwidth = 1.0;  // Gaussian kernel width, shared by both variables
  void validate() const;
};

// Biased V-statistic HSIC_n = tr(K H L H) / n^2 with Gaussian kernels.
// Zero (up to roundoff) iff either kernel matrix is constant; always >= -eps.
double hsic(const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y,
            const HsicConfig& cfg = {});

// Permutation p-value for independence: p = (1 + #{perm stats >= observed})
// / (n_perm + 1). Identical seeds give identical p-values.
double hsic_permutation_pvalue(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               int n_perm, std::uint64_t seed,
                               const HsicConfig& cfg = {});

struct CitConfig {
  int n_perm = 1999;
  std::uint64_t seed = 0;
  FitConfig regressor;  // conditional-mean fits for the residual step
  HsicConfig hsic;

  CitConfig() {
    regressor.hidden_dim = 32;
    regressor.max_epochs = 300;
  }
  void validate() const;
};

struct CitResult {
  double p_value = 1.0;
  bool independent = true;
};

// Tests x _||_ y | z by regressing each of x and y on z, then applying the
// HSIC permutation test to the residual pair. With no conditioning columns
// it reduces to the marginal HSIC test. Constant x or y (or x, y constant
// after standardization) is treated as independent with p = 1. Constant z
// columns are dropped before regressing.
CitResult cond_indep_test(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y,
                          const Eigen::Ref<const Eigen::MatrixXd>& z,
                          double alpha, const CitConfig& cfg = {});

}  // namespace cafpono
