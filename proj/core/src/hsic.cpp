#include "cafpono/hsic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cafpono/rng.hpp"
#include "cafpono/stats.hpp"

namespace cafpono {
namespace {

Eigen::MatrixXd gaussian_gram(const Eigen::Ref<const Eigen::VectorXd>& v, double bandwidth) {
  const Eigen::Index n = v.size();
  const double scale = -0.5 / (bandwidth * bandwidth);
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = v[i] - v[j];
      k(i, j) = k(j, i) = std::exp(scale * d * d);
    }
  }
  return k;
}

// K -> H K H with H = I - 11'/n.
void center(Eigen::MatrixXd& k) {
  const Eigen::VectorXd row_mean = k.rowwise().mean();
  const double grand = row_mean.mean();
  k.colwise() -= row_mean;
  k.rowwise() -= row_mean.transpose();
  k.array() += grand;
}

void check_pair(const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("hsic: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("hsic: need at least 2 samples");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("hsic: non-finite values");
}

bool is_constant(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return variance(v) < 1e-24;
}

}  // namespace

void HsicConfig::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("HsicConfig: bandwidth must be positive");
  }
}

double hsic(const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y, const HsicConfig& cfg) {
  cfg.validate();
  check_pair(x, y);
  const Eigen::Index n = x.size();
  Eigen::MatrixXd k = gaussian_gram(x, cfg.bandwidth);
  const Eigen::MatrixXd l = gaussian_gram(y, cfg.bandwidth);
  center(k);
  // tr(K H L H) = sum((H K H) .* L) because both grams are symmetric.
  return (k.array() * l.array()).sum() / static_cast<double>(n * n);
}

double hsic_permutation_pvalue(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               int n_perm, std::uint64_t seed, const HsicConfig& cfg) {
  cfg.validate();
  check_pair(x, y);
  if (n_perm < 1) throw std::invalid_argument("hsic: n_perm must be positive");

  const Eigen::Index n = x.size();
  const double inv_n2 = 1.0 / static_cast<double>(n * n);
  Eigen::MatrixXd a = gaussian_gram(x, cfg.bandwidth);
  const Eigen::MatrixXd l = gaussian_gram(y, cfg.bandwidth);
  center(a);
  const double observed = (a.array() * l.array()).sum() * inv_n2;

  // Permuting one side's sample labels; re-indexing the pre-centered gram
  // is equivalent and avoids recomputing kernels (H commutes with any
  // permutation matrix).
  Rng rng(seed);
  int at_least = 0;
  std::vector<int> pi(static_cast<std::size_t>(n));
  for (int r = 0; r < n_perm; ++r) {
    for (Eigen::Index i = 0; i < n; ++i) pi[static_cast<std::size_t>(i)] = static_cast<int>(i);
    rng.shuffle(pi);
    double stat = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double* arow = a.data() + static_cast<std::ptrdiff_t>(pi[static_cast<std::size_t>(i)]) * n;
      const double* lrow = l.data() + static_cast<std::ptrdiff_t>(i) * n;
      for (Eigen::Index j = 0; j < n; ++j) {
        stat += arow[pi[static_cast<std::size_t>(j)]] * lrow[j];
      }
    }
    if (stat * inv_n2 >= observed) ++at_least;
  }
  return static_cast<double>(1 + at_least) / static_cast<double>(n_perm + 1);
}

void CitConfig::validate() const {
  if (n_perm < 1) throw std::invalid_argument("CitConfig: n_perm must be positive");
  regressor.validate();
  hsic.validate();
}

CitResult cond_indep_test(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y,
                          const Eigen::Ref<const Eigen::MatrixXd>& z,
                          double alpha, const CitConfig& cfg) {
  cfg.validate();
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw std::invalid_argument("cond_indep_test: alpha must lie in (0, 1]");
  }
  check_pair(x, y);
  if (z.cols() > 0 && z.rows() != x.size()) {
    throw std::invalid_argument("cond_indep_test: z row count mismatch");
  }
  if (z.size() > 0 && !z.allFinite()) {
    throw std::invalid_argument("cond_indep_test: non-finite values");
  }

  if (is_constant(x) || is_constant(y)) return {1.0, true};

  std::vector<int> kept;
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    if (!is_constant(z.col(c))) kept.push_back(static_cast<int>(c));
  }

  Eigen::VectorXd rx = standardize(x);
  Eigen::VectorXd ry = standardize(y);
  if (!kept.empty()) {
    Eigen::MatrixXd zs(z.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) {
      zs.col(static_cast<Eigen::Index>(c)) = standardize(z.col(kept[c]));
    }
    FitConfig rc = cfg.regressor;
    rc.seed = mix_seed(cfg.seed, 21);
    rx = residuals(fit_regressor(zs, rx, rc).net, zs, rx);
    rc.seed = mix_seed(cfg.seed, 22);
    ry = residuals(fit_regressor(zs, ry, rc).net, zs, ry);
  }

  CitResult out;
  out.p_value = hsic_permutation_pvalue(rx, ry, cfg.n_perm, mix_seed(cfg.seed, 23), cfg.hsic);
  out.independent = out.p_value >= alpha;
  return out;
}

}  // namespace cafpono
