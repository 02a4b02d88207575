#include "cafpono/bivariate.hpp"

#include <stdexcept>

#include "cafpono/stats.hpp"

namespace cafpono {

DirectionScore direction_score(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               const FitConfig& cfg, const HsicConfig& hsic_cfg) {
  cfg.validate();
  hsic_cfg.validate();
  if (x.size() != y.size()) throw std::invalid_argument("direction_score: length mismatch");
  if (x.size() < 80) throw std::invalid_argument("direction_score: need at least 80 samples");

  const HoldoutNoise hn = holdout_noise(x, y, cfg);
  Eigen::VectorXd x_test(static_cast<Eigen::Index>(hn.test_rows.size()));
  for (std::size_t i = 0; i < hn.test_rows.size(); ++i) {
    x_test[static_cast<Eigen::Index>(i)] = x[hn.test_rows[i]];
  }

  DirectionScore s;
  s.test_hsic = hsic(hn.noise, x_test, hsic_cfg);
  s.score = -s.test_hsic;
  s.val_nll = hn.fit.val_nll;
  s.epochs_run = hn.fit.epochs_run;
  s.degenerate = variance(hn.noise) < 1e-10;
  return s;
}

PairDecision infer_direction(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& y,
                             const FitConfig& cfg, const HsicConfig& hsic_cfg) {
  const Eigen::VectorXd xs = standardize(x);
  const Eigen::VectorXd ys = standardize(y);

  PairDecision d;
  d.forward = direction_score(xs, ys, cfg, hsic_cfg);
  d.backward = direction_score(ys, xs, cfg, hsic_cfg);
  d.score_xy = d.forward.score;
  d.score_yx = d.backward.score;
  d.tie = d.score_xy == d.score_yx;
  d.direction = d.score_xy >= d.score_yx ? 1 : -1;
  d.degenerate = d.forward.degenerate || d.backward.degenerate;
  return d;
}

}  // namespace cafpono
