#pragma once

#include <Eigen/Core>

#include "cafpono/hsic.hpp"
#include "cafpono/pnl.hpp"

namespace cafpono {

struct DirectionScore {
  double score = 0.0;      // -HSIC(recovered noise, candidate cause) on holdout
  double val_nll = 0.0;
  int epochs_run = 0;
  double test_hsic = 0.0;  // = -score
  bool degenerate = false; // holdout noise variance fell below 1e-10
};

// Score for "x causes y": fit y on x over the 6:4 split and measure how
// independent the holdout noise is from x. Depends only on (x, y, cfg), so
// calling it with arguments swapped yields exactly the score of the other
// direction.
DirectionScore direction_score(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               const FitConfig& cfg, const HsicConfig& hsic_cfg = {});

struct PairDecision {
  int direction = 0;  // +1: x -> y, -1: y -> x
  double score_xy = 0.0;
  double score_yx = 0.0;
  DirectionScore forward;   // x -> y details
  DirectionScore backward;  // y -> x details
  bool tie = false;         // exact score tie, resolved as +1
  bool degenerate = false;  // either fit produced near-constant noise
};

// Standardizes both variables, scores both directions, picks the larger
// score. Throws std::invalid_argument for constant input or n < 80.
PairDecision infer_direction(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& y,
                             const FitConfig& cfg, const HsicConfig& hsic_cfg = {});

}  // namespace cafpono
