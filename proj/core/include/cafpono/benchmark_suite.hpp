#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cafpono/bivariate.hpp"
#include "cafpono/data_io.hpp"
#include "cafpono/metrics.hpp"

namespace cafpono {

struct SuiteOutcome {
  std::string name;
  double score_xy = 0.0;
  double score_yx = 0.0;
  int direction = 0;
  int truth = 0;
  double weight = 1.0;
};

struct SuiteResult {
  std::vector<SuiteOutcome> pairs;
  double auc = 0.0;
  double acc = 0.0;
  double weighted_acc = 0.0;
};

// Known synthetic suites: simple-pnl-gaussian, simple-pnl-laplace,
// simple-pnl-uniform, gp-pnl. Generates `n_pairs` cause-effect pairs of n
// samples each and scores both directions. Half the pairs (seeded choice)
// are presented flipped so that both truth classes occur; the decision
// statistic is score_xy - score_yx of the pair as presented. Work is split
// across `jobs` threads with per-pair seeds, so results do not depend on
// the thread count.
SuiteResult run_synthetic_suite(const std::string& suite, int n_pairs, int n,
                                const FitConfig& cfg, std::uint64_t seed, int jobs);

// Same scoring over pairs loaded from disk (read_pair_dir).
SuiteResult run_pair_list(const std::vector<CauseEffectPair>& pairs, const FitConfig& cfg,
                          std::uint64_t seed, int jobs);

bool is_known_suite(const std::string& suite);

}  // namespace cafpono
