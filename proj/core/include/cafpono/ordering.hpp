#pragma once

#include <cstdint>
#include <vector>

#include "cafpono/dataset.hpp"
#include "cafpono/graph.hpp"
#include "cafpono/hsic.hpp"
#include "cafpono/pnl.hpp"

namespace cafpono {

// A causal ordering held sink-first (the order nodes were peeled off).
struct CausalOrdering {
  std::vector<int> sink_first;

  std::vector<int> root_first() const {
    return {sink_first.rbegin(), sink_first.rend()};
  }
};

// How plausibly node i is a sink among the active set: fit i on the other
// active variables over the 6:4 split, return minus the largest holdout
// HSIC between the recovered noise and any other active variable. Higher
// means more sink-like. The fit seed is derived from (cfg.seed, round, i)
// where round = dim - |active|, so every fit across the elimination has its
// own stream.
double sink_score(const Dataset& data, int node, const std::vector<int>& active,
                  const FitConfig& cfg, const HsicConfig& hsic_cfg = {});

struct OrderingResult {
  CausalOrdering ordering;
  int fits_run = 0;
};

// Iteratively peels off the best sink; d(d+1)/2 - 1 fits in total for d
// variables (the last remaining node needs none). Score ties break toward
// the smaller node index. Columns are standardized internally; a constant
// column is an error.
OrderingResult causal_order(const Dataset& data, const FitConfig& cfg,
                            const HsicConfig& hsic_cfg = {}, int jobs = 1);

struct PruneConfig {
  double alpha = 0.001;
  int n_perm = 1999;
  std::uint64_t seed = 0;
  FitConfig regressor;
  HsicConfig hsic;

  PruneConfig() {
    regressor.hidden_dim = 32;
    regressor.max_epochs = 300;
  }
  void validate() const;
};

// Keeps edge i -> j (i before j in the order) iff the conditional
// independence test of (X_i, X_j) given the other predecessors of j rejects
// at alpha. Tests are seeded per (i, j) and independent of jobs.
AdjacencyMatrix prune(const Dataset& data, const CausalOrdering& ordering,
                      const PruneConfig& cfg, int jobs = 1);

struct DiscoveryResult {
  CausalOrdering ordering;
  AdjacencyMatrix graph;
  int fits_run = 0;
};

DiscoveryResult discover(const Dataset& data, const FitConfig& cfg,
                         const PruneConfig& prune_cfg, const HsicConfig& hsic_cfg = {},
                         int jobs = 1);

}  // namespace cafpono
