#include "cafpono/ordering.hpp"

#include <algorithm>
#include <stdexcept>

#include "cafpono/parallel.hpp"
#include "cafpono/stats.hpp"

namespace cafpono {
namespace {

void check_active(const Dataset& data, int node, const std::vector<int>& active) {
  if (active.size() < 2) throw std::invalid_argument("sink_score: need at least 2 active nodes");
  for (const int a : active) {
    if (a < 0 || a >= data.dim()) throw std::invalid_argument("sink_score: node out of range");
  }
  if (std::find(active.begin(), active.end(), node) == active.end()) {
    throw std::invalid_argument("sink_score: node not in active set");
  }
}

Dataset standardized_checked(const Dataset& data) {
  data.validate();
  try {
    return standardized(data);
  } catch (const std::invalid_argument&) {
    for (int j = 0; j < data.dim(); ++j) {
      if (variance(data.col(j)) <= 0.0) {
        throw std::invalid_argument("column '" + data.names[static_cast<std::size_t>(j)] +
                                    "' is constant");
      }
    }
    throw;
  }
}

}  // namespace

double sink_score(const Dataset& data, int node, const std::vector<int>& active,
                  const FitConfig& cfg, const HsicConfig& hsic_cfg) {
  cfg.validate();
  hsic_cfg.validate();
  data.validate();
  check_active(data, node, active);

  std::vector<int> rest;
  for (const int a : active) {
    if (a != node) rest.push_back(a);
  }

  Eigen::MatrixXd x(data.n(), static_cast<Eigen::Index>(rest.size()));
  for (std::size_t c = 0; c < rest.size(); ++c) {
    x.col(static_cast<Eigen::Index>(c)) = standardize(data.col(rest[c]));
  }
  const Eigen::VectorXd y = standardize(data.col(node));

  FitConfig local = cfg;
  const int round = data.dim() - static_cast<int>(active.size());
  local.seed = mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(round),
                        static_cast<std::uint64_t>(node));

  const HoldoutNoise hn = holdout_noise(x, y, local);
  double worst = 0.0;
  for (std::size_t c = 0; c < rest.size(); ++c) {
    Eigen::VectorXd col(static_cast<Eigen::Index>(hn.test_rows.size()));
    for (std::size_t i = 0; i < hn.test_rows.size(); ++i) {
      col[static_cast<Eigen::Index>(i)] = x(hn.test_rows[i], static_cast<Eigen::Index>(c));
    }
    worst = std::max(worst, hsic(hn.noise, col, hsic_cfg));
  }
  return -worst;
}

OrderingResult causal_order(const Dataset& data, const FitConfig& cfg,
                            const HsicConfig& hsic_cfg, int jobs) {
  cfg.validate();
  hsic_cfg.validate();
  const Dataset ds = standardized_checked(data);
  const int d = ds.dim();
  if (d < 2) throw std::invalid_argument("causal_order: need at least 2 columns");

  std::vector<int> active(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) active[static_cast<std::size_t>(i)] = i;

  OrderingResult result;
  while (active.size() > 1) {
    std::vector<double> scores(active.size());
    parallel_for(static_cast<int>(active.size()), jobs, [&](int idx) {
      scores[static_cast<std::size_t>(idx)] =
          sink_score(ds, active[static_cast<std::size_t>(idx)], active, cfg, hsic_cfg);
    });
    result.fits_run += static_cast<int>(active.size());

    std::size_t best = 0;
    for (std::size_t i = 1; i < active.size(); ++i) {
      // Strict > keeps ties on the smaller node index.
      if (scores[i] > scores[best]) best = i;
    }
    result.ordering.sink_first.push_back(active[best]);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best));
  }
  result.ordering.sink_first.push_back(active.front());
  return result;
}

void PruneConfig::validate() const {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw std::invalid_argument("PruneConfig: alpha must lie in (0, 1]");
  }
  if (n_perm < 1) throw std::invalid_argument("PruneConfig: n_perm must be positive");
  regressor.validate();
  hsic.validate();
}

AdjacencyMatrix prune(const Dataset& data, const CausalOrdering& ordering,
                      const PruneConfig& cfg, int jobs) {
  cfg.validate();
  const Dataset ds = standardized_checked(data);
  const int d = ds.dim();

  std::vector<int> order = ordering.root_first();
  if (static_cast<int>(order.size()) != d) {
    throw std::invalid_argument("prune: ordering length does not match data");
  }
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (const int v : order) {
    if (v < 0 || v >= d || seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("prune: ordering is not a permutation of the columns");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }

  struct Candidate {
    int i, j;
    std::vector<int> given;
  };
  std::vector<Candidate> cands;
  for (int qj = 1; qj < d; ++qj) {
    for (int qi = 0; qi < qj; ++qi) {
      Candidate c;
      c.i = order[static_cast<std::size_t>(qi)];
      c.j = order[static_cast<std::size_t>(qj)];
      for (int q = 0; q < qj; ++q) {
        if (q != qi) c.given.push_back(order[static_cast<std::size_t>(q)]);
      }
      cands.push_back(std::move(c));
    }
  }

  std::vector<std::uint8_t> keep(cands.size(), 0);
  parallel_for(static_cast<int>(cands.size()), jobs, [&](int idx) {
    const Candidate& c = cands[static_cast<std::size_t>(idx)];
    Eigen::MatrixXd z(ds.n(), static_cast<Eigen::Index>(c.given.size()));
    for (std::size_t g = 0; g < c.given.size(); ++g) {
      z.col(static_cast<Eigen::Index>(g)) = ds.col(c.given[g]);
    }
    CitConfig cit;
    cit.n_perm = cfg.n_perm;
    cit.regressor = cfg.regressor;
    cit.hsic = cfg.hsic;
    cit.seed = mix_seed(cfg.seed, 500 + static_cast<std::uint64_t>(c.i),
                        static_cast<std::uint64_t>(c.j));
    const CitResult r = cond_indep_test(ds.col(c.i), ds.col(c.j), z, cfg.alpha, cit);
    keep[static_cast<std::size_t>(idx)] = r.independent ? 0 : 1;
  });

  AdjacencyMatrix graph(d);
  for (std::size_t idx = 0; idx < cands.size(); ++idx) {
    if (keep[idx]) graph.set(cands[idx].i, cands[idx].j, true);
  }
  return graph;
}

DiscoveryResult discover(const Dataset& data, const FitConfig& cfg,
                         const PruneConfig& prune_cfg, const HsicConfig& hsic_cfg,
                         int jobs) {
  OrderingResult ord = causal_order(data, cfg, hsic_cfg, jobs);
  DiscoveryResult out;
  out.graph = prune(data, ord.ordering, prune_cfg, jobs);
  out.ordering = std::move(ord.ordering);
  out.fits_run = ord.fits_run;
  return out;
}

}  // namespace cafpono
