#include "cafpono/benchmark_suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "cafpono/parallel.hpp"
#include "cafpono/synth.hpp"

namespace cafpono {
namespace {

NoiseKind suite_noise(const std::string& suite) {
  if (suite == "simple-pnl-gaussian") return NoiseKind::Gaussian;
  if (suite == "simple-pnl-laplace") return NoiseKind::Laplace;
  if (suite == "simple-pnl-uniform") return NoiseKind::Uniform;
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

void finish(SuiteResult& result) {
  std::vector<PairLabel> labels;
  std::vector<double> weights;
  labels.reserve(result.pairs.size());
  for (const auto& p : result.pairs) {
    labels.push_back({p.score_xy - p.score_yx, p.truth});
    weights.push_back(p.weight);
  }
  try {
    result.auc = auc_bidirectional(labels);
  } catch (const std::invalid_argument&) {
    // Single-class pair collections have no ranking AUC.
    result.auc = std::numeric_limits<double>::quiet_NaN();
  }
  result.acc = accuracy(labels);
  result.weighted_acc = accuracy(labels, weights);
}

}  // namespace

bool is_known_suite(const std::string& suite) {
  return suite == "gp-pnl" || suite == "simple-pnl-gaussian" ||
         suite == "simple-pnl-laplace" || suite == "simple-pnl-uniform";
}

SuiteResult run_synthetic_suite(const std::string& suite, int n_pairs, int n,
                                const FitConfig& cfg, std::uint64_t seed, int jobs) {
  if (!is_known_suite(suite)) throw std::invalid_argument("unknown suite '" + suite + "'");
  if (n_pairs < 2) throw std::invalid_argument("benchmark: need at least 2 pairs");
  const bool gp = suite == "gp-pnl";

  // Every generated pair is causal x -> y; presenting a seeded half of them
  // swapped gives the scorer both classes to separate.
  std::vector<std::uint8_t> swap(static_cast<std::size_t>(n_pairs), 0);
  for (int i = 0; i < n_pairs / 2; ++i) swap[static_cast<std::size_t>(i)] = 1;
  {
    Rng rng(mix_seed(seed, 777));
    rng.shuffle(swap);
  }

  SuiteResult result;
  result.pairs.resize(static_cast<std::size_t>(n_pairs));
  parallel_for(n_pairs, jobs, [&](int idx) {
    const std::uint64_t pair_seed = mix_seed(seed, 1, static_cast<std::uint64_t>(idx));
    GeneratedPair gen;
    if (gp) {
      gen = gen_gp_pnl(n, pair_seed);
    } else {
      PairSpec spec;
      spec.noise = suite_noise(suite);
      Rng menu(mix_seed(pair_seed, 2));
      const PairSpec menu_pick = sample_pair_spec(menu);
      spec.outer = menu_pick.outer;
      spec.inner = menu_pick.inner;
      gen = gen_simple_pnl(n, spec, pair_seed);
    }

    SuiteOutcome& out = result.pairs[static_cast<std::size_t>(idx)];
    const bool flipped = swap[static_cast<std::size_t>(idx)] != 0;
    const Eigen::VectorXd& a = flipped ? gen.y : gen.x;
    const Eigen::VectorXd& b = flipped ? gen.x : gen.y;

    FitConfig pair_cfg = cfg;
    pair_cfg.seed = mix_seed(seed, 3, static_cast<std::uint64_t>(idx));
    const PairDecision d = infer_direction(a, b, pair_cfg);

    char name[16];
    std::snprintf(name, sizeof name, "pair%04d", idx);
    out.name = name;
    out.score_xy = d.score_xy;
    out.score_yx = d.score_yx;
    out.direction = d.direction;
    out.truth = flipped ? -1 : 1;
  });

  finish(result);
  return result;
}

SuiteResult run_pair_list(const std::vector<CauseEffectPair>& pairs, const FitConfig& cfg,
                          std::uint64_t seed, int jobs) {
  if (pairs.size() < 2) throw std::invalid_argument("benchmark: need at least 2 pairs");

  SuiteResult result;
  result.pairs.resize(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), jobs, [&](int idx) {
    const CauseEffectPair& p = pairs[static_cast<std::size_t>(idx)];
    FitConfig pair_cfg = cfg;
    pair_cfg.seed = mix_seed(seed, 3, static_cast<std::uint64_t>(idx));
    const PairDecision d = infer_direction(p.x, p.y, pair_cfg);

    SuiteOutcome& out = result.pairs[static_cast<std::size_t>(idx)];
    out.name = p.name;
    out.score_xy = d.score_xy;
    out.score_yx = d.score_yx;
    out.direction = d.direction;
    out.truth = p.truth;
    out.weight = p.weight;
  });

  finish(result);
  return result;
}

}  // namespace cafpono
