#include <doctest.h>

#include <stdexcept>

#include "cafpono/bivariate.hpp"
#include "cafpono/synth.hpp"

using namespace cafpono;

namespace {

FitConfig quick_config(std::uint64_t seed) {
  FitConfig cfg;
  cfg.components = 6;
  cfg.hidden_dim = 16;
  cfg.max_epochs = 150;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("swapping the pair swaps the scores exactly") {
  const GeneratedPair g = gen_gp_pnl(300, 3131);
  const FitConfig cfg = quick_config(17);

  const PairDecision fwd = infer_direction(g.x, g.y, cfg);
  const PairDecision rev = infer_direction(g.y, g.x, cfg);
  CHECK(fwd.score_xy == rev.score_yx);
  CHECK(fwd.score_yx == rev.score_xy);
  CHECK(fwd.direction == -rev.direction);
}

TEST_CASE("inference is deterministic given the config") {
  PairSpec spec;
  spec.outer = OuterKind::Sigmoid;
  spec.inner = InnerKind::Square;
  const GeneratedPair g = gen_simple_pnl(240, spec, 5);
  const FitConfig cfg = quick_config(23);

  const PairDecision a = infer_direction(g.x, g.y, cfg);
  const PairDecision b = infer_direction(g.x, g.y, cfg);
  CHECK(a.direction == b.direction);
  CHECK(a.score_xy == b.score_xy);
  CHECK(a.score_yx == b.score_yx);
  CHECK(a.forward.val_nll == b.forward.val_nll);
  CHECK(a.forward.epochs_run == b.forward.epochs_run);
}

TEST_CASE("an identical pair is a tie, resolved as forward") {
  Rng rng(62);
  Eigen::VectorXd x(120);
  for (int i = 0; i < 120; ++i) x[i] = rng.normal();
  const PairDecision d = infer_direction(x, x, quick_config(1));
  CHECK(d.tie);
  CHECK(d.direction == 1);
  CHECK(d.score_xy == d.score_yx);
}

TEST_CASE("clear post-nonlinear pairs are oriented correctly") {
  PairSpec spec;
  spec.outer = OuterKind::Linear;
  spec.inner = InnerKind::Square;
  spec.noise = NoiseKind::Gaussian;

  int correct = 0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    const GeneratedPair g = gen_simple_pnl(400, spec, 9000 + static_cast<std::uint64_t>(t));
    FitConfig cfg;
    cfg.seed = 100 + static_cast<std::uint64_t>(t);
    const PairDecision d = infer_direction(g.x, g.y, cfg);
    if (d.direction == 1) ++correct;
  }
  CHECK(correct >= 8);
}

TEST_CASE("input validation: length, size, and constant columns") {
  const FitConfig cfg = quick_config(2);
  Eigen::VectorXd x = Eigen::VectorXd::Random(100);
  Eigen::VectorXd short_y = Eigen::VectorXd::Random(99);
  CHECK_THROWS_AS(infer_direction(x, short_y, cfg), std::invalid_argument);

  Eigen::VectorXd tiny = Eigen::VectorXd::Random(79);
  CHECK_THROWS_AS(infer_direction(tiny, tiny, cfg), std::invalid_argument);

  Eigen::VectorXd flat = Eigen::VectorXd::Constant(100, 2.0);
  CHECK_THROWS_AS(infer_direction(x, flat, cfg), std::invalid_argument);

  FitConfig bad = cfg;
  bad.batch_size = 0;
  CHECK_THROWS_AS(infer_direction(x, x, bad), std::invalid_argument);
}
