// Micro-benchmarks for the numeric hot paths: flow evaluation and gradients,
// the HSIC statistic, full likelihood+gradient passes, and a short training
// run. Useful for catching performance regressions, not for correctness.

#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <vector>

#include "cafpono/cdf_flow.hpp"
#include "cafpono/hsic.hpp"
#include "cafpono/pnl.hpp"
#include "cafpono/rng.hpp"
#include "cafpono/synth.hpp"

namespace {

using namespace cafpono;

CdfFlowParams random_flow(int k, std::uint64_t seed) {
  Rng rng(seed);
  CdfFlowParams p = CdfFlowParams::initial(k);
  for (int j = 0; j < k; ++j) {
    p.raw_weights[j] += 0.3 * rng.normal();
    p.means[j] += 0.3 * rng.normal();
    p.raw_scales[j] += 0.3 * rng.normal();
  }
  return p;
}

void bm_flow_eval(benchmark::State& state) {
  const FlowCache cache(random_flow(10, 1));
  Rng rng(2);
  std::vector<double> ys(1024);
  for (double& y : ys) y = rng.normal();

  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cache.eval(ys[i++ & 1023]));
  }
}
BENCHMARK(bm_flow_eval);

void bm_flow_grad(benchmark::State& state) {
  const FlowCache cache(random_flow(10, 3));
  Rng rng(4);
  std::vector<double> ys(1024);
  for (double& y : ys) y = rng.normal();
  std::vector<double> dz(30), dld(30);

  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cache.grad(ys[i++ & 1023], dz.data(), dld.data()));
  }
}
BENCHMARK(bm_flow_grad);

void bm_hsic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  Eigen::VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = rng.normal();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsic(x, y));
  }
}
BENCHMARK(bm_hsic)->Arg(128)->Arg(512)->Arg(1024);

void bm_nll_grad(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GeneratedPair g = gen_gp_pnl(n, 6);
  Eigen::MatrixXd x(n, 1);
  x.col(0) = g.x;

  PnlModel m;
  m.flow = CdfFlowParams::initial(10);
  Rng rng(7);
  m.net = InnerNet::glorot(1, 64, rng);
  Eigen::VectorXd grad(m.param_count());

  for (auto _ : state) {
    benchmark::DoNotOptimize(nll_loss_grad(m, x, g.y, grad));
  }
}
BENCHMARK(bm_nll_grad)->Arg(128)->Arg(512);

void bm_fit_short(benchmark::State& state) {
  const GeneratedPair g = gen_gp_pnl(300, 8);
  Eigen::MatrixXd x(300, 1);
  x.col(0) = g.x;

  FitConfig cfg;
  cfg.hidden_dim = 16;
  cfg.components = 6;
  cfg.max_epochs = 30;
  cfg.patience = 30;
  cfg.seed = 9;

  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(x, g.y, cfg));
  }
}
BENCHMARK(bm_fit_short)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
