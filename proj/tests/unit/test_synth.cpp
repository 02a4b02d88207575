#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cafpono/stats.hpp"
#include "cafpono/synth.hpp"

using namespace cafpono;

TEST_CASE("simple pnl pairs are finite, seeded, and x is standard normal-ish") {
  PairSpec spec;
  spec.outer = OuterKind::Log;  // restricted domain exercises the shift
  spec.inner = InnerKind::Square;
  spec.noise = NoiseKind::Laplace;

  const GeneratedPair a = gen_simple_pnl(500, spec, 42);
  const GeneratedPair b = gen_simple_pnl(500, spec, 42);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.x.size() == 500);
  CHECK(a.y.allFinite());
  CHECK(std::abs(mean(a.x)) < 0.2);
  CHECK(std::abs(variance(a.x) - 1.0) < 0.3);

  const GeneratedPair c = gen_simple_pnl(500, spec, 43);
  CHECK(a.x != c.x);
}

TEST_CASE("every menu combination produces finite data") {
  for (int o = 0; o < 6; ++o) {
    for (int i = 0; i < 3; ++i) {
      for (int z = 0; z < 3; ++z) {
        PairSpec spec;
        spec.outer = static_cast<OuterKind>(o);
        spec.inner = static_cast<InnerKind>(i);
        spec.noise = static_cast<NoiseKind>(z);
        const GeneratedPair g = gen_simple_pnl(200, spec, 1234 + o * 100 + i * 10 + z);
        CHECK(g.x.allFinite());
        CHECK(g.y.allFinite());
      }
    }
  }
}

TEST_CASE("restricted-domain outer maps receive strictly positive arguments") {
  // y = log(v) finite for all rows implies every v was positive; same for 1/v
  // staying finite and sign-stable.
  PairSpec spec;
  spec.outer = OuterKind::Inverse;
  spec.inner = InnerKind::Absolute;
  spec.noise = NoiseKind::Gaussian;
  const GeneratedPair g = gen_simple_pnl(1000, spec, 7);
  CHECK(g.y.allFinite());
  CHECK(g.y.minCoeff() > 0.0);  // 1/v with v > 0
}

TEST_CASE("gen_simple_pnl argument validation") {
  CHECK_THROWS_AS(gen_simple_pnl(0, PairSpec{}, 1), std::invalid_argument);
}

TEST_CASE("random feature functions are smooth, bounded, and batch-consistent") {
  Rng rng(99);
  const RandomFeatureFn f = RandomFeatureFn::sample(2, 50, rng);
  Eigen::MatrixXd x(4, 2);
  x << 0.0, 0.0, 0.5, -0.3, 1.0, 1.0, -2.0, 0.7;
  const Eigen::VectorXd batch = f.map(x);
  for (int i = 0; i < 4; ++i) {
    CHECK(batch[i] == doctest::Approx(f(x.row(i))).epsilon(1e-12));
  }
  // Bounded by sqrt(2/M) * sum |coef|.
  const double bound = std::sqrt(2.0 / 50.0) * f.coef.cwiseAbs().sum();
  CHECK(batch.cwiseAbs().maxCoeff() <= bound);
  CHECK_THROWS_AS(RandomFeatureFn::sample(0, 50, rng), std::invalid_argument);
}

TEST_CASE("monotone sigmoid outer maps are strictly monotone") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const MonotoneSigmoid g = MonotoneSigmoid::sample(rng);
    CHECK(g.a >= 1.0);
    CHECK(g.a <= 3.0);
    CHECK(std::abs(g.b) >= 0.5);
    CHECK(std::abs(g.b) <= 2.0);
    double prev = g(-5.0);
    for (double v = -4.5; v <= 5.0; v += 0.5) {
      const double cur = g(v);
      if (g.b > 0) {
        CHECK(cur > prev);
      } else {
        CHECK(cur < prev);
      }
      prev = cur;
    }
  }
}

TEST_CASE("gp pairs are seeded and finite") {
  const GeneratedPair a = gen_gp_pnl(400, 11);
  const GeneratedPair b = gen_gp_pnl(400, 11);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.y.allFinite());
  CHECK(variance(a.y) > 0.0);
}

TEST_CASE("ER graphs are DAGs with the expected density") {
  int edges = 0;
  const int trials = 200;
  const int d = 6;
  for (int t = 0; t < trials; ++t) {
    const AdjacencyMatrix g = gen_er_graph(d, 1.0, static_cast<std::uint64_t>(t));
    CHECK(g.is_acyclic());
    edges += g.edge_count();
  }
  // p = min(1, 2/(d-1)) = 0.4, pairs = 15, expected edges = 6 per graph.
  const double mean_edges = static_cast<double>(edges) / trials;
  CHECK(mean_edges > 5.0);
  CHECK(mean_edges < 7.0);

  CHECK_THROWS_AS(gen_er_graph(1, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_er_graph(4, 0.0, 0), std::invalid_argument);
}

TEST_CASE("edge probability saturates at 1 for dense requests") {
  const AdjacencyMatrix g = gen_er_graph(4, 10.0, 3);
  // p = 1: every forward pair of the hidden permutation gets an edge.
  CHECK(g.edge_count() == 6);
  CHECK(g.is_acyclic());
}

TEST_CASE("multivariate samples follow the graph and are standardized") {
  AdjacencyMatrix g(3);
  g.set(0, 1, true);
  g.set(1, 2, true);
  const Dataset d = gen_multivariate(g, 600, 21);
  CHECK(d.n() == 600);
  CHECK(d.dim() == 3);
  CHECK(d.names[0] == "x0");
  CHECK(d.names[2] == "x2");
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(mean(d.col(j))) < 1e-10);
    CHECK(variance(d.col(j)) == doctest::Approx(1.0).epsilon(1e-10));
  }
  // Child depends on parent.
  Eigen::VectorXd x0 = d.col(0), x1 = d.col(1);
  const double corr = (x0.array() * x1.array()).mean();
  CHECK(std::abs(corr) > 0.05);

  const Dataset again = gen_multivariate(g, 600, 21);
  CHECK(d.values == again.values);

  AdjacencyMatrix cyclic(2);
  cyclic.set(0, 1, true);
  cyclic.set(1, 0, true);
  CHECK_THROWS_AS(gen_multivariate(cyclic, 100, 0), std::invalid_argument);
}

TEST_CASE("location-scale with unit scale is exactly the additive model") {
  const LocalPieces add = gen_local_pieces(LocalKind::Additive, 300, 9);
  CHECK(add.scale == Eigen::VectorXd::Ones(300));
  CHECK(add.compose() == add.f_of_x + add.eps);

  LocalPieces ls = gen_local_pieces(LocalKind::LocationScale, 300, 9);
  CHECK(ls.scale.minCoeff() > 0.0);
  ls.scale = Eigen::VectorXd::Ones(300);
  CHECK(ls.compose() == ls.f_of_x + ls.eps);

  const GeneratedPair pair = gen_an_ls(LocalKind::LocationScale, 300, 9);
  CHECK(pair.y.allFinite());
}
