#include "cafpono/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cafpono/stats.hpp"

namespace cafpono {
namespace {

double apply_inner(InnerKind kind, double v) {
  switch (kind) {
    case InnerKind::Square: return v * v;
    case InnerKind::Absolute: return std::abs(v);
    case InnerKind::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
  }
  throw std::invalid_argument("unknown inner kind");
}

double apply_outer(OuterKind kind, double slope, double v) {
  switch (kind) {
    case OuterKind::Linear: return slope * v;
    case OuterKind::Cube: return v * v * v;
    case OuterKind::Inverse: return 1.0 / v;
    case OuterKind::Exp: return std::exp(v);
    case OuterKind::Log: return std::log(v);
    case OuterKind::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
  }
  throw std::invalid_argument("unknown outer kind");
}

double draw_noise(NoiseKind kind, Rng& rng) {
  switch (kind) {
    case NoiseKind::Gaussian: return rng.normal();
    case NoiseKind::Uniform: return rng.uniform(-1.0, 1.0);
    case NoiseKind::Laplace: return rng.laplace();
  }
  throw std::invalid_argument("unknown noise kind");
}

}  // namespace

GeneratedPair gen_simple_pnl(int n, const PairSpec& spec, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_simple_pnl: n must be positive");
  Rng rng(mix_seed(seed, 7));

  for (int attempt = 0; attempt < 100; ++attempt) {
    GeneratedPair out;
    out.x.resize(n);
    out.y.resize(n);
    for (int i = 0; i < n; ++i) out.x[i] = rng.normal();

    double slope = 1.0;
    if (spec.outer == OuterKind::Linear) {
      slope = rng.uniform(0.5, 2.0) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
    }

    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      v[i] = apply_inner(spec.inner, out.x[i]) + draw_noise(spec.noise, rng);
    }
    if (spec.outer == OuterKind::Inverse || spec.outer == OuterKind::Log) {
      // Shift into the positive half-line; 1/v and log(v) need v > 0.
      v.array() += 1.0 + std::abs(v.minCoeff());
    }
    for (int i = 0; i < n; ++i) out.y[i] = apply_outer(spec.outer, slope, v[i]);

    if (out.y.allFinite()) return out;
  }
  throw std::runtime_error("gen_simple_pnl: no finite sample in 100 attempts");
}

PairSpec sample_pair_spec(Rng& rng) {
  PairSpec s;
  s.outer = static_cast<OuterKind>(rng.below(6));
  s.inner = static_cast<InnerKind>(rng.below(3));
  s.noise = static_cast<NoiseKind>(rng.below(3));
  return s;
}

double RandomFeatureFn::operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  const Eigen::VectorXd arg = omega * x.transpose() + phase;
  const double norm = std::sqrt(2.0 / static_cast<double>(omega.rows()));
  return norm * arg.array().cos().matrix().dot(coef);
}

Eigen::VectorXd RandomFeatureFn::map(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (x.cols() != omega.cols()) {
    throw std::invalid_argument("RandomFeatureFn: input dim mismatch");
  }
  const double norm = std::sqrt(2.0 / static_cast<double>(omega.rows()));
  Eigen::MatrixXd arg = x * omega.transpose();
  arg.rowwise() += phase.transpose();
  return norm * (arg.array().cos().matrix() * coef);
}

RandomFeatureFn RandomFeatureFn::sample(int input_dim, int n_features, Rng& rng) {
  if (input_dim < 1 || n_features < 1) {
    throw std::invalid_argument("RandomFeatureFn: dimensions must be positive");
  }
  RandomFeatureFn f;
  f.omega.resize(n_features, input_dim);
  for (int m = 0; m < n_features; ++m) {
    for (int j = 0; j < input_dim; ++j) f.omega(m, j) = rng.normal();
  }
  f.phase.resize(n_features);
  for (int m = 0; m < n_features; ++m) {
    f.phase[m] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  f.coef.resize(n_features);
  for (int m = 0; m < n_features; ++m) f.coef[m] = rng.normal();
  return f;
}

double MonotoneSigmoid::operator()(double v) const {
  return a / (1.0 + std::exp(-(b * v + c))) + offset;
}

MonotoneSigmoid MonotoneSigmoid::sample(Rng& rng) {
  MonotoneSigmoid g;
  g.a = rng.uniform(1.0, 3.0);
  g.b = rng.uniform(0.5, 2.0) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
  g.c = rng.normal();
  g.offset = rng.uniform(-1.0, 1.0);
  return g;
}

GeneratedPair gen_gp_pnl(int n, std::uint64_t seed, int n_features) {
  if (n < 1) throw std::invalid_argument("gen_gp_pnl: n must be positive");
  Rng rng(mix_seed(seed, 8));
  const RandomFeatureFn h = RandomFeatureFn::sample(1, n_features, rng);
  const MonotoneSigmoid g = MonotoneSigmoid::sample(rng);

  GeneratedPair out;
  out.x.resize(n);
  out.y.resize(n);
  for (int i = 0; i < n; ++i) out.x[i] = rng.normal();
  const Eigen::VectorXd hx = h.map(out.x);
  for (int i = 0; i < n; ++i) {
    const double eps = rng.uniform() - 0.5;
    out.y[i] = g(hx[i] + eps);
  }
  return out;
}

AdjacencyMatrix gen_er_graph(int d, double expected_in_degree, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("gen_er_graph: need at least 2 nodes");
  if (!(expected_in_degree > 0.0)) {
    throw std::invalid_argument("gen_er_graph: expected_in_degree must be positive");
  }
  Rng rng(mix_seed(seed, 9));
  const std::vector<int> perm = rng.permutation(d);
  const double p = std::min(1.0, 2.0 * expected_in_degree / static_cast<double>(d - 1));

  AdjacencyMatrix g(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (rng.bernoulli(p)) {
        g.set(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)], true);
      }
    }
  }
  return g;
}

Dataset gen_multivariate(const AdjacencyMatrix& graph, int n, std::uint64_t seed,
                         int n_features) {
  if (n < 2) throw std::invalid_argument("gen_multivariate: need at least 2 rows");
  const auto topo = graph.topological_order();
  if (!topo) throw std::invalid_argument("gen_multivariate: graph has a cycle");
  const int d = graph.dim();

  Eigen::MatrixXd values(n, d);
  for (const int v : *topo) {
    Rng rng(mix_seed(seed, 10, static_cast<std::uint64_t>(v)));
    const std::vector<int> pa = graph.parents(v);
    if (pa.empty()) {
      for (int i = 0; i < n; ++i) values(i, v) = rng.normal();
      continue;
    }
    const RandomFeatureFn h =
        RandomFeatureFn::sample(static_cast<int>(pa.size()), n_features, rng);
    const MonotoneSigmoid g = MonotoneSigmoid::sample(rng);
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(pa.size()));
    for (std::size_t c = 0; c < pa.size(); ++c) {
      x.col(static_cast<Eigen::Index>(c)) = values.col(pa[c]);
    }
    const Eigen::VectorXd hx = h.map(x);
    for (int i = 0; i < n; ++i) {
      values(i, v) = g(hx[i] + rng.uniform() - 0.5);
    }
  }

  Dataset out;
  out.values = std::move(values);
  out.names.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) out.names.push_back("x" + std::to_string(j));
  return standardized(out);
}

LocalPieces gen_local_pieces(LocalKind kind, int n, std::uint64_t seed, int n_features) {
  if (n < 1) throw std::invalid_argument("gen_local_pieces: n must be positive");
  Rng rng(mix_seed(seed, 12));
  const RandomFeatureFn f = RandomFeatureFn::sample(1, n_features, rng);
  const RandomFeatureFn s = RandomFeatureFn::sample(1, n_features, rng);

  LocalPieces out;
  out.x.resize(n);
  for (int i = 0; i < n; ++i) out.x[i] = rng.normal();
  out.f_of_x = f.map(out.x);
  if (kind == LocalKind::LocationScale) {
    const Eigen::VectorXd sx = s.map(out.x);
    out.scale.resize(n);
    for (int i = 0; i < n; ++i) {
      // softplus keeps scales positive; linear branch avoids exp overflow
      out.scale[i] = sx[i] > 30.0 ? sx[i] : std::log1p(std::exp(sx[i]));
    }
  } else {
    out.scale = Eigen::VectorXd::Ones(n);
  }
  out.eps.resize(n);
  for (int i = 0; i < n; ++i) out.eps[i] = rng.normal();
  return out;
}

GeneratedPair gen_an_ls(LocalKind kind, int n, std::uint64_t seed) {
  const LocalPieces pieces = gen_local_pieces(kind, n, seed);
  return {pieces.x, pieces.compose()};
}

}  // namespace cafpono
