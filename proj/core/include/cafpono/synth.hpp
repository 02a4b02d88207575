#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "cafpono/dataset.hpp"
#include "cafpono/graph.hpp"
#include "cafpono/rng.hpp"

namespace cafpono {

enum class OuterKind { Linear, Cube, Inverse, Exp, Log, Sigmoid };
enum class InnerKind { Square, Absolute, Sigmoid };
enum class NoiseKind { Gaussian, Uniform, Laplace };

struct PairSpec {
  OuterKind outer = OuterKind::Linear;
  InnerKind inner = InnerKind::Square;
  NoiseKind noise = NoiseKind::Gaussian;
};

struct GeneratedPair {
  Eigen::VectorXd x, y;
};

// x ~ N(0,1), y = g(h(x) + eps) from small closed-form function menus. The
// linear outer slope is drawn uniformly from +-[0.5, 2]. For outer maps with
// restricted domain (inverse, log) the argument is shifted by 1 + |min| to
// keep it positive. Draws that still produce non-finite values are retried;
// after 100 attempts this throws std::runtime_error.
GeneratedPair gen_simple_pnl(int n, const PairSpec& spec, std::uint64_t seed);

// Random menu entry for each of (outer, inner, noise).
PairSpec sample_pair_spec(Rng& rng);

// Smooth random function via random Fourier features: sum_m c_m sqrt(2/M)
// cos(omega_m . x + b_m), omega ~ N(0, I) (unit length-scale), b ~ U(0, 2pi).
struct RandomFeatureFn {
  Eigen::MatrixXd omega;  // M x input_dim
  Eigen::VectorXd phase;  // M
  Eigen::VectorXd coef;   // M

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd map(const Eigen::Ref<const Eigen::MatrixXd>& x) const;

  static RandomFeatureFn sample(int input_dim, int n_features, Rng& rng);
};

// Strictly monotone outer map a * sigmoid(b v + c) + offset with a in [1, 3]
// and |b| in [0.5, 2]; increasing or decreasing depending on b's sign.
struct MonotoneSigmoid {
  double a = 1.0, b = 1.0, c = 0.0, offset = 0.0;

  double operator()(double v) const;
  static MonotoneSigmoid sample(Rng& rng);
};

// x ~ N(0,1), y = g(h(x) + eps) with a random-feature h, a sampled monotone
// sigmoid g, and eps ~ U(0, 1) centered.
GeneratedPair gen_gp_pnl(int n, std::uint64_t seed, int n_features = 50);

// Erdos-Renyi DAG: nodes are permuted, each forward pair gets an edge with
// probability min(1, 2 * expected_in_degree / (d - 1)).
AdjacencyMatrix gen_er_graph(int d, double expected_in_degree, std::uint64_t seed);

// Samples every node in topological order: roots are N(0,1); each child is
// a sampled monotone sigmoid of (random-feature function of parents + eps)
// with eps ~ U(0,1) centered. Columns standardized, named x0..x{d-1}.
Dataset gen_multivariate(const AdjacencyMatrix& graph, int n, std::uint64_t seed,
                         int n_features = 50);

enum class LocalKind { Additive, LocationScale };

// Non-PNL baselines: y = f(x) + eps (additive) or y = f(x) + s(x) * eps
// (location-scale, s = softplus of a second random function). With s forced
// to 1 the location-scale form is exactly the additive one.
struct LocalPieces {
  Eigen::VectorXd x, f_of_x, scale, eps;

  Eigen::VectorXd compose() const { return f_of_x + scale.cwiseProduct(eps); }
};
LocalPieces gen_local_pieces(LocalKind kind, int n, std::uint64_t seed,
                             int n_features = 50);
GeneratedPair gen_an_ls(LocalKind kind, int n, std::uint64_t seed);

}  // namespace cafpono
