#include "cafpono/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cafpono {
namespace {

void check_labels(const std::vector<PairLabel>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("metrics: no pairs");
  for (const auto& p : pairs) {
    if (p.truth != 1 && p.truth != -1) {
      throw std::invalid_argument("metrics: truth labels must be +1 or -1");
    }
    if (!std::isfinite(p.score)) throw std::invalid_argument("metrics: non-finite score");
  }
}

// Mann-Whitney AUC of `pos` scores against `neg` scores, ties 0.5.
double mann_whitney(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0;
  for (const double p : pos) {
    for (const double q : neg) {
      if (p > q) {
        wins += 1.0;
      } else if (p == q) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

void check_same_dag(const AdjacencyMatrix& a, const AdjacencyMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("metrics: graph sizes differ");
  if (!a.is_acyclic() || !b.is_acyclic()) {
    throw std::invalid_argument("metrics: graphs must be acyclic");
  }
}

std::vector<std::uint8_t> member_mask(int dim, const std::vector<int>& z) {
  std::vector<std::uint8_t> m(static_cast<std::size_t>(dim), 0);
  for (const int v : z) {
    if (v < 0 || v >= dim) throw std::invalid_argument("metrics: node index out of range");
    m[static_cast<std::size_t>(v)] = 1;
  }
  return m;
}

}  // namespace

double auc_bidirectional(const std::vector<PairLabel>& pairs) {
  check_labels(pairs);
  std::vector<double> fwd, bwd;
  for (const auto& p : pairs) {
    (p.truth == 1 ? fwd : bwd).push_back(p.score);
  }
  if (fwd.empty() || bwd.empty()) {
    throw std::invalid_argument("auc_bidirectional: need both classes present");
  }
  // Scoring the backward class uses the negated statistic, so the two
  // one-vs-rest AUCs are equal by symmetry; both are kept for clarity.
  std::vector<double> neg_fwd, neg_bwd;
  for (const double s : fwd) neg_fwd.push_back(-s);
  for (const double s : bwd) neg_bwd.push_back(-s);
  return 0.5 * (mann_whitney(fwd, bwd) + mann_whitney(neg_bwd, neg_fwd));
}

double accuracy(const std::vector<PairLabel>& pairs) {
  check_labels(pairs);
  int hits = 0;
  for (const auto& p : pairs) {
    const int call = p.score >= 0.0 ? 1 : -1;
    if (call == p.truth) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double accuracy(const std::vector<PairLabel>& pairs, const std::vector<double>& weights) {
  check_labels(pairs);
  if (weights.size() != pairs.size()) {
    throw std::invalid_argument("accuracy: weight count mismatch");
  }
  double total = 0.0, hit = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(weights[i] > 0.0)) throw std::invalid_argument("accuracy: weights must be positive");
    total += weights[i];
    const int call = pairs[i].score >= 0.0 ? 1 : -1;
    if (call == pairs[i].truth) hit += weights[i];
  }
  return hit / total;
}

int shd(const AdjacencyMatrix& predicted, const AdjacencyMatrix& truth) {
  check_same_dag(predicted, truth);
  int dist = 0;
  for (int i = 0; i < truth.dim(); ++i) {
    for (int j = i + 1; j < truth.dim(); ++j) {
      const bool p_ij = predicted.at(i, j), p_ji = predicted.at(j, i);
      const bool t_ij = truth.at(i, j), t_ji = truth.at(j, i);
      const bool p_adj = p_ij || p_ji, t_adj = t_ij || t_ji;
      if (p_adj != t_adj) {
        ++dist;  // missing or extra
      } else if (p_adj && p_ij != t_ij) {
        ++dist;  // reversed
      }
    }
  }
  return dist;
}

bool d_separated(const AdjacencyMatrix& g, int i, int j, const std::vector<int>& z) {
  const int d = g.dim();
  const std::vector<std::uint8_t> in_z = member_mask(d, z);
  if (i < 0 || i >= d || j < 0 || j >= d || i == j) {
    throw std::invalid_argument("d_separated: bad node pair");
  }
  if (in_z[static_cast<std::size_t>(i)] || in_z[static_cast<std::size_t>(j)]) {
    throw std::invalid_argument("d_separated: endpoints may not be conditioned on");
  }

  // Ancestors-or-self of Z, for collider opening.
  std::vector<std::uint8_t> anc_z(static_cast<std::size_t>(d), 0);
  {
    std::vector<int> stack(z);
    for (const int v : z) anc_z[static_cast<std::size_t>(v)] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const int p : g.parents(v)) {
        if (!anc_z[static_cast<std::size_t>(p)]) {
          anc_z[static_cast<std::size_t>(p)] = 1;
          stack.push_back(p);
        }
      }
    }
  }

  // Reachability over active trails. State (v, dir): dir 0 = entered v along
  // an edge out of v (from a child), dir 1 = entered along an edge into v
  // (from a parent). Start pretends i was entered from a child, which allows
  // leaving in both directions.
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(2 * d), 0);
  std::vector<std::pair<int, int>> stack{{i, 0}};
  seen[static_cast<std::size_t>(2 * i)] = 1;
  while (!stack.empty()) {
    const auto [v, dir] = stack.back();
    stack.pop_back();
    if (v == j) return false;

    const auto push = [&](int w, int wdir) {
      if (!seen[static_cast<std::size_t>(2 * w + wdir)]) {
        seen[static_cast<std::size_t>(2 * w + wdir)] = 1;
        stack.emplace_back(w, wdir);
      }
    };
    const bool blocked = in_z[static_cast<std::size_t>(v)] != 0;
    if (dir == 0) {
      // Fork or chain through v; blocked when v is conditioned on.
      if (!blocked) {
        for (const int p : g.parents(v)) push(p, 0);
        for (const int c : g.children(v)) push(c, 1);
      }
    } else {
      if (!blocked) {
        for (const int c : g.children(v)) push(c, 1);
      }
      // Collider at v opens when v or a descendant is conditioned on.
      if (anc_z[static_cast<std::size_t>(v)]) {
        for (const int p : g.parents(v)) push(p, 0);
      }
    }
  }
  return true;
}

bool valid_adjustment(const AdjacencyMatrix& g, int i, int j, const std::vector<int>& z) {
  const int d = g.dim();
  if (!g.is_acyclic()) throw std::invalid_argument("valid_adjustment: graph must be acyclic");
  if (i < 0 || i >= d || j < 0 || j >= d || i == j) {
    throw std::invalid_argument("valid_adjustment: bad node pair");
  }
  const std::vector<std::uint8_t> in_z = member_mask(d, z);
  if (in_z[static_cast<std::size_t>(i)] || in_z[static_cast<std::size_t>(j)]) return false;

  const std::vector<std::uint8_t> de_i = g.descendants(i);

  // Nodes (other than i) lying on a proper causal path from i to j: a
  // descendant of i that is j itself or an ancestor of j through de_i.
  std::vector<std::uint8_t> causal(static_cast<std::size_t>(d), 0);
  for (int w = 0; w < d; ++w) {
    if (w == i || !de_i[static_cast<std::size_t>(w)]) continue;
    if (w == j || g.descendants(w)[static_cast<std::size_t>(j)]) {
      causal[static_cast<std::size_t>(w)] = 1;
    }
  }

  // Z may not touch causal nodes or anything downstream of them.
  for (int w = 0; w < d; ++w) {
    if (!causal[static_cast<std::size_t>(w)]) continue;
    if (in_z[static_cast<std::size_t>(w)]) return false;
    const auto de_w = g.descendants(w);
    for (int v = 0; v < d; ++v) {
      if (de_w[static_cast<std::size_t>(v)] && in_z[static_cast<std::size_t>(v)]) return false;
    }
  }

  // Proper back-door graph: drop i's edges onto causal nodes, then require
  // Z to d-separate i and j.
  AdjacencyMatrix bd = g;
  for (int w = 0; w < d; ++w) {
    if (causal[static_cast<std::size_t>(w)] && bd.at(i, w)) bd.set(i, w, false);
  }
  return d_separated(bd, i, j, z);
}

int sid(const AdjacencyMatrix& predicted, const AdjacencyMatrix& truth) {
  check_same_dag(predicted, truth);
  const int d = truth.dim();
  int wrong = 0;
  for (int i = 0; i < d; ++i) {
    const std::vector<int> z = predicted.parents(i);
    const std::vector<std::uint8_t> in_z = member_mask(d, z);
    const std::vector<std::uint8_t> de_i = truth.descendants(i);
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      if (in_z[static_cast<std::size_t>(j)]) {
        // Conditioning on j itself: harmless iff j is not affected by i.
        if (de_i[static_cast<std::size_t>(j)]) ++wrong;
      } else if (!valid_adjustment(truth, i, j, z)) {
        ++wrong;
      }
    }
  }
  return wrong;
}

int order_divergence(const std::vector<int>& root_first_order, const AdjacencyMatrix& truth) {
  const int d = truth.dim();
  if (static_cast<int>(root_first_order.size()) != d) {
    throw std::invalid_argument("order_divergence: order length mismatch");
  }
  std::vector<int> pos(static_cast<std::size_t>(d), -1);
  for (int q = 0; q < d; ++q) {
    const int v = root_first_order[static_cast<std::size_t>(q)];
    if (v < 0 || v >= d || pos[static_cast<std::size_t>(v)] != -1) {
      throw std::invalid_argument("order_divergence: not a permutation of the nodes");
    }
    pos[static_cast<std::size_t>(v)] = q;
  }
  int bad = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i != j && truth.at(i, j) &&
          pos[static_cast<std::size_t>(j)] < pos[static_cast<std::size_t>(i)]) {
        ++bad;
      }
    }
  }
  return bad;
}

}  // namespace cafpono
