#pragma once

#include <vector>

#include "cafpono/graph.hpp"

namespace cafpono {

struct PairLabel {
  double score = 0.0;  // decision statistic, larger favors "forward"
  int truth = 0;       // +1 forward, -1 backward
};

// Mean of the two one-vs-rest Mann-Whitney AUCs (forward class vs backward
// class and vice versa); ties count 0.5. Throws std::invalid_argument when
// only one class is present.
double auc_bidirectional(const std::vector<PairLabel>& pairs);

// Fraction of pairs whose score sign matches the truth; a zero score counts
// as +1. The weighted overload uses per-pair weights (all positive).
double accuracy(const std::vector<PairLabel>& pairs);
double accuracy(const std::vector<PairLabel>& pairs, const std::vector<double>& weights);

// Structural Hamming distance over unordered node pairs: missing or extra
// adjacency costs 1, and a reversed edge costs 1 (not 2).
int shd(const AdjacencyMatrix& predicted, const AdjacencyMatrix& truth);

// Structural intervention distance: the number of ordered pairs (i, j) whose
// intervention distribution p(x_j | do(x_i)) would be estimated incorrectly
// when adjusting for the predicted parents of i in the true graph. Both
// graphs must be DAGs on the same nodes.
int sid(const AdjacencyMatrix& predicted, const AdjacencyMatrix& truth);

// Number of true edges i -> j that the root-first order places in the wrong
// relative position (j before i).
int order_divergence(const std::vector<int>& root_first_order, const AdjacencyMatrix& truth);

// True iff Z d-separates i from j in the DAG (i, j not in Z).
bool d_separated(const AdjacencyMatrix& g, int i, int j, const std::vector<int>& z);

// Back-door adjustment validity of Z for the ordered pair (i, j) in the DAG.
bool valid_adjustment(const AdjacencyMatrix& g, int i, int j, const std::vector<int>& z);

}  // namespace cafpono
