#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cafpono {

// Dense directed-graph adjacency: at(i, j) means edge i -> j. The diagonal
// is always zero; acyclicity is not enforced on every set() so callers can
// build incrementally, use is_acyclic() before relying on DAG semantics.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(int dim);

  int dim() const { return dim_; }
  bool at(int i, int j) const;
  void set(int i, int j, bool value);

  int edge_count() const;
  std::vector<int> parents(int j) const;
  std::vector<int> children(int i) const;

  bool is_acyclic() const;
  // Root-first order, or nullopt if the graph has a cycle.
  std::optional<std::vector<int>> topological_order() const;
  // mask[v] is true iff v is reachable from i by a directed path (i excluded).
  std::vector<std::uint8_t> descendants(int i) const;

  friend bool operator==(const AdjacencyMatrix& a, const AdjacencyMatrix& b) {
    return a.dim_ == b.dim_ && a.cells_ == b.cells_;
  }

 private:
  void check_pair(int i, int j) const;

  int dim_ = 0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace cafpono
