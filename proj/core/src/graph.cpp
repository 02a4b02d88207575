#include "cafpono/graph.hpp"

#include <stdexcept>

namespace cafpono {

AdjacencyMatrix::AdjacencyMatrix(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("AdjacencyMatrix: dim must be positive");
  cells_.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0);
}

void AdjacencyMatrix::check_pair(int i, int j) const {
  if (i < 0 || i >= dim_ || j < 0 || j >= dim_) {
    throw std::invalid_argument("AdjacencyMatrix: node index out of range");
  }
}

bool AdjacencyMatrix::at(int i, int j) const {
  check_pair(i, j);
  return cells_[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
                static_cast<std::size_t>(j)] != 0;
}

void AdjacencyMatrix::set(int i, int j, bool value) {
  check_pair(i, j);
  if (i == j && value) throw std::invalid_argument("AdjacencyMatrix: self-loop");
  cells_[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
         static_cast<std::size_t>(j)] = value ? 1 : 0;
}

int AdjacencyMatrix::edge_count() const {
  int c = 0;
  for (const auto v : cells_) c += v;
  return c;
}

std::vector<int> AdjacencyMatrix::parents(int j) const {
  check_pair(j, j);
  std::vector<int> out;
  for (int i = 0; i < dim_; ++i) {
    if (i != j && at(i, j)) out.push_back(i);
  }
  return out;
}

std::vector<int> AdjacencyMatrix::children(int i) const {
  check_pair(i, i);
  std::vector<int> out;
  for (int j = 0; j < dim_; ++j) {
    if (i != j && at(i, j)) out.push_back(j);
  }
  return out;
}

std::optional<std::vector<int>> AdjacencyMatrix::topological_order() const {
  std::vector<int> indeg(static_cast<std::size_t>(dim_), 0);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      if (i != j && at(i, j)) ++indeg[static_cast<std::size_t>(j)];
    }
  }
  std::vector<int> ready;
  for (int v = 0; v < dim_; ++v) {
    if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  }
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(dim_));
  // Smallest-index-first keeps the order deterministic.
  while (!ready.empty()) {
    int best = 0;
    for (std::size_t k = 1; k < ready.size(); ++k) {
      if (ready[k] < ready[best]) best = static_cast<int>(k);
    }
    const int v = ready[static_cast<std::size_t>(best)];
    ready.erase(ready.begin() + best);
    order.push_back(v);
    for (int j = 0; j < dim_; ++j) {
      if (j != v && at(v, j) && --indeg[static_cast<std::size_t>(j)] == 0) {
        ready.push_back(j);
      }
    }
  }
  if (static_cast<int>(order.size()) != dim_) return std::nullopt;
  return order;
}

bool AdjacencyMatrix::is_acyclic() const { return topological_order().has_value(); }

std::vector<std::uint8_t> AdjacencyMatrix::descendants(int i) const {
  check_pair(i, i);
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(dim_), 0);
  std::vector<int> stack{i};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int j = 0; j < dim_; ++j) {
      if (j != v && at(v, j) && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        stack.push_back(j);
      }
    }
  }
  seen[static_cast<std::size_t>(i)] = 0;
  return seen;
}

}  // namespace cafpono
