#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

#include "cafpono/dataset.hpp"
#include "cafpono/graph.hpp"

namespace cafpono {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Comma-separated values with a header row. Rejects ragged rows, non-numeric
// cells and non-finite values; messages cite the 1-based data row and column.
Dataset read_dataset(const std::string& path);

// Round-trips doubles exactly (17 significant digits).
void write_dataset(const std::string& path, const Dataset& data);

struct CauseEffectPair {
  std::string name;
  Eigen::VectorXd x, y;
  int truth = 1;       // +1 when x is the cause
  double weight = 1.0;
};

// Directory of pairNNNN.txt files (whitespace-separated columns, no header)
// plus a pairmeta table mapping each id to its cause and effect column
// ranges and a weight. Multi-column groups use their first column. Files
// with missing or malformed metadata are skipped; skipped names are appended
// to *warnings when given.
std::vector<CauseEffectPair> read_pair_dir(const std::string& dir,
                                           std::vector<std::string>* warnings = nullptr);

// Graph JSON: {"nodes": ["a", ...], "edges": [["a", "b"], ...]}; an edge
// names parent first. Unknown node names, duplicates, self-loops and cycles
// are ParseErrors.
struct NamedGraph {
  std::vector<std::string> nodes;
  AdjacencyMatrix adjacency;
};

NamedGraph read_graph(const std::string& path);
void write_graph(const std::string& path, const NamedGraph& graph);

}  // namespace cafpono
