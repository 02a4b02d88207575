#include "cafpono/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "cafpono/stats.hpp"

namespace cafpono {

Eigen::VectorXd Dataset::col(int j) const {
  if (j < 0 || j >= dim()) throw std::invalid_argument("Dataset::col: index out of range");
  return values.col(j);
}

int Dataset::column_index(const std::string& name) const {
  for (int j = 0; j < dim(); ++j) {
    if (names[static_cast<std::size_t>(j)] == name) return j;
  }
  throw std::invalid_argument("column '" + name + "' not found");
}

void Dataset::validate() const {
  if (values.rows() < 1) throw std::invalid_argument("Dataset: no rows");
  if (static_cast<int>(names.size()) != dim()) {
    throw std::invalid_argument("Dataset: name count does not match column count");
  }
  std::unordered_set<std::string> seen;
  for (const auto& nm : names) {
    if (nm.empty()) throw std::invalid_argument("Dataset: empty column name");
    if (!seen.insert(nm).second) {
      throw std::invalid_argument("Dataset: duplicate column name '" + nm + "'");
    }
  }
  if (!values.allFinite()) throw std::invalid_argument("Dataset: non-finite value");
}

Dataset standardized(const Dataset& d) {
  Dataset out = d;
  for (int j = 0; j < d.dim(); ++j) {
    out.values.col(j) = standardize(d.values.col(j));
  }
  return out;
}

}  // namespace cafpono
