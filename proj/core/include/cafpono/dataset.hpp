#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace cafpono {

// Column-named sample matrix, rows = observations. Invariants checked by
// validate(): at least one row, one name per column, unique names, all
// values finite.
struct Dataset {
  Eigen::MatrixXd values;
  std::vector<std::string> names;

  int n() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }

  Eigen::VectorXd col(int j) const;
  // Index of the named column; throws std::invalid_argument naming it if absent.
  int column_index(const std::string& name) const;

  void validate() const;
};

// Every column standardized to zero mean, unit variance.
Dataset standardized(const Dataset& d);

}  // namespace cafpono
