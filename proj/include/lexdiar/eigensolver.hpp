#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace lexdiar {

// Dense symmetric eigensolvers. Inputs must be symmetric; both throw
// NumericalError on non-finite input or when iterations fail to converge.

// All eigenvalues, ascending.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m);

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column j pairs with values[j]
};

// The `count` smallest eigenpairs.
EigenPairs smallest_eigenpairs(const Eigen::MatrixXd& m, std::size_t count);

}  // namespace lexdiar
