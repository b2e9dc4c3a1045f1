#pragma once

#include <Eigen/Dense>

namespace lexdiar {

// M x M nonnegative matrix over segments. Used for raw distances, the
// binarized kNN graph, and the symmetric acoustic / lexical / fused
// adjacency matrices.
using AffinityMatrix = Eigen::MatrixXd;

bool is_symmetric(const AffinityMatrix& m, double tol = 0.0);

}  // namespace lexdiar
