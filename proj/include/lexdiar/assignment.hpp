#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lexdiar {

// Maximum-weight one-to-one assignment between rows and columns of a
// rectangular weight matrix (Hungarian method). Entry i of the result is the
// column assigned to row i, or -1 when the row is left unmatched.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights);

}  // namespace lexdiar
