#include "lexdiar/assignment.hpp"

#include <algorithm>
#include <limits>

namespace lexdiar {

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights) {
  const auto rows = static_cast<std::size_t>(weights.rows());
  const auto cols = static_cast<std::size_t>(weights.cols());
  if (rows == 0) return {};
  if (cols == 0) return std::vector<int>(rows, -1);

  // Square minimisation problem; padded cells carry zero weight.
  const std::size_t n = std::max(rows, cols);
  const double top = std::max(weights.maxCoeff(), 0.0);
  const auto cost = [&](std::size_t i, std::size_t j) {
    const double w = (i < rows && j < cols) ? weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) : 0.0;
    return top - w;
  };

  // Potentials-based Hungarian method, 1-based with column 0 as sentinel.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assigned(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = match[j];
    if (i >= 1 && i <= rows && j <= cols) assigned[i - 1] = static_cast<int>(j - 1);
  }
  return assigned;
}

}  // namespace lexdiar
