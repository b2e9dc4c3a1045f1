#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lexdiar {

struct KMeansOptions {
  std::size_t clusters = 2;
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
  std::uint64_t seed = 42;
};

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
};

// Lloyd iterations from k-means++ seeds; the restart with the lowest inertia
// wins (earliest on ties). Rows of `points` are the observations.
KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options);

}  // namespace lexdiar
