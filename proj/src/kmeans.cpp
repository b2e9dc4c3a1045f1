#include "lexdiar/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "lexdiar/errors.hpp"

namespace lexdiar {

namespace {

using Rng = std::mt19937_64;

// k-means++: first center uniform, then each next center drawn with
// probability proportional to squared distance to the nearest chosen one.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& points, std::size_t k, Rng& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centroids(static_cast<Eigen::Index>(k), points.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centroids.row(0) = points.row(pick(rng));

  Eigen::VectorXd nearest(n);
  for (Eigen::Index i = 0; i < n; ++i) nearest(i) = (points.row(i) - centroids.row(0)).squaredNorm();

  for (std::size_t c = 1; c < k; ++c) {
    const double total = nearest.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (nearest(i) <= 0.0) continue;
        target -= nearest(i);
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
      // Rounding can leave `chosen` on an already-selected point.
      while (nearest(chosen) <= 0.0 && chosen > 0) --chosen;
    } else {
      chosen = pick(rng);
    }
    const auto row = static_cast<Eigen::Index>(c);
    centroids.row(row) = points.row(chosen);
    for (Eigen::Index i = 0; i < n; ++i) {
      nearest(i) = std::min(nearest(i), (points.row(i) - centroids.row(row)).squaredNorm());
    }
  }
  return centroids;
}

struct Assignment {
  std::vector<int> labels;
  Eigen::VectorXd distances;  // squared distance to assigned centroid
  double inertia = 0.0;
};

Assignment assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids) {
  const Eigen::Index n = points.rows();
  Assignment a{std::vector<int>(static_cast<std::size_t>(n)), Eigen::VectorXd(n), 0.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int label = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        label = static_cast<int>(c);
      }
    }
    a.labels[static_cast<std::size_t>(i)] = label;
    a.distances(i) = best;
    a.inertia += best;
  }
  return a;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids, std::size_t max_iterations) {
  const Eigen::Index k = centroids.rows();
  Assignment current = assign(points, centroids);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const int label = current.labels[static_cast<std::size_t>(i)];
      sums.row(label) += points.row(i);
      ++counts(label);
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts(c) > 0) {
        centroids.row(c) = sums.row(c) / counts(c);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its centroid.
      Eigen::Index far = 0;
      current.distances.maxCoeff(&far);
      centroids.row(c) = points.row(far);
      current.distances(far) = 0.0;
    }
    Assignment next = assign(points, centroids);
    const bool converged = next.labels == current.labels;
    current = std::move(next);
    if (converged) break;
  }
  return {std::move(current.labels), std::move(centroids), current.inertia};
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (options.clusters == 0 || options.clusters > n) {
    throw InvalidInput("k-means needs 1 <= k <= " + std::to_string(n) + ", got " +
                       std::to_string(options.clusters));
  }
  if (!points.allFinite()) throw NumericalError("k-means input contains non-finite values");

  Rng rng(options.seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    KMeansResult run = lloyd(points, seed_centroids(points, options.clusters, rng), options.max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

}  // namespace lexdiar
