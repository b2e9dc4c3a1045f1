#include "lexdiar/acoustic_affinity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lexdiar/errors.hpp"

namespace lexdiar {

bool is_symmetric(const AffinityMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
    }
  }
  return true;
}

EmbeddingSet::EmbeddingSet(Eigen::MatrixXd vectors) : vectors_(std::move(vectors)) {
  if (vectors_.rows() > 0 && vectors_.cols() == 0) {
    throw InvalidInput("embeddings must have positive dimension");
  }
  if (!vectors_.allFinite()) {
    throw InvalidInput("embeddings contain non-finite values");
  }
}

AffinityMatrix pairwise_distance_matrix(const EmbeddingSet& embeddings) {
  const auto m = static_cast<Eigen::Index>(embeddings.size());
  if (m < 2) {
    throw InvalidInput("need at least 2 segments to cluster, got " + std::to_string(m));
  }
  const Eigen::MatrixXd& x = embeddings.vectors();
  AffinityMatrix distances = AffinityMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double d = (x.row(i) - x.row(j)).norm();
      distances(i, j) = d;
      distances(j, i) = d;
    }
  }
  return distances;
}

AffinityMatrix binarize_knn(const AffinityMatrix& distances, std::size_t n) {
  if (n == 0) throw InvalidInput("kNN neighbour count must be at least 1");
  if (distances.rows() != distances.cols()) throw InvalidInput("distance matrix must be square");
  const Eigen::Index m = distances.rows();
  const auto rank = static_cast<Eigen::Index>(std::min<std::size_t>(n, static_cast<std::size_t>(m))) - 1;

  AffinityMatrix binary = AffinityMatrix::Zero(m, m);
  std::vector<double> row(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] = distances(i, j);
    std::nth_element(row.begin(), row.begin() + rank, row.end());
    const double threshold = row[static_cast<std::size_t>(rank)];
    for (Eigen::Index j = 0; j < m; ++j) {
      if (distances(i, j) <= threshold) binary(i, j) = 1.0;
    }
  }
  return binary;
}

AffinityMatrix symmetrize(const AffinityMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("symmetrize needs a square matrix");
  return 0.5 * (m + m.transpose());
}

AffinityMatrix acoustic_affinity(const EmbeddingSet& embeddings, std::size_t n) {
  return symmetrize(binarize_knn(pairwise_distance_matrix(embeddings), n));
}

}  // namespace lexdiar
