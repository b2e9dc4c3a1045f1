#pragma once

#include <cstddef>

#include "lexdiar/affinity.hpp"

namespace lexdiar {

inline constexpr std::size_t kDefaultKnn = 25;

// One embedding per segment; row i belongs to segment i.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  // Throws InvalidInput on non-finite entries or zero dimension with rows.
  explicit EmbeddingSet(Eigen::MatrixXd vectors);

  std::size_t size() const { return static_cast<std::size_t>(vectors_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  const Eigen::MatrixXd& vectors() const { return vectors_; }

 private:
  Eigen::MatrixXd vectors_;
};

// Euclidean distances between all embedding pairs. Needs at least 2 rows.
AffinityMatrix pairwise_distance_matrix(const EmbeddingSet& embeddings);

// Row-wise kNN binarization: entry (i, j) becomes 1 when p_ij is no larger
// than the n-th smallest value of row i (the zero self-distance included).
// Every entry tied with the threshold is kept.
AffinityMatrix binarize_knn(const AffinityMatrix& distances, std::size_t n);

// (X + X^T) / 2
AffinityMatrix symmetrize(const AffinityMatrix& m);

// Distances, kNN binarization and symmetrization in one go.
AffinityMatrix acoustic_affinity(const EmbeddingSet& embeddings, std::size_t n = kDefaultKnn);

}  // namespace lexdiar
