#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexdiar/affinity.hpp"
#include "lexdiar/lexical_affinity.hpp"
#include "lexdiar/timeline.hpp"

namespace lexdiar {

inline constexpr std::size_t kDefaultMaxSpeakers = 10;
inline constexpr double kRatioFloor = 1e-10;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Spectrum summary of one adjacency matrix.
struct EigengapReport {
  std::vector<double> eigenvalues;  // ascending, size M
  std::vector<double> eigengaps;    // eigengaps[n-1] = lambda_{n+1} - lambda_n
  double ratio = 0.0;               // max(gaps) / max(min(gaps), kRatioFloor)
  std::optional<double> threshold;  // turn threshold c that produced the matrix
  std::size_t estimated_speakers = 1;
};

// Unnormalized graph Laplacian D - A. Throws InvalidInput if A is not
// symmetric to within 1e-12.
Eigen::MatrixXd laplacian(const AffinityMatrix& adjacency);

double min_max_ratio(std::span<const double> eigengaps);

// 1-based argmax of the eigengaps over n in [1, min(max_speakers, M-1)].
// First maximum wins. Returns 1 when there are no gaps.
std::size_t estimate_speaker_count(std::span<const double> eigengaps,
                                   std::size_t max_speakers = kDefaultMaxSpeakers);

EigengapReport eigengap_report(const Eigen::MatrixXd& laplacian_matrix, std::optional<double> threshold,
                               std::size_t max_speakers = kDefaultMaxSpeakers);

struct GridPoint {
  double threshold = 0.0;
  std::optional<double> ratio;  // empty when this grid point failed
  std::size_t estimated_speakers = 0;
  std::size_t turn_words = 0;
  std::string error;
};

// Index of the grid point with the largest ratio, smallest index on ties.
// Failed points are skipped. Empty result when every point failed.
std::optional<std::size_t> best_grid_index(std::span<const GridPoint> grid);

struct ThresholdSelection {
  double threshold = 0.0;
  AffinityMatrix fused;
  EigengapReport report;
  std::vector<GridPoint> grid;
};

// Fuses the acoustic matrix with the lexical matrix for every c in the grid
// and keeps the c whose Laplacian has the largest eigengap min-max ratio.
// Throws NumericalError only if every grid point fails.
ThresholdSelection select_threshold(const AffinityMatrix& acoustic, std::span<const Word> words,
                                    std::span<const Segment> segments, std::span<const double> c_grid,
                                    const LexicalParams& params = {},
                                    std::size_t max_speakers = kDefaultMaxSpeakers);

// k-means (k-means++ seeding, 10 restarts, 300 iterations) on the rows of
// the k smallest Laplacian eigenvectors. Labels are renumbered by order of
// first appearance.
std::vector<int> spectral_cluster(const AffinityMatrix& adjacency, std::size_t k,
                                  std::uint64_t seed = kDefaultSeed);

}  // namespace lexdiar
