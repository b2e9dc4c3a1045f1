#include "lexdiar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lexdiar/eigensolver.hpp"
#include "lexdiar/errors.hpp"
#include "lexdiar/fusion.hpp"
#include "lexdiar/kmeans.hpp"

namespace lexdiar {

Eigen::MatrixXd laplacian(const AffinityMatrix& adjacency) {
  if (!is_symmetric(adjacency, 1e-12)) {
    throw InvalidInput("laplacian needs a square symmetric adjacency matrix");
  }
  if (!adjacency.allFinite()) throw InvalidInput("adjacency matrix has non-finite entries");
  // Degrees leave out a_ii, so self-loops cancel exactly instead of to rounding.
  Eigen::MatrixXd l = -adjacency;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    double degree = 0.0;
    for (Eigen::Index j = 0; j < l.cols(); ++j)
      if (j != i) degree += adjacency(i, j);
    l(i, i) = degree;
  }
  return l;
}

double min_max_ratio(std::span<const double> eigengaps) {
  if (eigengaps.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(eigengaps.begin(), eigengaps.end());
  return *hi / std::max(*lo, kRatioFloor);
}

std::size_t estimate_speaker_count(std::span<const double> eigengaps, std::size_t max_speakers) {
  const std::size_t limit = std::min(eigengaps.size(), std::max<std::size_t>(max_speakers, 1));
  if (limit == 0) return 1;
  const auto best = std::max_element(eigengaps.begin(), eigengaps.begin() + static_cast<std::ptrdiff_t>(limit));
  return static_cast<std::size_t>(best - eigengaps.begin()) + 1;
}

EigengapReport eigengap_report(const Eigen::MatrixXd& laplacian_matrix, std::optional<double> threshold,
                               std::size_t max_speakers) {
  EigengapReport report;
  report.threshold = threshold;
  report.eigenvalues = symmetric_eigenvalues(laplacian_matrix);
  const auto& lambda = report.eigenvalues;
  for (std::size_t n = 1; n < lambda.size(); ++n) report.eigengaps.push_back(lambda[n] - lambda[n - 1]);
  report.ratio = min_max_ratio(report.eigengaps);
  report.estimated_speakers = estimate_speaker_count(report.eigengaps, max_speakers);
  return report;
}

std::optional<std::size_t> best_grid_index(std::span<const GridPoint> grid) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i].ratio) continue;
    if (!best || *grid[i].ratio > *grid[*best].ratio) best = i;
  }
  return best;
}

ThresholdSelection select_threshold(const AffinityMatrix& acoustic, std::span<const Word> words,
                                    std::span<const Segment> segments, std::span<const double> c_grid,
                                    const LexicalParams& params, std::size_t max_speakers) {
  if (c_grid.empty()) throw InvalidInput("threshold grid is empty");
  if (static_cast<std::size_t>(acoustic.rows()) != segments.size()) {
    throw InvalidInput("acoustic matrix size does not match the segment count");
  }

  ThresholdSelection selection;
  std::optional<std::size_t> best;
  // Thresholds that pick the same turn words build the same matrix.
  std::map<std::vector<std::size_t>, std::size_t> seen;

  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    const double c = c_grid[i];
    GridPoint point{c, std::nullopt, 0, 0, {}};
    const auto turns = pick_turn_words(words, c);
    point.turn_words = turns.size();

    if (const auto it = seen.find(turns); it != seen.end()) {
      const GridPoint& twin = selection.grid[it->second];
      point.ratio = twin.ratio;
      point.estimated_speakers = twin.estimated_speakers;
      point.error = twin.error;
      selection.grid.push_back(std::move(point));
      continue;
    }
    seen.emplace(turns, i);

    try {
      AffinityMatrix fused = combine_max(acoustic, lexical_affinity(words, segments, c, params));
      EigengapReport report = eigengap_report(laplacian(fused), c, max_speakers);
      point.ratio = report.ratio;
      point.estimated_speakers = report.estimated_speakers;
      if (!best || report.ratio > selection.report.ratio) {
        best = i;
        selection.threshold = c;
        selection.fused = std::move(fused);
        selection.report = std::move(report);
      }
    } catch (const NumericalError& e) {
      point.error = e.what();
    }
    selection.grid.push_back(std::move(point));
  }

  if (!best) {
    throw NumericalError("every threshold grid point failed; first error: " + selection.grid.front().error);
  }
  return selection;
}

std::vector<int> spectral_cluster(const AffinityMatrix& adjacency, std::size_t k, std::uint64_t seed) {
  const auto m = static_cast<std::size_t>(adjacency.rows());
  if (k == 0 || k > m) {
    throw InvalidInput("speaker count must be in [1, " + std::to_string(m) + "], got " + std::to_string(k));
  }
  if (k == 1) return std::vector<int>(m, 0);

  const EigenPairs pairs = smallest_eigenpairs(laplacian(adjacency), k);
  const KMeansResult clusters = kmeans(pairs.vectors, {.clusters = k, .seed = seed});

  std::vector<int> relabel(k, -1);
  std::vector<int> labels(m);
  int next = 0;
  for (std::size_t i = 0; i < m; ++i) {
    int& mapped = relabel[static_cast<std::size_t>(clusters.labels[i])];
    if (mapped < 0) mapped = next++;
    labels[i] = mapped;
  }
  return labels;
}

}  // namespace lexdiar
