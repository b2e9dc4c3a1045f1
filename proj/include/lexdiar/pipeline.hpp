#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexdiar/acoustic_affinity.hpp"
#include "lexdiar/lexical_affinity.hpp"
#include "lexdiar/scoring.hpp"
#include "lexdiar/spectral.hpp"
#include "lexdiar/timeline.hpp"

namespace lexdiar {

// m1: acoustic adjacency only. full: acoustic + lexical fusion with the
// eigengap-selected turn threshold.
enum class Mode { m1, full };

Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

// Parses "start:stop:step" into an inclusive ascending grid.
std::vector<double> parse_c_grid(std::string_view spec);
std::vector<double> default_c_grid();

struct PipelineConfig {
  Mode mode = Mode::full;
  Seconds window = kDefaultWindow;
  Seconds shift = kDefaultShift;
  std::size_t knn = kDefaultKnn;
  std::size_t nu = kDefaultMaxUtteranceWords;
  std::vector<double> c_grid = default_c_grid();
  double min_overlap_fraction = kDefaultMinOverlapFraction;
  std::size_t k_max = kDefaultMaxSpeakers;
  std::optional<std::size_t> num_speakers;
  std::uint64_t seed = kDefaultSeed;
  Seconds collar = kDefaultCollar;

  // Throws InvalidInput on out-of-domain values.
  void validate() const;
};

struct DiarizationResult {
  std::vector<int> labels;  // per segment
  std::size_t num_clusters = 0;
  EigengapReport report;
  std::vector<GridPoint> grid;  // empty in m1 mode
  std::vector<std::size_t> cluster_sizes;
};

// Segment labels for the given inputs. Words are ignored in m1 mode.
DiarizationResult run_pipeline(const PipelineConfig& config, std::span<const Segment> segments,
                               const EmbeddingSet& embeddings, std::span<const Word> words);

// Maps segment labels onto the timeline: every instant covered by some
// segment goes to the segment with the nearest center (earlier segment on
// ties); touching same-speaker pieces are merged.
std::vector<RttmEntry> resolve_timeline(std::span<const Segment> segments, std::span<const int> labels,
                                        const std::string& recording_id);

std::string speaker_name(int label);

// Short run summary (threshold, speaker count, cluster sizes) as JSON. The
// DER breakdown is included when the run was scored.
std::string summary_json(const PipelineConfig& config, const DiarizationResult& result,
                         const std::optional<DerBreakdown>& der = std::nullopt);
// Per-stage diagnostics: eigenvalue and eigengap heads, ratio per grid point.
std::string report_json(const PipelineConfig& config, const DiarizationResult& result,
                        std::size_t head = 10);

}  // namespace lexdiar
