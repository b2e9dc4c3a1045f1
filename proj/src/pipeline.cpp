#include "lexdiar/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "lexdiar/errors.hpp"

namespace lexdiar {

namespace {

double parse_grid_number(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw InvalidInput("bad threshold grid number '" + std::string(text) + "'");
  }
  return value;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

Mode parse_mode(std::string_view name) {
  if (name == "m1") return Mode::m1;
  if (name == "full") return Mode::full;
  throw InvalidInput("unknown mode '" + std::string(name) + "' (expected m1 or full)");
}

std::string_view mode_name(Mode mode) { return mode == Mode::m1 ? "m1" : "full"; }

std::vector<double> parse_c_grid(std::string_view spec) {
  const std::size_t first = spec.find(':');
  const std::size_t second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos) {
    throw InvalidInput("threshold grid must look like start:stop:step, got '" + std::string(spec) + "'");
  }
  const double start = parse_grid_number(spec.substr(0, first));
  const double stop = parse_grid_number(spec.substr(first + 1, second - first - 1));
  const double step = parse_grid_number(spec.substr(second + 1));
  if (!(step > 0.0) || stop < start || start < 0.0 || stop > 1.0) {
    throw InvalidInput("threshold grid needs 0 <= start <= stop <= 1 and step > 0");
  }
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double c = start + static_cast<double>(i) * step;
    if (c > stop + 1e-9) break;
    grid.push_back(std::round(c * 1e9) / 1e9);
  }
  return grid;
}

std::vector<double> default_c_grid() { return parse_c_grid("0.05:0.95:0.05"); }

void PipelineConfig::validate() const {
  if (!(window > 0.0) || !(shift > 0.0)) throw InvalidInput("window and shift must be positive");
  if (knn == 0) throw InvalidInput("knn must be at least 1");
  if (nu < 2) throw InvalidInput("nu must be at least 2");
  if (c_grid.empty()) throw InvalidInput("threshold grid is empty");
  if (!std::is_sorted(c_grid.begin(), c_grid.end())) throw InvalidInput("threshold grid must be ascending");
  if (!(min_overlap_fraction > 0.0 && min_overlap_fraction <= 1.0)) {
    throw InvalidInput("min overlap fraction must be in (0, 1]");
  }
  if (k_max == 0) throw InvalidInput("k_max must be at least 1");
  if (num_speakers && *num_speakers == 0) throw InvalidInput("num_speakers must be at least 1");
  if (!(collar >= 0.0)) throw InvalidInput("collar must be non-negative");
}

DiarizationResult run_pipeline(const PipelineConfig& config, std::span<const Segment> segments,
                               const EmbeddingSet& embeddings, std::span<const Word> words) {
  config.validate();
  if (segments.size() != embeddings.size()) {
    throw InvalidInput(std::to_string(segments.size()) + " segments but " + std::to_string(embeddings.size()) +
                       " embeddings");
  }
  const AffinityMatrix acoustic = acoustic_affinity(embeddings, config.knn);

  DiarizationResult result;
  AffinityMatrix fused;
  if (config.mode == Mode::m1) {
    result.report = eigengap_report(laplacian(acoustic), std::nullopt, config.k_max);
    fused = acoustic;
  } else {
    const LexicalParams lexical{config.nu, config.min_overlap_fraction};
    ThresholdSelection selection = select_threshold(acoustic, words, segments, config.c_grid, lexical, config.k_max);
    result.report = std::move(selection.report);
    result.grid = std::move(selection.grid);
    fused = std::move(selection.fused);
  }

  result.num_clusters = config.num_speakers.value_or(result.report.estimated_speakers);
  if (result.num_clusters > segments.size()) {
    throw InvalidInput("cannot form " + std::to_string(result.num_clusters) + " clusters from " +
                       std::to_string(segments.size()) + " segments");
  }
  result.labels = spectral_cluster(fused, result.num_clusters, config.seed);
  result.cluster_sizes.assign(result.num_clusters, 0);
  for (const int label : result.labels) ++result.cluster_sizes[static_cast<std::size_t>(label)];
  return result;
}

std::string speaker_name(int label) { return "spk" + std::to_string(label); }

std::vector<RttmEntry> resolve_timeline(std::span<const Segment> segments, std::span<const int> labels,
                                        const std::string& recording_id) {
  if (segments.size() != labels.size()) throw InvalidInput("one label per segment required");
  if (segments.empty()) return {};

  // Voronoi cells of the segment centers; equal centers go to the earlier segment.
  std::vector<std::size_t> order(segments.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return segments[a].interval.center() < segments[b].interval.center();
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return segments[a].interval.center() == segments[b].interval.center();
                          }),
              order.end());

  struct Cell {
    Seconds start;
    Seconds end;
    int label;
  };
  constexpr Seconds kInf = std::numeric_limits<Seconds>::infinity();
  std::vector<Cell> cells;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Seconds c = segments[order[k]].interval.center();
    const Seconds lo = k == 0 ? -kInf : 0.5 * (segments[order[k - 1]].interval.center() + c);
    const Seconds hi = k + 1 == order.size() ? kInf : 0.5 * (c + segments[order[k + 1]].interval.center());
    cells.push_back({lo, hi, labels[order[k]]});
  }

  // Union of the segment spans.
  std::vector<TimeInterval> spans;
  for (const Segment& s : segments) spans.push_back(s.interval);
  std::sort(spans.begin(), spans.end(), [](const TimeInterval& a, const TimeInterval& b) { return a.start < b.start; });
  std::vector<TimeInterval> covered;
  for (const TimeInterval& s : spans) {
    if (!covered.empty() && s.start <= covered.back().end) {
      covered.back().end = std::max(covered.back().end, s.end);
    } else {
      covered.push_back(s);
    }
  }

  std::vector<RttmEntry> entries;
  std::size_t cell = 0;
  for (const TimeInterval& region : covered) {
    while (cell < cells.size() && cells[cell].end <= region.start) ++cell;
    for (std::size_t k = cell; k < cells.size() && cells[k].start < region.end; ++k) {
      const Seconds start = std::max(region.start, cells[k].start);
      const Seconds end = std::min(region.end, cells[k].end);
      if (end - start <= 1e-9) continue;
      const std::string speaker = speaker_name(cells[k].label);
      if (!entries.empty() && entries.back().speaker == speaker && entries.back().end() >= start - 1e-9) {
        entries.back().duration = end - entries.back().onset;
      } else {
        entries.push_back({recording_id, start, end - start, speaker, 1});
      }
    }
  }
  return entries;
}

std::string summary_json(const PipelineConfig& config, const DiarizationResult& result,
                         const std::optional<DerBreakdown>& der) {
  nlohmann::ordered_json j;
  j["mode"] = mode_name(config.mode);
  j["segments"] = result.labels.size();
  j["threshold"] = optional_number(result.report.threshold);
  j["estimated_speakers"] = result.report.estimated_speakers;
  j["num_speakers"] = result.num_clusters;
  j["num_speakers_fixed"] = config.num_speakers.has_value();
  j["cluster_sizes"] = result.cluster_sizes;
  if (der) {
    j["collar"] = config.collar;
    j["der"] = nlohmann::ordered_json::parse(der_json(*der));
  }
  return j.dump(2) + "\n";
}

std::string report_json(const PipelineConfig& config, const DiarizationResult& result, std::size_t head) {
  const auto head_of = [head](const std::vector<double>& v) {
    return std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(head, v.size())));
  };
  nlohmann::ordered_json j;
  j["mode"] = mode_name(config.mode);
  j["segments"] = result.labels.size();
  j["knn"] = config.knn;
  j["nu"] = config.nu;
  j["k_max"] = config.k_max;
  j["seed"] = config.seed;
  j["threshold"] = optional_number(result.report.threshold);
  j["ratio"] = result.report.ratio;
  j["estimated_speakers"] = result.report.estimated_speakers;
  j["num_speakers"] = result.num_clusters;
  j["eigenvalues_head"] = head_of(result.report.eigenvalues);
  j["eigengaps_head"] = head_of(result.report.eigengaps);
  auto grid = nlohmann::ordered_json::array();
  for (const GridPoint& p : result.grid) {
    nlohmann::ordered_json g;
    g["c"] = p.threshold;
    g["r"] = optional_number(p.ratio);
    g["estimated_speakers"] = p.estimated_speakers;
    g["turn_words"] = p.turn_words;
    if (!p.error.empty()) g["error"] = p.error;
    grid.push_back(std::move(g));
  }
  j["grid"] = std::move(grid);
  j["cluster_sizes"] = result.cluster_sizes;
  return j.dump(2) + "\n";
}

}  // namespace lexdiar
