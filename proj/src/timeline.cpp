#include "lexdiar/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lexdiar/errors.hpp"

namespace lexdiar {

namespace {

// Slack for stride arithmetic such as 0.3 * 3 + 1.0 vs 1.9.
constexpr double kTimeEps = 1e-9;

}  // namespace

TimeInterval TimeInterval::checked(Seconds start, Seconds end) {
  if (!std::isfinite(start) || !std::isfinite(end)) {
    throw InvalidInput("time interval bounds must be finite");
  }
  if (start < 0.0) {
    throw InvalidInput("time interval starts before 0: " + std::to_string(start));
  }
  if (!(end > start)) {
    throw InvalidInput("time interval [" + std::to_string(start) + ", " + std::to_string(end) +
                       "] has non-positive duration");
  }
  return {start, end};
}

std::vector<Segment> uniform_segments(std::span<const TimeInterval> regions, Seconds window,
                                      Seconds shift) {
  if (!(window > 0.0) || !(shift > 0.0)) {
    throw InvalidInput("window and shift must be positive");
  }
  std::vector<Segment> segments;
  const auto emit = [&segments](Seconds start, Seconds end) {
    segments.push_back({segments.size(), {start, end}});
  };

  for (std::size_t r = 0; r < regions.size(); ++r) {
    const TimeInterval& region = regions[r];
    if (!(region.duration() > 0.0)) {
      throw InvalidInput("speech region " + std::to_string(r) + " has non-positive duration");
    }
    if (r > 0 && region.start < regions[r - 1].end - kTimeEps) {
      throw InvalidInput("speech regions must be sorted and non-overlapping");
    }
    if (region.duration() <= window + kTimeEps) {
      emit(region.start, region.end);
      continue;
    }
    const auto strides =
        static_cast<std::size_t>(std::floor((region.duration() - window) / shift + kTimeEps)) + 1;
    for (std::size_t i = 0; i < strides; ++i) {
      const Seconds start = region.start + static_cast<double>(i) * shift;
      emit(start, start + window);
    }
    if (segments.back().interval.end < region.end - kTimeEps) {
      emit(region.end - window, region.end);
    }
  }
  return segments;
}

Seconds overlap_duration(const TimeInterval& a, const TimeInterval& b) {
  return std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
}

std::optional<SegmentSpan> segments_in_utterance(std::span<const Segment> segments,
                                                 const TimeInterval& utterance,
                                                 double min_overlap_fraction) {
  std::optional<SegmentSpan> span;
  for (const Segment& segment : segments) {
    if (segment.interval.start >= utterance.end) break;
    const Seconds overlap = overlap_duration(segment.interval, utterance);
    const bool qualifies =
        overlap >= min_overlap_fraction * segment.interval.duration() - kTimeEps ||
        utterance.contains(segment.interval);
    if (!qualifies) continue;
    if (!span) {
      span = SegmentSpan{segment.index, segment.index};
    } else {
      span->last = segment.index;
    }
  }
  return span;
}

}  // namespace lexdiar
