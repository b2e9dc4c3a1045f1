#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lexdiar {

using Seconds = double;

// Half-open span [start, end) on the recording timeline.
struct TimeInterval {
  Seconds start = 0.0;
  Seconds end = 0.0;

  Seconds duration() const { return end - start; }
  Seconds center() const { return 0.5 * (start + end); }
  bool contains(const TimeInterval& other) const {
    return other.start >= start && other.end <= end;
  }

  // Throws InvalidInput unless end > start and start >= 0.
  static TimeInterval checked(Seconds start, Seconds end);

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

// A clustering atom. Segment lists are indexed 0..M-1 in start order.
struct Segment {
  std::size_t index = 0;
  TimeInterval interval;
};

// Inclusive index range [first, last] into a segment list.
struct SegmentSpan {
  std::size_t first = 0;
  std::size_t last = 0;

  friend bool operator==(const SegmentSpan&, const SegmentSpan&) = default;
};

inline constexpr Seconds kDefaultWindow = 1.0;
inline constexpr Seconds kDefaultShift = 0.3;
inline constexpr double kDefaultMinOverlapFraction = 0.75;

// Slides a window of `window` seconds with stride `shift` over each speech
// region. When the last stride-aligned window stops short of the region end,
// one more window anchored at region.end - window is appended. Regions
// shorter than the window produce a single segment covering the region.
// Regions must be sorted and non-overlapping.
std::vector<Segment> uniform_segments(std::span<const TimeInterval> regions,
                                      Seconds window = kDefaultWindow,
                                      Seconds shift = kDefaultShift);

Seconds overlap_duration(const TimeInterval& a, const TimeInterval& b);

// First and last segment that fall inside `utterance`: a segment qualifies if
// it overlaps the utterance by at least min_overlap_fraction of its own length
// or lies entirely inside it.
std::optional<SegmentSpan> segments_in_utterance(std::span<const Segment> segments,
                                                 const TimeInterval& utterance,
                                                 double min_overlap_fraction = kDefaultMinOverlapFraction);

}  // namespace lexdiar
