#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexdiar/timeline.hpp"

namespace lexdiar {

inline constexpr Seconds kDefaultCollar = 0.25;

struct RttmEntry {
  std::string recording_id;
  Seconds onset = 0.0;
  Seconds duration = 0.0;
  std::string speaker;
  int channel = 1;

  Seconds end() const { return onset + duration; }
};

struct DerBreakdown {
  Seconds missed = 0.0;
  Seconds false_alarm = 0.0;
  Seconds speaker_error = 0.0;
  Seconds scored_speech = 0.0;

  Seconds errors() const { return missed + false_alarm + speaker_error; }
  // Throws InvalidInput when nothing was scored.
  double der() const;
};

// Reads the SPEAKER lines of an RTTM file; other line types are skipped.
// Throws ParseError naming the offending line.
std::vector<RttmEntry> parse_rttm(std::string_view text);

// One SPEAKER line per entry. Both ends are rounded to milliseconds;
// entries that vanish under rounding are dropped.
std::string format_rttm(std::span<const RttmEntry> entries);

// md-eval style diarization error: +-collar around every reference speaker
// boundary is not scored, overlapping reference speakers are scored
// individually, and reference/hypothesis speakers are paired by the
// one-to-one mapping with the most jointly scored time. Recordings are
// scored independently and summed. Throws InvalidInput when no speech is
// scored or a hypothesis recording has no reference.
DerBreakdown compute_der(std::span<const RttmEntry> reference, std::span<const RttmEntry> hypothesis,
                         Seconds collar = kDefaultCollar);

std::string der_json(const DerBreakdown& breakdown);
std::string der_table(const DerBreakdown& breakdown);

}  // namespace lexdiar
