#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lexdiar/acoustic_affinity.hpp"
#include "lexdiar/lexical_affinity.hpp"
#include "lexdiar/scoring.hpp"
#include "lexdiar/timeline.hpp"

namespace lexdiar {

// Knobs for a synthetic conversation.
struct SynthSpec {
  std::uint64_t seed = 42;
  std::size_t num_speakers = 2;
  Seconds duration = 300.0;
  std::size_t embedding_dim = 8;
  // Distance between speaker means, in units of embedding_noise_std.
  double cluster_separation = 10.0;
  double embedding_noise_std = 0.1;
  double turn_prob_hit = 0.9;
  double turn_prob_miss = 0.05;
  double words_per_second = 2.5;
  Seconds mean_turn_length = 6.0;
  std::string recording_id = "rec1";
};

struct SpeakerTurn {
  TimeInterval interval;
  std::size_t speaker = 0;
};

struct SynthConversation {
  std::vector<SpeakerTurn> turns;
  std::vector<Segment> segments;
  std::vector<std::size_t> segment_speakers;  // true speaker per segment
  EmbeddingSet embeddings;
  std::vector<Word> words;
  std::vector<std::size_t> turn_word_indices;  // first word after each true turn
  std::vector<RttmEntry> reference;
};

// Deterministic for a fixed spec. Throws InvalidInput when the spec is
// infeasible (e.g. more equidistant speaker means than the dimension allows).
SynthConversation generate(const SynthSpec& spec);

}  // namespace lexdiar
