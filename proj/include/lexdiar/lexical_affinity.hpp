#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lexdiar/affinity.hpp"
#include "lexdiar/timeline.hpp"

namespace lexdiar {

inline constexpr std::size_t kDefaultMaxUtteranceWords = 3;

// ASR token with its boundary and the estimated probability that a speaker
// change happens at this word.
struct Word {
  std::string text;
  TimeInterval interval;
  double turn_prob = 0.0;
};

// Inclusive run of words [first_word, last_word]; interval is the hull of
// the member word intervals.
struct Utterance {
  std::size_t first_word = 0;
  std::size_t last_word = 0;
  TimeInterval interval;

  std::size_t word_count() const { return last_word - first_word + 1; }
};

struct LexicalParams {
  std::size_t max_utterance_words = kDefaultMaxUtteranceWords;  // nu
  double min_overlap_fraction = kDefaultMinOverlapFraction;
};

// Indices of words whose turn probability is strictly greater than c.
std::vector<std::size_t> pick_turn_words(std::span<const Word> words, double c);

// Starts a new utterance at every turn word. Words before the first turn
// word form the leading utterance.
std::vector<Utterance> cut_into_utterances(std::span<const Word> words,
                                           std::span<const std::size_t> turn_indices);

std::vector<Utterance> filter_single_word(std::span<const Utterance> utterances);

// Greedy left-to-right split of every utterance into chunks of at most
// max_words words. Throws InvalidInput when max_words < 2.
std::vector<Utterance> oversegment(std::span<const Utterance> utterances,
                                   std::span<const Word> words, std::size_t max_words);

// Lexical adjacency: every utterance whose segment range is (m, n) sets the
// square block m..n to one.
AffinityMatrix build_q(std::span<const Utterance> utterances, std::span<const Segment> segments,
                       double min_overlap_fraction = kDefaultMinOverlapFraction);

// The full word-stream pipeline for one threshold c.
std::vector<Utterance> lexical_utterances(std::span<const Word> words, double c,
                                          std::size_t max_utterance_words);
AffinityMatrix lexical_affinity(std::span<const Word> words, std::span<const Segment> segments,
                                double c, const LexicalParams& params = {});

}  // namespace lexdiar
