#include "lexdiar/lexical_affinity.hpp"

#include <algorithm>

#include "lexdiar/errors.hpp"

namespace lexdiar {

namespace {

Utterance make_utterance(std::span<const Word> words, std::size_t first, std::size_t last) {
  TimeInterval hull{words[first].interval.start, words[first].interval.end};
  for (std::size_t i = first + 1; i <= last; ++i) {
    hull.start = std::min(hull.start, words[i].interval.start);
    hull.end = std::max(hull.end, words[i].interval.end);
  }
  return {first, last, hull};
}

}  // namespace

std::vector<std::size_t> pick_turn_words(std::span<const Word> words, double c) {
  std::vector<std::size_t> turns;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].turn_prob > c) turns.push_back(i);
  }
  return turns;
}

std::vector<Utterance> cut_into_utterances(std::span<const Word> words,
                                           std::span<const std::size_t> turn_indices) {
  std::vector<Utterance> utterances;
  if (words.empty()) return utterances;
  std::size_t begin = 0;
  for (const std::size_t cut : turn_indices) {
    if (cut >= words.size()) throw InvalidInput("turn word index out of range");
    if (cut < begin) throw InvalidInput("turn word indices must be ascending");
    if (cut == begin) continue;
    utterances.push_back(make_utterance(words, begin, cut - 1));
    begin = cut;
  }
  utterances.push_back(make_utterance(words, begin, words.size() - 1));
  return utterances;
}

std::vector<Utterance> filter_single_word(std::span<const Utterance> utterances) {
  std::vector<Utterance> kept;
  std::copy_if(utterances.begin(), utterances.end(), std::back_inserter(kept),
               [](const Utterance& u) { return u.word_count() > 1; });
  return kept;
}

std::vector<Utterance> oversegment(std::span<const Utterance> utterances,
                                   std::span<const Word> words, std::size_t max_words) {
  if (max_words < 2) {
    throw InvalidInput("max utterance length must be at least 2 words, got " +
                       std::to_string(max_words));
  }
  std::vector<Utterance> chunks;
  for (const Utterance& u : utterances) {
    for (std::size_t first = u.first_word; first <= u.last_word; first += max_words) {
      const std::size_t last = std::min(u.last_word, first + max_words - 1);
      chunks.push_back(make_utterance(words, first, last));
    }
  }
  return chunks;
}

AffinityMatrix build_q(std::span<const Utterance> utterances, std::span<const Segment> segments,
                       double min_overlap_fraction) {
  const auto m = static_cast<Eigen::Index>(segments.size());
  AffinityMatrix q = AffinityMatrix::Zero(m, m);
  for (const Utterance& u : utterances) {
    const auto span = segments_in_utterance(segments, u.interval, min_overlap_fraction);
    if (!span) continue;
    const auto first = static_cast<Eigen::Index>(span->first);
    const auto size = static_cast<Eigen::Index>(span->last - span->first + 1);
    q.block(first, first, size, size).setOnes();
  }
  return q;
}

std::vector<Utterance> lexical_utterances(std::span<const Word> words, double c,
                                          std::size_t max_utterance_words) {
  const auto turns = pick_turn_words(words, c);
  const auto utterances = filter_single_word(cut_into_utterances(words, turns));
  return oversegment(utterances, words, max_utterance_words);
}

AffinityMatrix lexical_affinity(std::span<const Word> words, std::span<const Segment> segments,
                                double c, const LexicalParams& params) {
  return build_q(lexical_utterances(words, c, params.max_utterance_words), segments,
                 params.min_overlap_fraction);
}

}  // namespace lexdiar
