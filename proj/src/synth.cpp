#include "lexdiar/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

#include "lexdiar/errors.hpp"

namespace lexdiar {

namespace {

constexpr Seconds kTick = 1e-3;
constexpr double kTurnProbStd = 0.05;

Seconds quantize(Seconds t) { return std::round(t / kTick) * kTick; }

void validate(const SynthSpec& spec) {
  if (spec.num_speakers == 0) throw InvalidInput("synth needs at least one speaker");
  if (!(spec.duration > 0.0)) throw InvalidInput("synth duration must be positive");
  if (spec.embedding_dim == 0) throw InvalidInput("embedding dimension must be positive");
  if (spec.num_speakers - 1 > spec.embedding_dim) {
    throw InvalidInput(std::to_string(spec.num_speakers) + " equidistant speaker means do not fit in " +
                       std::to_string(spec.embedding_dim) + " dimensions");
  }
  if (!(spec.cluster_separation >= 0.0) || !(spec.embedding_noise_std >= 0.0)) {
    throw InvalidInput("cluster separation and embedding noise must be non-negative");
  }
  if (!(0.0 <= spec.turn_prob_miss && spec.turn_prob_miss < spec.turn_prob_hit && spec.turn_prob_hit <= 1.0)) {
    throw InvalidInput("turn probabilities need 0 <= miss < hit <= 1");
  }
  if (!(spec.words_per_second > 0.0)) throw InvalidInput("words_per_second must be positive");
  if (!(spec.mean_turn_length > 0.0)) throw InvalidInput("mean_turn_length must be positive");
}

// Exponential turn lengths on a millisecond grid, speakers never repeating
// back to back.
std::vector<SpeakerTurn> draw_turns(const SynthSpec& spec, std::mt19937_64& rng) {
  const std::size_t k = spec.num_speakers;
  const Seconds total = quantize(spec.duration);
  if (k == 1) return {{{0.0, total}, 0}};

  std::exponential_distribution<double> length(1.0 / spec.mean_turn_length);
  std::uniform_int_distribution<std::size_t> first(0, k - 1);
  std::uniform_int_distribution<std::size_t> hop(1, k - 1);

  std::vector<SpeakerTurn> turns;
  std::size_t speaker = first(rng);
  Seconds t = 0.0;
  while (t < total) {
    Seconds end = quantize(t + length(rng));
    if (end <= t) continue;
    if (end > total - kTick) end = total;
    turns.push_back({{t, end}, speaker});
    t = end;
    speaker = (speaker + hop(rng)) % k;
  }
  return turns;
}

// Vertices of a regular simplex with the given edge length, in the first
// k-1 coordinates.
Eigen::MatrixXd simplex_means(std::size_t k, std::size_t dim, double edge) {
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(dim));
  const double scale = edge / std::sqrt(2.0);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const double norm = std::sqrt(static_cast<double>((j + 1) * (j + 2)));
    for (std::size_t s = 0; s <= j; ++s) means(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = scale / norm;
    means(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = -scale * static_cast<double>(j + 1) / norm;
  }
  return means;
}

// Majority owner; on a tie the later turn wins, which is also the owner of
// the segment midpoint when a single boundary splits it in half.
std::size_t majority_speaker(const TimeInterval& segment, std::span<const SpeakerTurn> turns,
                             std::size_t num_speakers) {
  std::vector<Seconds> share(num_speakers, 0.0);
  for (const SpeakerTurn& turn : turns) share[turn.speaker] += overlap_duration(segment, turn.interval);
  std::size_t best = turns.front().speaker;
  Seconds best_share = -1.0;
  for (const SpeakerTurn& turn : turns) {
    if (overlap_duration(segment, turn.interval) <= 0.0) continue;
    const Seconds s = share[turn.speaker];
    if (s >= best_share - 1e-12) {
      best = turn.speaker;
      best_share = std::max(best_share, s);
    }
  }
  return best;
}

}  // namespace

SynthConversation generate(const SynthSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  SynthConversation conv;

  conv.turns = draw_turns(spec, rng);
  for (const SpeakerTurn& turn : conv.turns) {
    conv.reference.push_back({spec.recording_id, turn.interval.start, turn.interval.duration(),
                              "S" + std::to_string(turn.speaker), 1});
  }

  const std::array<TimeInterval, 1> speech{TimeInterval{0.0, conv.turns.back().interval.end}};
  conv.segments = uniform_segments(speech, kDefaultWindow, kDefaultShift);
  for (const Segment& segment : conv.segments) {
    conv.segment_speakers.push_back(majority_speaker(segment.interval, conv.turns, spec.num_speakers));
  }

  const Eigen::MatrixXd means = simplex_means(spec.num_speakers, spec.embedding_dim,
                                              spec.cluster_separation * spec.embedding_noise_std);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(conv.segments.size()), static_cast<Eigen::Index>(spec.embedding_dim));
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    vectors.row(i) = means.row(static_cast<Eigen::Index>(conv.segment_speakers[static_cast<std::size_t>(i)]));
    for (Eigen::Index d = 0; d < vectors.cols(); ++d) vectors(i, d) += spec.embedding_noise_std * noise(rng);
  }
  conv.embeddings = EmbeddingSet(std::move(vectors));

  static constexpr std::array<const char*, 12> kVocabulary{
      "yeah", "so", "i", "think", "that", "you", "know", "we", "were", "going", "to", "right"};
  const Seconds total = conv.turns.back().interval.end;
  const Seconds spacing = 1.0 / spec.words_per_second;
  const Seconds length = std::max(kTick, quantize(0.8 * spacing));
  for (std::size_t i = 0;; ++i) {
    const Seconds start = quantize(static_cast<double>(i) * spacing);
    if (start + length > total) break;
    conv.words.push_back({kVocabulary[i % kVocabulary.size()], {start, start + length}, 0.0});
  }

  std::set<std::size_t> turn_words;
  for (std::size_t t = 1; t < conv.turns.size(); ++t) {
    const Seconds boundary = conv.turns[t].interval.start;
    const auto it = std::lower_bound(conv.words.begin(), conv.words.end(), boundary,
                                     [](const Word& w, Seconds b) { return w.interval.start < b; });
    if (it != conv.words.end()) turn_words.insert(static_cast<std::size_t>(it - conv.words.begin()));
  }
  conv.turn_word_indices.assign(turn_words.begin(), turn_words.end());

  std::normal_distribution<double> jitter(0.0, kTurnProbStd);
  for (std::size_t i = 0; i < conv.words.size(); ++i) {
    const double mean = turn_words.contains(i) ? spec.turn_prob_hit : spec.turn_prob_miss;
    conv.words[i].turn_prob = std::clamp(mean + jitter(rng), 0.0, 1.0);
  }
  return conv;
}

}  // namespace lexdiar
