#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "lexdiar/errors.hpp"
#include "lexdiar/lexical_affinity.hpp"
#include "support/oracles.hpp"

using namespace lexdiar;

namespace {

// Words 0.4 s apart, 0.3 s long.
std::vector<Word> make_words(const std::vector<double>& probs, double t0 = 0.0, double step = 0.4) {
  std::vector<Word> out;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double s = t0 + step * static_cast<double>(i);
    out.push_back({"w" + std::to_string(i), {s, s + 0.75 * step}, probs[i]});
  }
  return out;
}

std::vector<Word> make_words(const std::vector<std::string>& text, const std::vector<double>& probs) {
  auto out = make_words(probs);
  for (std::size_t i = 0; i < text.size(); ++i) out[i].text = text[i];
  return out;
}

Utterance span(std::size_t a, std::size_t b) { return Utterance{a, b, {0.0, 1.0}}; }

std::vector<std::pair<std::size_t, std::size_t>> spans_of(const std::vector<Utterance>& u) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& x : u) out.emplace_back(x.first_word, x.last_word);
  return out;
}

using Spans = std::vector<std::pair<std::size_t, std::size_t>>;

std::vector<Segment> segments_at(std::size_t m) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < m; ++i) segs.push_back({i, {static_cast<double>(i), static_cast<double>(i) + 1.0}});
  return segs;
}

}  // namespace

TEST_CASE("pick_turn_words") {
  const auto w = make_words({0.1, 0.05, 0.6, 0.2});
  CHECK(pick_turn_words(w, 0.3) == std::vector<std::size_t>{2});
  CHECK(pick_turn_words(w, 1.0).empty());
  CHECK(pick_turn_words(w, 0.0) == std::vector<std::size_t>{0, 1, 2, 3});
  // strictly greater
  CHECK(pick_turn_words(w, 0.6).empty());
}

TEST_CASE("cut_into_utterances") {
  const auto w = make_words(std::vector<double>(6, 0.0));
  const std::vector<std::size_t> turns{2, 4};
  CHECK(spans_of(cut_into_utterances(w, turns)) == Spans{{0, 1}, {2, 3}, {4, 5}});
  CHECK(spans_of(cut_into_utterances(w, {})) == Spans{{0, 5}});
  const std::vector<std::size_t> first{0};
  CHECK(spans_of(cut_into_utterances(w, first)) == Spans{{0, 5}});
  CHECK(cut_into_utterances(std::vector<Word>{}, {}).empty());
}

TEST_CASE("cut_into_utterances hulls word intervals") {
  const auto w = make_words(std::vector<double>(4, 0.0));
  const std::vector<std::size_t> turns{2};
  const auto u = cut_into_utterances(w, turns);
  REQUIRE(u.size() == 2);
  CHECK(u[1].interval.start == w[2].interval.start);
  CHECK(u[1].interval.end == w[3].interval.end);
}

TEST_CASE("filter_single_word") {
  const std::vector<Utterance> u{span(0, 1), span(2, 2), span(3, 5)};
  CHECK(spans_of(filter_single_word(u)) == Spans{{0, 1}, {3, 5}});
  const std::vector<Utterance> singles{span(0, 0), span(1, 1)};
  CHECK(filter_single_word(singles).empty());
}

TEST_CASE("filter_single_word drops the isolated replies in a short exchange") {
  const std::vector<std::string> text{"how", "are", "you", "well", "i", "am", "fine", "thanks",
                                      "great", "so", "what", "now"};
  const std::vector<double> probs{0.1, 0.02, 0.05, 0.8, 0.7, 0.1, 0.05, 0.1, 0.9, 0.6, 0.1, 0.1};
  const auto w = make_words(text, probs);
  const auto turns = pick_turn_words(w, 0.3);
  CHECK(turns == std::vector<std::size_t>{3, 4, 8, 9});
  const auto kept = filter_single_word(cut_into_utterances(w, turns));
  for (const auto& u : kept) {
    for (std::size_t i = u.first_word; i <= u.last_word; ++i) {
      CHECK(w[i].text != "well");
      CHECK(w[i].text != "great");
    }
  }
  CHECK(spans_of(kept) == Spans{{0, 2}, {4, 7}, {9, 11}});
  CHECK(spans_of(oversegment(kept, w, 3)) == Spans{{0, 2}, {4, 6}, {7, 7}, {9, 11}});
}

TEST_CASE("oversegment") {
  const auto w = make_words(std::vector<double>(8, 0.0));
  const std::vector<Utterance> seven{Utterance{0, 6, {w[0].interval.start, w[6].interval.end}}};
  const auto chunks = oversegment(seven, w, 3);
  CHECK(spans_of(chunks) == Spans{{0, 2}, {3, 5}, {6, 6}});
  CHECK(chunks[1].interval.start == w[3].interval.start);
  CHECK(chunks[1].interval.end == w[5].interval.end);

  const std::vector<Utterance> three{Utterance{0, 2, {w[0].interval.start, w[2].interval.end}}};
  CHECK(spans_of(oversegment(three, w, 3)) == Spans{{0, 2}});
  const std::vector<Utterance> four{Utterance{0, 3, {w[0].interval.start, w[3].interval.end}}};
  CHECK(spans_of(oversegment(four, w, 2)) == Spans{{0, 1}, {2, 3}});

  CHECK_THROWS_AS(oversegment(four, w, 1), InvalidInput);
  CHECK_THROWS_AS(oversegment(four, w, 0), InvalidInput);
}

TEST_CASE("build_q: single block") {
  const auto segs = segments_at(8);
  const std::vector<Utterance> u{Utterance{0, 1, {3.0, 7.0}}};
  const auto q = build_q(u, segs);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(8, 8);
  e.block(3, 3, 4, 4).setOnes();
  CHECK(q == e);
}

TEST_CASE("build_q: empty and overlapping blocks") {
  const auto segs = segments_at(8);
  CHECK(build_q({}, segs) == Eigen::MatrixXd::Zero(8, 8));

  const std::vector<Utterance> u{Utterance{0, 1, {2.0, 5.0}}, Utterance{2, 3, {4.0, 7.0}}};
  const auto q = build_q(u, segs);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(8, 8);
  e.block(2, 2, 3, 3).setOnes();
  e.block(4, 4, 3, 3).setOnes();
  CHECK(q == e);
  CHECK(q(2, 6) == 0.0);
}

TEST_CASE("build_q: utterance without qualifying segments adds nothing") {
  const auto segs = segments_at(4);
  const std::vector<Utterance> u{Utterance{0, 1, {1.1, 1.6}}};
  CHECK(build_q(u, segs) == Eigen::MatrixXd::Zero(4, 4));
}

TEST_CASE("property: monotone turn sets") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(50);
    for (auto& x : p) x = u(rng);
    const auto w = make_words(p);
    double c1 = u(rng), c2 = u(rng);
    if (c1 > c2) std::swap(c1, c2);
    const auto hi = pick_turn_words(w, c2);
    const auto lo = pick_turn_words(w, c1);
    CHECK(std::includes(lo.begin(), lo.end(), hi.begin(), hi.end()));
  }
}

TEST_CASE("property: cut round-trip and oversegment chunk bounds") {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution coin(0.25);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 60;
    const auto w = make_words(std::vector<double>(n, 0.0));
    std::vector<std::size_t> turns;
    for (std::size_t i = 0; i < n; ++i)
      if (coin(rng)) turns.push_back(i);
    const auto utts = cut_into_utterances(w, turns);
    std::size_t next = 0;
    for (const auto& x : utts) {
      CHECK(x.first_word == next);
      next = x.last_word + 1;
    }
    CHECK(next == n);

    const std::size_t nu = 2 + static_cast<std::size_t>(trial) % 8;
    const auto chunks = oversegment(utts, w, nu);
    std::size_t total = 0, expected_chunks = 0;
    for (const auto& x : utts) expected_chunks += (x.word_count() + nu - 1) / nu;
    for (const auto& x : chunks) {
      CHECK(x.word_count() <= nu);
      total += x.word_count();
    }
    CHECK(total == n);
    CHECK(chunks.size() == expected_chunks);
  }
}

TEST_CASE("property: Q is a union of contiguous diagonal blocks and matches the oracle") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<TimeInterval> region{{0.0, 40.0}};
  const auto segs = uniform_segments(region);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(90);
    for (auto& x : p) x = u(rng) < 0.15 ? 0.9 : 0.05;
    const auto w = make_words(p, 0.2, 0.42);
    const double c = u(rng);
    const std::size_t nu = 2 + static_cast<std::size_t>(trial) % 8;
    const auto q = lexical_affinity(w, segs, c, {nu, 0.75});
    CHECK(q == oracle::reference_q(w, segs, c, nu));
    CHECK(is_symmetric(q));
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      for (Eigen::Index j = 0; j < q.cols(); ++j) {
        CHECK((q(i, j) == 0.0 || q(i, j) == 1.0));
        if (q(i, j) == 1.0) {
          // Every entry between i and j along the row is set, and both diagonals.
          const auto lo = std::min(i, j), hi = std::max(i, j);
          CHECK(q(i, i) == 1.0);
          CHECK(q(j, j) == 1.0);
          for (Eigen::Index k = lo; k <= hi; ++k) CHECK(q(k, k) == 1.0);
        }
      }
    }
  }
}
