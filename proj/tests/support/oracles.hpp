#pragma once

// Slow, independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lexdiar/lexical_affinity.hpp"
#include "lexdiar/scoring.hpp"
#include "lexdiar/timeline.hpp"

namespace oracle {

// Cyclic Jacobi rotations; eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int sweeps = 100) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> values(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(values.begin(), values.end());
  return values;
}

// Breadth-first traversal over nonzero off-diagonal entries.
inline std::size_t connected_components(const Eigen::MatrixXd& adjacency) {
  const Eigen::Index n = adjacency.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::size_t components = 0;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    ++components;
    std::queue<Eigen::Index> frontier;
    frontier.push(s);
    seen[static_cast<std::size_t>(s)] = true;
    while (!frontier.empty()) {
      const Eigen::Index u = frontier.front();
      frontier.pop();
      for (Eigen::Index v = 0; v < n; ++v) {
        if (v != u && adjacency(u, v) != 0.0 && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          frontier.push(v);
        }
      }
    }
  }
  return components;
}

// Q built straight from the definition: one all-ones square per utterance
// over the segments it covers by >= fraction of their length.
inline Eigen::MatrixXd reference_q(const std::vector<lexdiar::Word>& words,
                                   const std::vector<lexdiar::Segment>& segments, double c, std::size_t nu,
                                   double fraction = 0.75) {
  std::vector<std::vector<std::size_t>> utterances;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].turn_prob > c && !current.empty()) {
      utterances.push_back(current);
      current.clear();
    }
    current.push_back(i);
  }
  if (!current.empty()) utterances.push_back(current);

  const auto m = static_cast<Eigen::Index>(segments.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
  for (const auto& u : utterances) {
    if (u.size() < 2) continue;
    for (std::size_t off = 0; off < u.size(); off += nu) {
      const std::size_t last = std::min(u.size(), off + nu) - 1;
      const double start = words[u[off]].interval.start;
      const double end = words[u[last]].interval.end;
      std::vector<Eigen::Index> hits;
      for (const auto& s : segments) {
        const double ov = std::max(0.0, std::min(end, s.interval.end) - std::max(start, s.interval.start));
        const bool inside = s.interval.start >= start && s.interval.end <= end;
        if (ov >= fraction * s.interval.duration() - 1e-9 || inside) hits.push_back(static_cast<Eigen::Index>(s.index));
      }
      if (hits.empty()) continue;
      for (Eigen::Index i = hits.front(); i <= hits.back(); ++i)
        for (Eigen::Index j = hits.front(); j <= hits.back(); ++j) q(i, j) = 1.0;
    }
  }
  return q;
}

struct FrameDer {
  double missed = 0, false_alarm = 0, speaker_error = 0, scored = 0;
  double der() const { return (missed + false_alarm + speaker_error) / scored; }
};

// 10 ms frames, collar applied per frame, speaker mapping by exhaustive
// search over all injective hyp -> ref maps. Single recording.
inline FrameDer frame_level_der(const std::vector<lexdiar::RttmEntry>& ref,
                                const std::vector<lexdiar::RttmEntry>& hyp, double collar, double frame = 0.01) {
  std::map<std::string, int> rid, hid;
  for (const auto& e : ref) rid.emplace(e.speaker, static_cast<int>(rid.size()));
  for (const auto& e : hyp) hid.emplace(e.speaker, static_cast<int>(hid.size()));
  double horizon = 0;
  for (const auto& e : ref) horizon = std::max(horizon, e.end() + collar);
  for (const auto& e : hyp) horizon = std::max(horizon, e.end());
  const auto frames = static_cast<std::size_t>(std::ceil(horizon / frame)) + 1;

  struct Frame {
    std::vector<int> r, h;
  };
  std::vector<Frame> scored;
  for (std::size_t f = 0; f < frames; ++f) {
    const double t = (static_cast<double>(f) + 0.5) * frame;
    bool excluded = false;
    Frame fr;
    std::set<int> rs, hs;
    for (const auto& e : ref) {
      if (std::abs(t - e.onset) < collar || std::abs(t - e.end()) < collar) excluded = true;
      if (t >= e.onset && t < e.end()) rs.insert(rid.at(e.speaker));
    }
    for (const auto& e : hyp)
      if (t >= e.onset && t < e.end()) hs.insert(hid.at(e.speaker));
    if (excluded) continue;
    fr.r.assign(rs.begin(), rs.end());
    fr.h.assign(hs.begin(), hs.end());
    scored.push_back(fr);
  }

  // Exhaustive mapping: permute ref ids padded with "unmapped" slots.
  const int nr = static_cast<int>(rid.size());
  const int nh = static_cast<int>(hid.size());
  std::vector<int> slots(static_cast<std::size_t>(std::max(nr, nh)));
  std::iota(slots.begin(), slots.end(), 0);
  long best_correct = -1;
  std::vector<int> best_map;
  do {
    long correct = 0;
    for (const auto& fr : scored)
      for (int h : fr.h) {
        const int r = slots[static_cast<std::size_t>(h)];
        if (r < nr && std::binary_search(fr.r.begin(), fr.r.end(), r)) ++correct;
      }
    if (correct > best_correct) {
      best_correct = correct;
      best_map = slots;
    }
  } while (std::next_permutation(slots.begin(), slots.end()));

  FrameDer out;
  for (const auto& fr : scored) {
    const auto nref = static_cast<long>(fr.r.size());
    const auto nhyp = static_cast<long>(fr.h.size());
    long correct = 0;
    for (int h : fr.h) {
      const int r = best_map[static_cast<std::size_t>(h)];
      if (r < nr && std::binary_search(fr.r.begin(), fr.r.end(), r)) ++correct;
    }
    out.scored += static_cast<double>(nref) * frame;
    out.missed += static_cast<double>(std::max(0L, nref - nhyp)) * frame;
    out.false_alarm += static_cast<double>(std::max(0L, nhyp - nref)) * frame;
    out.speaker_error += static_cast<double>(std::min(nref, nhyp) - correct) * frame;
  }
  return out;
}

// Random RTTM on [0, horizon): alternating turns with optional overlap.
inline std::vector<lexdiar::RttmEntry> random_rttm(std::mt19937_64& rng, const std::string& prefix,
                                                   int speakers, double horizon, double overlap_prob) {
  std::uniform_real_distribution<double> len(0.5, 4.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> who(0, speakers - 1);
  std::vector<lexdiar::RttmEntry> out;
  double t = u(rng) * 0.5;
  while (t < horizon) {
    const double d = std::min(len(rng), horizon - t);
    if (d < 0.05) break;
    const int s = who(rng);
    out.push_back({"rec", std::round(t * 1000) / 1000, std::round(d * 1000) / 1000, prefix + std::to_string(s), 1});
    if (u(rng) < overlap_prob) {
      const int s2 = (s + 1) % speakers;
      const double o = std::min(d, 0.3 + u(rng));
      out.push_back({"rec", std::round((t + d - o) * 1000) / 1000, std::round(o * 1000) / 1000,
                     prefix + std::to_string(s2), 1});
    }
    t += d + (u(rng) < 0.3 ? u(rng) : 0.0);
  }
  return out;
}

}  // namespace oracle
