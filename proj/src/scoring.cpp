#include "lexdiar/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lexdiar/assignment.hpp"
#include "lexdiar/errors.hpp"

namespace lexdiar {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t begin = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > begin) fields.push_back(line.substr(begin, pos - begin));
  }
  return fields;
}

double parse_number(std::string_view field, const char* name, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError(std::string("bad ") + name + " '" + std::string(field) + "'", line);
  }
  return value;
}

struct Interval {
  Seconds start;
  Seconds end;
};

std::vector<Interval> merge(std::vector<Interval> spans) {
  std::sort(spans.begin(), spans.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
  std::vector<Interval> merged;
  for (const Interval& s : spans) {
    if (!merged.empty() && s.start <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, s.end);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

struct Event {
  Seconds time;
  int delta;
  std::size_t speaker;
};

// Per-speaker activity counts, swept forward through sorted change points.
class ActivityTracker {
 public:
  ActivityTracker(std::span<const RttmEntry* const> entries, const std::map<std::string, std::size_t>& ids)
      : active_(ids.size(), 0) {
    for (const RttmEntry* e : entries) {
      const std::size_t id = ids.at(e->speaker);
      events_.push_back({e->onset, +1, id});
      events_.push_back({e->end(), -1, id});
    }
    std::sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
  }

  void advance_to(Seconds t) {
    while (next_ < events_.size() && events_[next_].time <= t) {
      active_[events_[next_].speaker] += events_[next_].delta;
      ++next_;
    }
  }

  std::vector<std::size_t> speakers() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < active_.size(); ++s) {
      if (active_[s] > 0) out.push_back(s);
    }
    return out;
  }

 private:
  std::vector<Event> events_;
  std::vector<int> active_;
  std::size_t next_ = 0;
};

struct ScoredPiece {
  Seconds duration;
  std::vector<std::size_t> ref;
  std::vector<std::size_t> hyp;
};

std::map<std::string, std::size_t> speaker_ids(std::span<const RttmEntry* const> entries) {
  std::map<std::string, std::size_t> ids;
  for (const RttmEntry* e : entries) ids.emplace(e->speaker, ids.size());
  return ids;
}

DerBreakdown score_recording(std::span<const RttmEntry* const> ref, std::span<const RttmEntry* const> hyp,
                             Seconds collar) {
  const auto ref_ids = speaker_ids(ref);
  const auto hyp_ids = speaker_ids(hyp);

  std::vector<Interval> no_score;
  std::set<Seconds> cuts;
  for (const RttmEntry* e : ref) {
    cuts.insert(e->onset);
    cuts.insert(e->end());
    if (collar > 0.0) {
      for (const Seconds boundary : {e->onset, e->end()}) {
        no_score.push_back({boundary - collar, boundary + collar});
        cuts.insert(boundary - collar);
        cuts.insert(boundary + collar);
      }
    }
  }
  for (const RttmEntry* e : hyp) {
    cuts.insert(e->onset);
    cuts.insert(e->end());
  }
  no_score = merge(std::move(no_score));

  ActivityTracker ref_activity(ref, ref_ids);
  ActivityTracker hyp_activity(hyp, hyp_ids);
  std::vector<ScoredPiece> pieces;
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ref_ids.size()),
                                                static_cast<Eigen::Index>(hyp_ids.size()));
  std::size_t zone = 0;
  for (auto it = cuts.begin(); it != cuts.end() && std::next(it) != cuts.end(); ++it) {
    const Seconds start = *it;
    const Seconds end = *std::next(it);
    ref_activity.advance_to(start);
    hyp_activity.advance_to(start);
    const Seconds mid = 0.5 * (start + end);
    while (zone < no_score.size() && no_score[zone].end <= mid) ++zone;
    if (zone < no_score.size() && no_score[zone].start <= mid) continue;

    ScoredPiece piece{end - start, ref_activity.speakers(), hyp_activity.speakers()};
    if (piece.ref.empty() && piece.hyp.empty()) continue;
    for (const std::size_t r : piece.ref) {
      for (const std::size_t h : piece.hyp) {
        joint(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(h)) += piece.duration;
      }
    }
    pieces.push_back(std::move(piece));
  }

  const std::vector<int> mapping = max_weight_assignment(joint);
  DerBreakdown out;
  for (const ScoredPiece& piece : pieces) {
    const std::size_t n_ref = piece.ref.size();
    const std::size_t n_hyp = piece.hyp.size();
    std::size_t correct = 0;
    for (const std::size_t r : piece.ref) {
      const int h = mapping[r];
      if (h >= 0 && std::binary_search(piece.hyp.begin(), piece.hyp.end(), static_cast<std::size_t>(h))) {
        ++correct;
      }
    }
    out.scored_speech += piece.duration * static_cast<double>(n_ref);
    if (n_ref > n_hyp) out.missed += piece.duration * static_cast<double>(n_ref - n_hyp);
    if (n_hyp > n_ref) out.false_alarm += piece.duration * static_cast<double>(n_hyp - n_ref);
    out.speaker_error += piece.duration * static_cast<double>(std::min(n_ref, n_hyp) - correct);
  }
  return out;
}

}  // namespace

double DerBreakdown::der() const {
  if (!(scored_speech > 0.0)) throw InvalidInput("DER is undefined: no scored reference speech");
  return errors() / scored_speech;
}

std::vector<RttmEntry> parse_rttm(std::string_view text) {
  std::vector<RttmEntry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    const auto fields = split_fields(line);
    if (fields.empty() || fields[0] != "SPEAKER") continue;
    if (fields.size() < 8) {
      throw ParseError("SPEAKER line needs at least 8 fields, got " + std::to_string(fields.size()), line_no);
    }
    RttmEntry entry;
    entry.recording_id = std::string(fields[1]);
    entry.channel = static_cast<int>(parse_number(fields[2], "channel", line_no));
    entry.onset = parse_number(fields[3], "onset", line_no);
    entry.duration = parse_number(fields[4], "duration", line_no);
    entry.speaker = std::string(fields[7]);
    if (entry.onset < 0.0) throw ParseError("negative onset", line_no);
    if (!(entry.duration > 0.0)) throw ParseError("non-positive duration", line_no);
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string format_rttm(std::span<const RttmEntry> entries) {
  std::string out;
  char buf[64];
  const auto ms = [](Seconds t) { return std::round(t * 1000.0) / 1000.0; };
  for (const RttmEntry& e : entries) {
    // Rounding both ends keeps touching entries touching after the round trip.
    const Seconds onset = ms(e.onset);
    const Seconds duration = ms(e.end()) - onset;
    if (duration < 0.0005) continue;
    out += "SPEAKER ";
    out += e.recording_id;
    std::snprintf(buf, sizeof buf, " %d %.3f %.3f <NA> <NA> ", e.channel, onset, duration);
    out += buf;
    out += e.speaker;
    out += " <NA> <NA>\n";
  }
  return out;
}

DerBreakdown compute_der(std::span<const RttmEntry> reference, std::span<const RttmEntry> hypothesis,
                         Seconds collar) {
  if (!(collar >= 0.0)) throw InvalidInput("collar must be non-negative");
  std::map<std::string, std::pair<std::vector<const RttmEntry*>, std::vector<const RttmEntry*>>> recordings;
  for (const RttmEntry& e : reference) recordings[e.recording_id].first.push_back(&e);
  for (const RttmEntry& e : hypothesis) {
    const auto it = recordings.find(e.recording_id);
    if (it == recordings.end()) {
      throw InvalidInput("hypothesis recording '" + e.recording_id + "' has no reference");
    }
    it->second.second.push_back(&e);
  }

  DerBreakdown total;
  for (const auto& [id, sides] : recordings) {
    const DerBreakdown part = score_recording(sides.first, sides.second, collar);
    total.missed += part.missed;
    total.false_alarm += part.false_alarm;
    total.speaker_error += part.speaker_error;
    total.scored_speech += part.scored_speech;
  }
  if (!(total.scored_speech > 0.0)) throw InvalidInput("DER is undefined: no scored reference speech");
  return total;
}

std::string der_json(const DerBreakdown& b) {
  nlohmann::ordered_json j;
  j["missed_s"] = b.missed;
  j["falarm_s"] = b.false_alarm;
  j["spkerr_s"] = b.speaker_error;
  j["scored_s"] = b.scored_speech;
  j["der"] = b.der();
  return j.dump(2) + "\n";
}

std::string der_table(const DerBreakdown& b) {
  const double scored = b.scored_speech;
  const auto pct = [scored](double v) { return scored > 0.0 ? 100.0 * v / scored : 0.0; };
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%-16s %12s %8s\n"
                "%-16s %12.3f %7.2f%%\n"
                "%-16s %12.3f %7.2f%%\n"
                "%-16s %12.3f %7.2f%%\n"
                "%-16s %12.3f\n"
                "%-16s %12s %7.2f%%\n",
                "component", "seconds", "share", "missed", b.missed, pct(b.missed), "false alarm",
                b.false_alarm, pct(b.false_alarm), "speaker error", b.speaker_error, pct(b.speaker_error),
                "scored speech", scored, "DER", "", pct(b.errors()));
  return buf;
}

}  // namespace lexdiar
