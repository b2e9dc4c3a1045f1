#include "lexdiar/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lexdiar/errors.hpp"

namespace lexdiar {

namespace {

std::string_view trim(std::string_view s) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    lines.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return lines;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t row) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ParseError("not a number: '" + std::string(cell) + "'", row, "row");
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value", row, "row");
  return value;
}

std::size_t parse_dim(std::string_view header) {
  const auto cells = split_commas(trim(header));
  constexpr std::string_view kPrefix = "dim=";
  if (cells.size() != 3 || cells[0] != "start" || cells[1] != "end" || !cells[2].starts_with(kPrefix)) {
    throw ParseError("expected header 'start,end,dim=<d>'", 1);
  }
  const std::string_view digits = cells[2].substr(kPrefix.size());
  std::size_t dim = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dim);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || dim == 0) {
    throw ParseError("bad embedding dimension '" + std::string(digits) + "'", 1);
  }
  return dim;
}

}  // namespace

EmbeddingTable parse_embeddings_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || trim(lines.front()).empty()) throw ParseError("missing header", 1);
  const std::size_t dim = parse_dim(lines.front());

  std::vector<Segment> segments;
  std::vector<double> values;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const std::string_view line = trim(lines[l]);
    if (line.empty()) continue;
    const std::size_t row = segments.size() + 1;
    const auto cells = split_commas(line);
    if (cells.size() != dim + 2) {
      throw ParseError("expected " + std::to_string(dim) + " values, got " +
                           std::to_string(cells.size() < 2 ? 0 : cells.size() - 2),
                       row, "row");
    }
    const double start = parse_cell(cells[0], row);
    const double end = parse_cell(cells[1], row);
    if (start < 0.0 || !(end > start)) throw ParseError("invalid segment interval", row, "row");
    if (!segments.empty() && start < segments.back().interval.start) {
      throw ParseError("rows not sorted by start time", row, "row");
    }
    segments.push_back({segments.size(), {start, end}});
    for (std::size_t d = 0; d < dim; ++d) values.push_back(parse_cell(cells[d + 2], row));
  }

  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(segments.size()), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    for (Eigen::Index d = 0; d < vectors.cols(); ++d) {
      vectors(i, d) = values[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(d)];
    }
  }
  return {std::move(segments), EmbeddingSet(std::move(vectors))};
}

std::string format_embeddings_csv(std::span<const Segment> segments, const EmbeddingSet& embeddings) {
  if (segments.size() != embeddings.size()) {
    throw InvalidInput("segment count does not match embedding count");
  }
  std::string out = "start,end,dim=" + std::to_string(embeddings.dim()) + "\n";
  char buf[64];
  for (std::size_t i = 0; i < segments.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f", segments[i].interval.start, segments[i].interval.end);
    out += buf;
    for (std::size_t d = 0; d < embeddings.dim(); ++d) {
      std::snprintf(buf, sizeof buf, ",%.6f",
                    embeddings.vectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<Word> parse_words_jsonl(std::string_view text) {
  std::vector<Word> words;
  std::size_t previous_line = 0;
  const auto lines = lines_of(text);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const std::size_t line_no = l + 1;
    const std::string_view line = trim(lines[l]);
    if (line.empty()) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    Word word;
    try {
      word.text = obj.at("word").get<std::string>();
      word.interval.start = obj.at("start").get<double>();
      word.interval.end = obj.at("end").get<double>();
      word.turn_prob = obj.at("turn_prob").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad word record: ") + e.what(), line_no);
    }
    if (!(word.turn_prob >= 0.0 && word.turn_prob <= 1.0)) {
      throw ParseError("turn_prob outside [0, 1]", line_no);
    }
    if (word.interval.start < 0.0 || !(word.interval.end > word.interval.start)) {
      throw ParseError("word end must be after its start", line_no);
    }
    if (!words.empty() && word.interval.start < words.back().interval.start) {
      throw ParseError("word starts before the word on line " + std::to_string(previous_line), line_no);
    }
    words.push_back(std::move(word));
    previous_line = line_no;
  }
  return words;
}

std::string format_words_jsonl(std::span<const Word> words) {
  std::string out;
  char buf[128];
  for (const Word& w : words) {
    out += "{\"word\":" + nlohmann::json(w.text).dump();
    std::snprintf(buf, sizeof buf, ",\"start\":%.3f,\"end\":%.3f,\"turn_prob\":%.4f}\n", w.interval.start,
                  w.interval.end, w.turn_prob);
    out += buf;
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidInput("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

EmbeddingTable read_embeddings(const std::filesystem::path& path) {
  return parse_embeddings_csv(read_text_file(path));
}

std::vector<Word> read_words(const std::filesystem::path& path) {
  return parse_words_jsonl(read_text_file(path));
}

std::vector<RttmEntry> read_rttm(const std::filesystem::path& path) {
  return parse_rttm(read_text_file(path));
}

}  // namespace lexdiar
