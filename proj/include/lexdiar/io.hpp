#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexdiar/acoustic_affinity.hpp"
#include "lexdiar/lexical_affinity.hpp"
#include "lexdiar/scoring.hpp"
#include "lexdiar/timeline.hpp"

namespace lexdiar {

struct EmbeddingTable {
  std::vector<Segment> segments;
  EmbeddingSet embeddings;
};

// CSV: header "start,end,dim=<d>", then one "start,end,v1,...,vd" row per
// segment sorted by start. Errors name the 1-based data row.
EmbeddingTable parse_embeddings_csv(std::string_view text);
std::string format_embeddings_csv(std::span<const Segment> segments, const EmbeddingSet& embeddings);

// JSON Lines: {"word": str, "start": s, "end": s, "turn_prob": p} per line.
std::vector<Word> parse_words_jsonl(std::string_view text);
std::string format_words_jsonl(std::span<const Word> words);

std::string read_text_file(const std::filesystem::path& path);
// Writes to a sibling temp file and renames it over `path`.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

EmbeddingTable read_embeddings(const std::filesystem::path& path);
std::vector<Word> read_words(const std::filesystem::path& path);
std::vector<RttmEntry> read_rttm(const std::filesystem::path& path);

}  // namespace lexdiar
