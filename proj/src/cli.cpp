#include "lexdiar/cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <CLI11.hpp>

#include "lexdiar/errors.hpp"
#include "lexdiar/io.hpp"
#include "lexdiar/pipeline.hpp"
#include "lexdiar/scoring.hpp"
#include "lexdiar/synth.hpp"

namespace lexdiar {

namespace {

namespace fs = std::filesystem;

// Raised for argument combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineArgs {
  PipelineConfig config;
  std::string mode = "full";
  std::string c_grid = "0.05:0.95:0.05";
  std::size_t num_speakers = 0;
  CLI::Option* num_speakers_opt = nullptr;
  std::string embeddings;
  std::string words;
  CLI::Option* words_opt = nullptr;
  std::string recording_id = "rec1";

  PipelineConfig resolve() const {
    PipelineConfig c = config;
    c.mode = parse_mode(mode);
    c.c_grid = parse_c_grid(c_grid);
    if (num_speakers_opt->count() > 0) c.num_speakers = num_speakers;
    if (c.mode == Mode::full && words_opt->count() == 0) {
      throw UsageError("--mode full needs --words (use --mode m1 for acoustic-only clustering)");
    }
    c.validate();
    return c;
  }
};

void add_pipeline_flags(CLI::App* cmd, PipelineArgs& args) {
  cmd->add_option("--embeddings", args.embeddings, "Segment embeddings CSV")->required()->check(CLI::ExistingFile);
  args.words_opt = cmd->add_option("--words", args.words, "Word stream JSONL with turn probabilities")
                       ->check(CLI::ExistingFile);
  cmd->add_option("--mode", args.mode, "m1 (acoustic only) or full (acoustic + lexical)")
      ->capture_default_str()
      ->check(CLI::IsMember({"m1", "full"}));
  cmd->add_option("--window", args.config.window,
                  "Expected segment length in the embeddings file, seconds (warns on mismatch)")
      ->capture_default_str();
  cmd->add_option("--shift", args.config.shift,
                  "Expected segment shift in the embeddings file, seconds (warns on mismatch)")
      ->capture_default_str();
  cmd->add_option("--knn", args.config.knn, "Nearest neighbours kept per row")->capture_default_str();
  cmd->add_option("--nu", args.config.nu, "Maximum words per utterance")->capture_default_str();
  cmd->add_option("--c-grid", args.c_grid, "Turn threshold grid start:stop:step")->capture_default_str();
  cmd->add_option("--min-overlap", args.config.min_overlap_fraction,
                  "Fraction of a segment an utterance must cover")
      ->capture_default_str();
  args.num_speakers_opt = cmd->add_option("--num-speakers", args.num_speakers,
                                          "Fix the speaker count instead of estimating it");
  cmd->add_option("--k-max", args.config.k_max, "Largest speaker count the estimate may return")
      ->capture_default_str();
  cmd->add_option("--seed", args.config.seed, "k-means seed")->capture_default_str();
  cmd->add_option("--collar", args.config.collar, "Scoring collar, seconds")->capture_default_str();
  cmd->add_option("--recording-id", args.recording_id, "Recording id written to the RTTM")->capture_default_str();
}

struct LoadedInputs {
  EmbeddingTable table;
  std::vector<Word> words;
};

// The embeddings file fixes the segmentation; --window and --shift only
// describe what the file is expected to contain.
void check_segmentation(std::span<const Segment> segments, const PipelineConfig& config, std::ostream& err) {
  constexpr double kSlack = 1e-3;
  std::size_t too_long = 0;
  std::size_t odd_stride = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].interval.duration() > config.window + kSlack) ++too_long;
    if (i > 0) {
      const double step = segments[i].interval.start - segments[i - 1].interval.start;
      if (step > config.shift + kSlack && segments[i - 1].interval.end >= segments[i].interval.start) ++odd_stride;
    }
  }
  if (too_long > 0) {
    err << "warning: " << too_long << " segments are longer than --window " << config.window << " s\n";
  }
  if (odd_stride > 0) {
    err << "warning: " << odd_stride << " overlapping segment pairs are further apart than --shift "
        << config.shift << " s\n";
  }
}

LoadedInputs load_inputs(const PipelineArgs& args, const PipelineConfig& config, std::ostream& err) {
  LoadedInputs in{read_embeddings(args.embeddings), {}};
  check_segmentation(in.table.segments, config, err);
  if (config.mode == Mode::full) in.words = read_words(args.words);
  return in;
}

void write_or_print(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_text_file_atomic(path, content);
  }
}

}  // namespace

int cli_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Speaker diarization by fused acoustic/lexical spectral clustering", "lexdiar"};
  app.require_subcommand(1);

  PipelineArgs diarize_args;
  std::string out_rttm;
  std::string summary_path;
  auto* diarize = app.add_subcommand("diarize", "Cluster segments and write a hypothesis RTTM");
  add_pipeline_flags(diarize, diarize_args);
  diarize->add_option("--out", out_rttm, "Output RTTM path")->required();
  diarize->add_option("--summary", summary_path, "Write the run summary JSON here instead of stdout");
  std::string diarize_ref;
  diarize->add_option("--ref", diarize_ref, "Reference RTTM; adds the DER (scored with --collar) to the summary")
      ->check(CLI::ExistingFile);

  PipelineArgs report_args;
  std::string report_path;
  auto* report = app.add_subcommand("report", "Print per-stage spectral diagnostics as JSON");
  add_pipeline_flags(report, report_args);
  report->add_option("--out", report_path, "Write the report here instead of stdout");

  std::string ref_path, hyp_path, score_format = "json";
  Seconds score_collar = kDefaultCollar;
  auto* score = app.add_subcommand("score", "Diarization error rate of a hypothesis RTTM");
  score->add_option("--ref", ref_path, "Reference RTTM")->required()->check(CLI::ExistingFile);
  score->add_option("--hyp", hyp_path, "Hypothesis RTTM")->required()->check(CLI::ExistingFile);
  score->add_option("--collar", score_collar, "No-score collar around reference boundaries, seconds")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  score->add_option("--format", score_format, "json or table")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "table"}));

  SynthSpec spec;
  std::string out_dir;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic conversation");
  synth->add_option("--speakers", spec.num_speakers, "Number of speakers")->capture_default_str();
  synth->add_option("--duration", spec.duration, "Conversation length, seconds")->capture_default_str();
  synth->add_option("--seed", spec.seed, "Random seed")->capture_default_str();
  synth->add_option("--dim", spec.embedding_dim, "Embedding dimension")->capture_default_str();
  synth->add_option("--separation", spec.cluster_separation, "Speaker mean distance in noise std units")
      ->capture_default_str();
  synth->add_option("--noise", spec.embedding_noise_std, "Embedding noise std")->capture_default_str();
  synth->add_option("--turn-prob-hit", spec.turn_prob_hit, "Mean turn probability at true turns")
      ->capture_default_str();
  synth->add_option("--turn-prob-miss", spec.turn_prob_miss, "Mean turn probability elsewhere")
      ->capture_default_str();
  synth->add_option("--words-per-second", spec.words_per_second, "Speaking rate")->capture_default_str();
  synth->add_option("--mean-turn-length", spec.mean_turn_length, "Mean speaker turn, seconds")
      ->capture_default_str();
  synth->add_option("--recording-id", spec.recording_id, "Recording id")->capture_default_str();
  synth->add_option("--out-dir", out_dir, "Directory for embeddings.csv, words.jsonl, reference.rttm")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*diarize) {
      const PipelineConfig config = diarize_args.resolve();
      const LoadedInputs in = load_inputs(diarize_args, config, err);
      const DiarizationResult result = run_pipeline(config, in.table.segments, in.table.embeddings, in.words);
      const auto entries = resolve_timeline(in.table.segments, result.labels, diarize_args.recording_id);
      write_text_file_atomic(out_rttm, format_rttm(entries));
      std::optional<DerBreakdown> der;
      if (!diarize_ref.empty()) der = compute_der(read_rttm(diarize_ref), entries, config.collar);
      write_or_print(summary_path, summary_json(config, result, der), out);
    } else if (*report) {
      const PipelineConfig config = report_args.resolve();
      const LoadedInputs in = load_inputs(report_args, config, err);
      const DiarizationResult result = run_pipeline(config, in.table.segments, in.table.embeddings, in.words);
      write_or_print(report_path, report_json(config, result), out);
    } else if (*score) {
      const DerBreakdown b = compute_der(read_rttm(ref_path), read_rttm(hyp_path), score_collar);
      out << (score_format == "json" ? der_json(b) : der_table(b));
    } else if (*synth) {
      const SynthConversation conv = generate(spec);
      const fs::path dir(out_dir);
      fs::create_directories(dir);
      write_text_file_atomic(dir / "embeddings.csv", format_embeddings_csv(conv.segments, conv.embeddings));
      write_text_file_atomic(dir / "words.jsonl", format_words_jsonl(conv.words));
      write_text_file_atomic(dir / "reference.rttm", format_rttm(conv.reference));
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace lexdiar
