#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reaction_miner/combolearn.hpp"
#include "reaction_miner/config.hpp"
#include "reaction_miner/coocgraph.hpp"
#include "reaction_miner/corpus.hpp"
#include "reaction_miner/emoclass.hpp"
#include "reaction_miner/patterns.hpp"
#include "reaction_miner/sarcasm.hpp"
#include "reaction_miner/textproc.hpp"

namespace reaction_miner {

// ---- shared stage helpers ----------------------------------------------------------

std::vector<TokenSeq> tokenize_all(std::span<const std::string> texts, std::span<const std::string> ids,
                                   const Tokenizer& tokenizer);
std::vector<LabeledTokens> tokenize_labeled(std::span<const LabeledComment> labeled, const Tokenizer& tokenizer);

/// `id<TAB>emo1<TAB>score1 ... emo5<TAB>score5<TAB>nosignal(0|1)`
std::string format_classification(const std::string& id, const EmotionScores& scores);

/// `id<TAB>candidate<TAB>distance_ratio<TAB>r23<TAB>r12<TAB>sarcastic<TAB>reason`.
/// Undefined values print as NA; texts without signal get reason no_signal.
std::string format_sarcasm(const std::string& id, const EmotionScores& scores, const SarcasmThresholds& thresholds);

// ---- pipeline ------------------------------------------------------------------------

struct PipelineConfig {
  Lang lang = Lang::En;
  std::filesystem::path work_dir = "work";
  std::uint64_t seed = 1;
  std::size_t threads = 0;

  std::filesystem::path comments;
  std::filesystem::path reactions;
  std::filesystem::path posts;
  /// Comments to classify and label; defaults to `comments`.
  std::filesystem::path classify_input;
  /// Optional threshold profile file; language defaults otherwise.
  std::filesystem::path thresholds;
  /// Optional annotation file; the evaluate stage is skipped without it.
  std::filesystem::path annotations;
  /// Defaults to work_dir/model.tsv.
  std::filesystem::path model;

  std::uint64_t lexicon_threshold = kDefaultLexiconThreshold;
  double dominance = kDefaultDominance;
  MiningParams mining;
  LearnerConfig learner;

  /// Config file itself; counts as an input of every stage.
  std::filesystem::path source;

  /// Reads sections pipeline, ingest, lexicon, graph, patterns, classify,
  /// sarcasm, evaluate, learner. Relative paths resolve against `base_dir`.
  /// Throws ConfigError for unknown keys or bad values.
  static PipelineConfig from(const KeyValueConfig& cfg, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path, std::span<const std::string> overrides = {});

  /// Every referenced input exists and parameters are in range. Throws ConfigError.
  void validate() const;

  std::filesystem::path artifact(const std::string& name) const { return work_dir / name; }
};

/// Applies `section.key=value` overrides.
void apply_overrides(KeyValueConfig& cfg, std::span<const std::string> overrides);

enum class Stage : std::uint8_t { Ingest, Lexicon, Graph, Reduce, Patterns, Classify, Sarcasm, Evaluate };

std::string_view stage_name(Stage s);
/// 10 + stage position; configuration errors exit with 2.
int stage_exit_code(Stage s);
inline constexpr int kConfigExitCode = 2;

struct StageLog {
  Stage stage;
  /// ran, skipped (up to date), not_applicable
  std::string status;
  double wall_ms = 0.0;
  std::size_t records_in = 0;
  std::size_t records_out = 0;
};

struct PipelineOptions {
  /// Use an existing model instead of running the stages that build it.
  bool no_build = false;
  /// Ignore modification times and run every stage.
  bool force = false;
  /// One line per stage; null for silence.
  std::ostream* log = nullptr;
};

struct PipelineResult {
  int exit_code = 0;
  std::optional<Stage> failed;
  std::string error;
  std::vector<StageLog> stages;
};

/// ingest -> (zh: lexicon) -> graphs -> reduce -> patterns -> classify -> sarcasm -> evaluate.
/// A stage is skipped when all its outputs exist and none is older than any input.
PipelineResult run_pipeline(const PipelineConfig& config, const PipelineOptions& options = {});

}  // namespace reaction_miner
