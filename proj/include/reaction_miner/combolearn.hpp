#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "reaction_miner/emoclass.hpp"
#include "reaction_miner/patterns.hpp"
#include "reaction_miner/textproc.hpp"

namespace reaction_miner {

/// 5 x n pattern-score matrix of one comment. Row e, column j holds
/// (j + 1) x occurrences of the j-th ranked pattern of emotion e.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  explicit ScoreMatrix(std::size_t columns) : columns_(columns), values_(kEmotionCount * columns, 0.0) {}

  std::size_t columns() const { return columns_; }
  double at(Emotion e, std::size_t j) const { return values_[index_of(e) * columns_ + j]; }
  double& at(Emotion e, std::size_t j) { return values_[index_of(e) * columns_ + j]; }
  /// Row-major, 5 x columns().
  std::span<const double> values() const { return values_; }
  bool all_zero() const;

 private:
  std::size_t columns_ = 0;
  std::vector<double> values_;
};

/// Throws ConfigError when n is zero or exceeds the pattern count.
ScoreMatrix build_matrix(const TokenSeq& tokens, const EmotionModel& model, std::size_t n);

inline constexpr std::size_t kDefaultPatternBudget = 100;

enum class LearnerKind : std::uint8_t {
  /// Shared 1-D convolution over each emotion row, max-pooled per row, logistic output.
  Cnn,
  /// Logistic regression on the flattened matrix.
  Logistic,
};

struct LearnerConfig {
  LearnerKind kind = LearnerKind::Cnn;
  std::size_t epochs = 50;
  double learning_rate = 0.05;
  /// 0 means full batch.
  std::size_t batch_size = 16;
  std::size_t filters = 4;
  std::size_t kernel_width = 3;
  /// Weight positive examples by negatives/positives.
  bool balance_classes = true;
};

struct TrainingExample {
  ScoreMatrix matrix;
  bool sarcastic = false;
};

/// Per-column standardization fitted on the training set.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(std::span<const TrainingExample> data);
  std::vector<double> apply(const ScoreMatrix& m) const;
};

struct LearnedParameters {
  LearnerKind kind = LearnerKind::Cnn;
  Standardizer standardizer;
  std::vector<double> weights;
};

struct TrainTrace {
  /// correct[i][epoch]: was example i predicted correctly after that epoch.
  std::vector<std::vector<std::uint8_t>> correct;
  std::vector<std::size_t> correct_epochs;
  /// correct_epochs / epochs, per example.
  std::vector<double> rate;
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;
  std::size_t epochs = 0;
  LearnedParameters parameters;
};

/// Trains by mini-batch gradient descent and records, after every epoch,
/// which examples the current model gets right. Deterministic per seed.
/// Throws TrainingError for empty or single-class data.
TrainTrace train(std::span<const TrainingExample> data, const LearnerConfig& config, std::uint64_t seed);

/// Probability of the sarcastic class under trained parameters.
double predict_probability(const LearnedParameters& params, const LearnerConfig& config, const ScoreMatrix& m);

inline constexpr std::array<int, 4> kRateThresholdTenths = {10, 9, 8, 7};

struct ComboHistogram {
  /// counts[t][pair.canonical_index()] for thresholds 1.0, 0.9, 0.8, 0.7.
  std::array<std::array<std::uint64_t, kEmotionPairCount>, 4> counts{};

  std::uint64_t count(std::size_t threshold_index, const EmotionPair& pair) const {
    return counts[threshold_index][pair.canonical_index()];
  }
  bool empty_at(std::size_t threshold_index) const;

  /// `pair<TAB>count_t100<TAB>count_t90<TAB>count_t80<TAB>count_t70` for all ten pairs.
  std::string serialize() const;
};

/// Tallies the top-2 emotion pair of every sarcastic example whose correct
/// training rate reaches each threshold. Examples without signal are skipped.
/// Throws ContractViolation when the inputs are not aligned.
ComboHistogram combo_histogram(std::span<const TrainingExample> data, const TrainTrace& trace,
                               std::span<const EmotionScores> scores);

/// The k most frequent pairs at the 0.7 threshold, ties in canonical pair
/// order; only pairs with a non-zero count are returned. Throws
/// ContractViolation for k outside [1, 10] and TrainingError for an empty histogram.
std::vector<EmotionPair> select_combos(const ComboHistogram& hist, std::size_t k);

// ---- sarcasm-annotated comments ---------------------------------------------------

struct AnnotatedComment {
  std::string id;
  Lang lang = Lang::En;
  bool sarcastic = false;
  std::string text;
};

/// `comment_id<TAB>lang<TAB>sarcastic(0|1)<TAB>text`
std::vector<AnnotatedComment> parse_annotated(std::span<const std::string> lines);
std::vector<AnnotatedComment> load_annotated(const std::filesystem::path& path);
std::string format_annotated(std::span<const AnnotatedComment> items);

struct ComboLearning {
  std::vector<TrainingExample> data;
  std::vector<EmotionScores> scores;
  TrainTrace trace;
  ComboHistogram histogram;
  std::vector<EmotionPair> selected;
};

/// End to end: tokenize, build matrices and emotion scores, train, tally, select.
ComboLearning learn_combos(const EmotionModel& model, const Tokenizer& tokenizer,
                           std::span<const AnnotatedComment> annotated, std::size_t n, const LearnerConfig& config,
                           std::uint64_t seed, std::size_t k = 2);

}  // namespace reaction_miner
