#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reaction_miner/config.hpp"
#include "reaction_miner/corpus.hpp"
#include "reaction_miner/emoclass.hpp"
#include "reaction_miner/sarcasm.hpp"
#include "reaction_miner/textproc.hpp"

namespace reaction_miner {

// ---- annotations ----------------------------------------------------------------

struct AnnotatedItem {
  std::string id;
  Lang lang = Lang::En;
  std::string text;
  /// One 0/1 sarcasm vote per annotator.
  std::vector<std::uint8_t> votes;

  std::size_t positives() const;
};

struct AnnotationSet {
  std::size_t annotators = 0;
  std::vector<AnnotatedItem> items;
};

/// `text_id<TAB>lang<TAB>l1,...,lm<TAB>text`. Every line must carry the same
/// m >= 2 labels. Throws FormatError.
AnnotationSet parse_annotations(std::span<const std::string> lines);
AnnotationSet load_annotations(const std::filesystem::path& path);
std::string format_annotations(const AnnotationSet& set);

struct KappaResult {
  double kappa = 0.0;
  /// Chance agreement is 1 (every vote in one category); kappa is reported as 1.
  bool degenerate = false;
};

/// Fleiss' kappa over the two categories. Throws ContractViolation for fewer
/// than two annotators, no items, or items whose vote count differs from m.
KappaResult fleiss_kappa(const AnnotationSet& set);

struct AgreeGroundTruth {
  int level = 1;
  std::map<std::string, std::uint8_t> labels;
};

/// Positive iff at least k annotators voted sarcastic. Throws ContractViolation
/// unless 1 <= k <= 3 and k <= m.
AgreeGroundTruth agree_labels(const AnnotationSet& set, int k);

// ---- metrics ----------------------------------------------------------------------

struct MetricReport {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Set when the matching denominator was zero and the value was reported as 0.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;

  bool degenerate() const { return precision_degenerate || recall_degenerate || f1_degenerate; }
};

MetricReport metrics_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn);

/// Throws ContractViolation when a truth id has no prediction.
MetricReport metrics(const std::map<std::string, std::uint8_t>& pred, const AgreeGroundTruth& truth);

/// Reads predictions: either the 7-column sarcasm output (sarcastic flag in
/// column 6) or `id<TAB>0|1`. Throws FormatError.
std::map<std::string, std::uint8_t> parse_predictions(std::span<const std::string> lines);
std::map<std::string, std::uint8_t> load_predictions(const std::filesystem::path& path);

struct ReportRow {
  std::string method;
  /// Index 0..2 for Agree 1..3; empty when the level exceeds the annotator count.
  std::array<std::optional<MetricReport>, 3> levels;
};

/// Method column, then Accuracy, F1, Recall, Precision for each Agree level, 4 decimals.
std::string format_report(std::span<const ReportRow> rows);

/// Every defined Agree level of `set` for one prediction map.
ReportRow evaluate_levels(std::string method, const std::map<std::string, std::uint8_t>& pred,
                          const AnnotationSet& set);

// ---- Naive Bayes baseline -----------------------------------------------------------

enum class NbFeatures : std::uint8_t { Bow, TfIdf };

std::string_view features_name(NbFeatures f);
std::optional<NbFeatures> parse_features(std::string_view s);

struct NbDocument {
  std::vector<std::string> tokens;
  std::uint8_t label = 0;
};

class NbModel {
 public:
  NbFeatures features() const { return features_; }
  std::size_t vocabulary_size() const { return vocab_.size(); }
  /// log P(c) + sum_w x_w log P(w | c), unseen tokens ignored.
  std::array<double, 2> log_posterior(std::span<const std::string> tokens) const;

  friend NbModel nb_train(std::span<const NbDocument> docs, NbFeatures features);

 private:
  NbFeatures features_ = NbFeatures::Bow;
  std::map<std::string, std::size_t> vocab_;
  std::vector<double> idf_;
  std::array<double, 2> log_prior_{};
  std::array<std::vector<double>, 2> log_likelihood_;
};

/// Multinomial NB with add-one smoothing. BOW uses raw counts, TF-IDF uses
/// tf * ln(N / df) as weighted counts. Throws TrainingError for single-class data.
NbModel nb_train(std::span<const NbDocument> docs, NbFeatures features);

/// Argmax posterior; ties go to 0.
std::uint8_t nb_predict(const NbModel& model, std::span<const std::string> tokens);

/// Token surfaces as produced by the tokenizer.
std::vector<std::string> surfaces(const TokenSeq& tokens);

// ---- threshold search ---------------------------------------------------------------

struct ThresholdGrid {
  std::vector<double> x1, x2, y1, y2;

  std::size_t size() const { return x1.size() * x2.size() * y1.size() * y2.size(); }
  /// Point `i` in x1-major order.
  SarcasmThresholds at(std::size_t i, const SarcasmThresholds& base) const;
};

/// Keys x1, x2, y1, y2 as comma lists, in section [grid] or at top level.
ThresholdGrid parse_grid(const KeyValueConfig& cfg);
ThresholdGrid load_grid(const std::filesystem::path& path);

struct GridResult {
  SarcasmThresholds best;
  MetricReport report;
  std::size_t evaluated = 0;
};

/// Exhaustive search maximizing F1 against `truth`; ties by precision, then
/// by grid order. Points with x1 > x2 are skipped. Texts without signal are
/// predicted non-sarcastic. Throws ConfigError when no grid point is usable.
GridResult grid_search_thresholds(std::span<const EmotionScores> scores, std::span<const std::uint8_t> truth,
                                  const ThresholdGrid& grid, const SarcasmThresholds& base);

/// Classifies every annotated text and searches against Agree-2 ground truth.
GridResult grid_search_thresholds(const EmotionModel& model, const Tokenizer& tokenizer, const AnnotationSet& set,
                                  const ThresholdGrid& grid, const SarcasmThresholds& base);

/// Sarcasm decision for one text; no signal means not sarcastic.
bool predict_sarcastic(const EmotionScores& scores, const SarcasmThresholds& thresholds);

}  // namespace reaction_miner
