#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reaction_miner/coocgraph.hpp"
#include "reaction_miner/emotion.hpp"
#include "reaction_miner/textproc.hpp"

namespace reaction_miner {

/// Two or three elements, exactly one of them the wildcard slot.
struct Pattern {
  std::vector<Element> elements;

  std::size_t size() const { return elements.size(); }
  std::size_t wildcard_position() const;
  bool valid() const;

  /// Space-joined form with "*" for the slot, e.g. "people are *". A literal
  /// surface equal to "*" or starting with '\' is escaped with a leading '\'.
  std::string text() const;
  /// Inverse of text(); throws FormatError on anything but a valid pattern.
  static Pattern parse(std::string_view text);

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

struct PatternStats {
  /// Occurrences per emotion, canonical order.
  std::array<std::uint64_t, kEmotionCount> freq{};
  /// Distinct subjective words seen in the slot. Empty for models loaded from
  /// disk, which only keep the count.
  std::vector<std::string> fillers;
  /// Number of distinct fillers.
  std::uint64_t unique_fillers = 0;

  std::uint64_t frequency(Emotion e) const { return freq[index_of(e)]; }
  std::uint64_t total() const;
};

struct MiningParams {
  std::uint64_t min_pattern_freq = 10;
  std::size_t min_fillers = 3;
  std::size_t max_length = 3;
};

struct LabeledTokens {
  TokenSeq tokens;
  Emotion label = Emotion::Angry;
};

struct MinedPatterns {
  std::vector<Pattern> patterns;
  std::vector<PatternStats> stats;
};

/// Enumerates every 2/3-element window of each labeled comment whose non-slot
/// elements survive graph reduction (or are symbols) and whose slot holds a
/// Word, keyed by the window with one position replaced by the wildcard.
/// Keeps candidates with at least `min_fillers` distinct subjective fillers
/// and at least `min_pattern_freq` occurrences. Output is sorted by pattern.
MinedPatterns extract_patterns(const ReducedGraph& reduced, std::span<const LabeledTokens> labeled,
                               const MiningParams& params = {});

enum class LogBase : std::uint8_t { Natural, Ten };

/// log(f(p, emo) + 1)
double pattern_frequency(const PatternStats& stats, Emotion emo, LogBase base = LogBase::Natural);
/// 5 / number of emotions in which the pattern occurs. Throws ContractViolation for all-zero stats.
double inverse_emotion_frequency(const PatternStats& stats);
/// log(distinct fillers)
double diversity(const PatternStats& stats, LogBase base = LogBase::Natural);
/// Product of the three factors above.
double emotion_degree(const PatternStats& stats, Emotion emo, LogBase base = LogBase::Natural);

/// Pattern inventory with its |P| x 5 emotion-degree matrix and per-emotion rankings.
/// Immutable once built.
class EmotionModel {
 public:
  using PatternIndex = std::uint32_t;

  EmotionModel() = default;

  /// Throws ModelError on mismatched lists, invalid patterns, duplicate
  /// patterns or stats without occurrences or fillers.
  static EmotionModel build(std::vector<Pattern> patterns, std::vector<PatternStats> stats,
                            LogBase base = LogBase::Natural);

  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  LogBase log_base() const { return base_; }

  const std::vector<Pattern>& patterns() const { return patterns_; }
  const std::vector<PatternStats>& stats() const { return stats_; }

  double degree(PatternIndex p, Emotion e) const { return degree_[p * kEmotionCount + index_of(e)]; }
  /// Row-major |P| x 5.
  std::span<const double> degree_matrix() const { return degree_; }

  /// Pattern indices by descending degree for `e`; ties by ascending index.
  std::span<const PatternIndex> ranking(Emotion e) const { return ranking_[index_of(e)]; }
  /// 1-based rank of pattern `p` within emotion `e`.
  std::uint32_t rank_position(Emotion e, PatternIndex p) const { return rank_pos_[index_of(e)][p]; }

  std::optional<PatternIndex> find(const Pattern& p) const;

  /// Counts pattern occurrences in one token sequence; see match().
  std::map<PatternIndex, std::uint32_t> match(const TokenSeq& tokens) const;

  /// Versioned header then `pattern<TAB>f_angry..f_love<TAB>uew` lines.
  /// Degrees and ranks are derived and recomputed on load.
  std::string serialize() const;
  static EmotionModel parse(std::span<const std::string> lines, LogBase base = LogBase::Natural);
  static EmotionModel load(const std::filesystem::path& path, LogBase base = LogBase::Natural);

 private:
  std::vector<Pattern> patterns_;
  std::vector<PatternStats> stats_;
  LogBase base_ = LogBase::Natural;
  std::vector<double> degree_;
  std::array<std::vector<PatternIndex>, kEmotionCount> ranking_;
  std::array<std::vector<std::uint32_t>, kEmotionCount> rank_pos_;
  std::unordered_map<std::string, PatternIndex> index_;
};

inline constexpr std::string_view kModelHeader = "#reaction-miner-model\tv1";

/// Occurrence counts of each model pattern in `tokens`. A pattern of length L
/// matches at i when every literal element equals tokens[i + k] and the slot
/// holds a Word. Overlapping occurrences all count.
std::map<EmotionModel::PatternIndex, std::uint32_t> match(const TokenSeq& tokens, const EmotionModel& model);

}  // namespace reaction_miner
