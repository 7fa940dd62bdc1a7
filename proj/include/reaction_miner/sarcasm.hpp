#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "reaction_miner/corpus.hpp"
#include "reaction_miner/emoclass.hpp"

namespace reaction_miner {

/// Distance-ratio window [x1, x2], score-ratio floors y1 (third/second) and
/// y2 (second/first), and the opposing emotion pairs that make a candidate.
struct SarcasmThresholds {
  double x1 = 0.5;
  double x2 = 10.0;
  double y1 = 0.1;
  double y2 = 0.5;
  std::set<EmotionPair> combos{EmotionPair(Emotion::Angry, Emotion::Haha), EmotionPair(Emotion::Angry, Emotion::Wow)};

  /// Throws ConfigError unless 0 <= x1 <= x2, y1, y2 in (0, 1] and combos non-empty.
  void validate() const;

  /// Defaults per language; the Chinese profile accepts lower ratios.
  static SarcasmThresholds defaults(Lang lang);
};

enum class SarcasmReason : std::uint8_t {
  Sarcastic,
  NotCandidate,
  /// Top two scores tie: the distance ratio is undefined.
  DegenerateScores,
  DistanceOutOfRange,
  /// A zero first or second score leaves the score ratios undefined.
  ZeroScore,
  ScoreRatioTooLow,
};

std::string_view reason_name(SarcasmReason r);

struct ScoreRatios {
  double third_to_second;  // S3 / S2
  double second_to_first;  // S2 / S1
};

struct SarcasmVerdict {
  bool candidate = false;
  std::optional<double> distance_ratio;
  std::optional<ScoreRatios> score_ratios;
  bool sarcastic = false;
  SarcasmReason reason = SarcasmReason::NotCandidate;
};

bool is_candidate(std::pair<Emotion, Emotion> top_pair, const SarcasmThresholds& thresholds);

/// (S3 - S2) / (S2 - S1) over the top three ranked scores; empty when S1 == S2.
/// Throws NoSignalError.
std::optional<double> distance_ratio(const EmotionScores& scores);

/// (S3 / S2, S2 / S1); empty when S1 or S2 is zero. Throws NoSignalError.
std::optional<ScoreRatios> score_ratios(const EmotionScores& scores);

/// Candidate filter, then x1 <= distance <= x2, S3/S2 >= y1 and S2/S1 >= y2.
/// Undefined ratios fail their check. Throws NoSignalError.
SarcasmVerdict label_sarcasm(const EmotionScores& scores, const SarcasmThresholds& thresholds);

/// Key-value profile file:
///   [en]
///   x1 = 0.5
///   combos = angry-haha, angry-wow
/// Sections name languages; keys absent from a section keep the defaults.
std::map<Lang, SarcasmThresholds> parse_threshold_profiles(std::span<const std::string> lines);
std::map<Lang, SarcasmThresholds> load_threshold_profiles(const std::filesystem::path& path);
std::string format_threshold_profiles(const std::map<Lang, SarcasmThresholds>& profiles);

}  // namespace reaction_miner
