#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>

#include "reaction_miner/emotion.hpp"
#include "reaction_miner/patterns.hpp"

namespace reaction_miner {

struct RankedScore {
  Emotion emotion;
  double score;
};

struct EmotionScores {
  std::array<double, kEmotionCount> score{};
  /// Descending by score, ties in canonical emotion order.
  std::array<RankedScore, kEmotionCount> ranked{};
  /// Distinct patterns that matched at least once.
  std::size_t matched_patterns = 0;
  /// No pattern matched: scores are all zero and the ranking carries no information.
  bool no_signal = true;

  double of(Emotion e) const { return score[index_of(e)]; }
  /// Score of the k-th ranked emotion (0-based).
  double nth(std::size_t k) const { return ranked[k].score; }
};

/// Builds the ranked view for an arbitrary score vector. `matched` decides no_signal.
EmotionScores make_scores(const std::array<double, kEmotionCount>& score, std::size_t matched);

/// Match-count vector times the emotion-degree matrix. Throws ModelError for an empty model.
EmotionScores classify(const TokenSeq& tokens, const EmotionModel& model);

/// Several comments scored as one document: match counts are summed per
/// comment, so no window spans two comments.
EmotionScores classify(std::span<const TokenSeq> comments, const EmotionModel& model);

/// The two best emotions. Throws NoSignalError when nothing matched.
std::pair<Emotion, Emotion> top2(const EmotionScores& scores);

}  // namespace reaction_miner
