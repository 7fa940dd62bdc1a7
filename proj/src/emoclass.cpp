#include "reaction_miner/emoclass.hpp"

#include <algorithm>
#include <map>

#include "reaction_miner/error.hpp"

namespace reaction_miner {

EmotionScores make_scores(const std::array<double, kEmotionCount>& score, std::size_t matched) {
  EmotionScores out;
  out.score = score;
  out.matched_patterns = matched;
  out.no_signal = matched == 0;
  for (std::size_t i = 0; i < kEmotionCount; ++i) out.ranked[i] = {kEmotions[i], score[i]};
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const RankedScore& a, const RankedScore& b) { return a.score > b.score; });
  return out;
}

EmotionScores classify(const TokenSeq& tokens, const EmotionModel& model) {
  if (model.empty()) throw ModelError("cannot classify with an empty model");
  auto counts = model.match(tokens);
  // Sparse row vector times the |P| x 5 degree matrix.
  std::array<double, kEmotionCount> score{};
  for (const auto& [p, n] : counts) {
    for (std::size_t e = 0; e < kEmotionCount; ++e) score[e] += n * model.degree(p, kEmotions[e]);
  }
  return make_scores(score, counts.size());
}

EmotionScores classify(std::span<const TokenSeq> comments, const EmotionModel& model) {
  if (model.empty()) throw ModelError("cannot classify with an empty model");
  std::map<EmotionModel::PatternIndex, std::uint64_t> counts;
  for (const auto& c : comments) {
    for (const auto& [p, n] : model.match(c)) counts[p] += n;
  }
  std::array<double, kEmotionCount> score{};
  for (const auto& [p, n] : counts) {
    for (std::size_t e = 0; e < kEmotionCount; ++e) score[e] += static_cast<double>(n) * model.degree(p, kEmotions[e]);
  }
  return make_scores(score, counts.size());
}

std::pair<Emotion, Emotion> top2(const EmotionScores& scores) {
  if (scores.no_signal) throw NoSignalError("text matched no pattern");
  return {scores.ranked[0].emotion, scores.ranked[1].emotion};
}

}  // namespace reaction_miner
