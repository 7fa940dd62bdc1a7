#include "reaction_miner/emotion.hpp"

#include <algorithm>
#include <cctype>

#include "reaction_miner/error.hpp"

namespace reaction_miner {

namespace {
constexpr std::array<std::string_view, kEmotionCount> kNames = {"angry", "haha", "wow", "sad", "love"};
}

std::string_view emotion_name(Emotion e) { return kNames[index_of(e)]; }

std::optional<Emotion> parse_emotion(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    if (lower == kNames[i]) return kEmotions[i];
  }
  return std::nullopt;
}

EmotionPair::EmotionPair(Emotion a, Emotion b) {
  if (a == b) throw ContractViolation("emotion pair needs two distinct emotions");
  first_ = std::min(a, b);
  second_ = std::max(a, b);
}

std::string EmotionPair::name() const {
  std::string out(emotion_name(first_));
  out += '-';
  out += emotion_name(second_);
  return out;
}

std::optional<EmotionPair> EmotionPair::parse(std::string_view s) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  auto a = parse_emotion(s.substr(0, dash));
  auto b = parse_emotion(s.substr(dash + 1));
  if (!a || !b || *a == *b) return std::nullopt;
  return EmotionPair(*a, *b);
}

std::size_t EmotionPair::canonical_index() const {
  // Row-major walk over the strict upper triangle of the 5x5 emotion grid.
  const std::size_t i = index_of(first_);
  const std::size_t j = index_of(second_);
  return i * kEmotionCount - i * (i + 1) / 2 + (j - i - 1);
}

const std::array<EmotionPair, kEmotionPairCount>& all_emotion_pairs() {
  static const auto pairs = [] {
    std::array<EmotionPair, kEmotionPairCount> out{
        EmotionPair(Emotion::Angry, Emotion::Haha), EmotionPair(Emotion::Angry, Emotion::Wow),
        EmotionPair(Emotion::Angry, Emotion::Sad),  EmotionPair(Emotion::Angry, Emotion::Love),
        EmotionPair(Emotion::Haha, Emotion::Wow),   EmotionPair(Emotion::Haha, Emotion::Sad),
        EmotionPair(Emotion::Haha, Emotion::Love),  EmotionPair(Emotion::Wow, Emotion::Sad),
        EmotionPair(Emotion::Wow, Emotion::Love),   EmotionPair(Emotion::Sad, Emotion::Love)};
    return out;
  }();
  return pairs;
}

}  // namespace reaction_miner
