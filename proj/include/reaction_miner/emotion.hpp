#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace reaction_miner {

// Enumerator values are the canonical order used for tie-breaking and
// for the row/column order of every per-emotion matrix.
enum class Emotion : std::uint8_t { Angry = 0, Haha = 1, Wow = 2, Sad = 3, Love = 4 };

inline constexpr std::size_t kEmotionCount = 5;

inline constexpr std::array<Emotion, kEmotionCount> kEmotions = {
    Emotion::Angry, Emotion::Haha, Emotion::Wow, Emotion::Sad, Emotion::Love};

constexpr std::size_t index_of(Emotion e) { return static_cast<std::size_t>(e); }

/// Lowercase name as used in every file format ("angry", "haha", ...).
std::string_view emotion_name(Emotion e);

/// Accepts the lowercase file spelling; case-insensitive.
std::optional<Emotion> parse_emotion(std::string_view s);

/// Unordered pair of distinct emotions, stored with first < second in
/// canonical order so that (Haha, Angry) and (Angry, Haha) compare equal.
class EmotionPair {
 public:
  EmotionPair(Emotion a, Emotion b);

  Emotion first() const { return first_; }
  Emotion second() const { return second_; }
  bool contains(Emotion e) const { return e == first_ || e == second_; }

  /// "angry-haha"
  std::string name() const;
  static std::optional<EmotionPair> parse(std::string_view s);

  /// Position among the 10 pairs in canonical lexicographic order.
  std::size_t canonical_index() const;

  friend bool operator==(const EmotionPair&, const EmotionPair&) = default;
  friend auto operator<=>(const EmotionPair& a, const EmotionPair& b) {
    return a.canonical_index() <=> b.canonical_index();
  }

 private:
  Emotion first_;
  Emotion second_;
};

inline constexpr std::size_t kEmotionPairCount = 10;

/// All 10 unordered pairs in canonical order.
const std::array<EmotionPair, kEmotionPairCount>& all_emotion_pairs();

}  // namespace reaction_miner
