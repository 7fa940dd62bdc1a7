#include "doctest.h"

#include <cmath>

#include "reaction_miner/emoclass.hpp"
#include "reaction_miner/error.hpp"

namespace rm = reaction_miner;
using rm::Emotion;

namespace {
rm::EmotionModel one_pattern() {
  rm::PatternStats s;
  s.freq = {99, 0, 0, 0, 0};
  s.unique_fillers = 10;
  return rm::EmotionModel::build({rm::Pattern::parse("people are *")}, {s});
}
}  // namespace

TEST_CASE("classify") {
  auto model = one_pattern();
  auto once = rm::classify(rm::tokenize_en("people are dumb"), model);
  CHECK_FALSE(once.no_signal);
  CHECK(once.of(Emotion::Angry) == doctest::Approx(std::log(100.0) * 5.0 * std::log(10.0)));
  for (auto e : {Emotion::Haha, Emotion::Wow, Emotion::Sad, Emotion::Love}) CHECK(once.of(e) == 0.0);
  CHECK(once.ranked[0].emotion == Emotion::Angry);

  auto twice = rm::classify(rm::tokenize_en("people are dumb people are evil"), model);
  CHECK(twice.of(Emotion::Angry) == 2.0 * once.of(Emotion::Angry));

  auto empty = rm::classify(rm::tokenize_en(""), model);
  CHECK(empty.no_signal);
  CHECK_THROWS_AS(rm::top2(empty), rm::NoSignalError);
  CHECK_THROWS_AS(rm::classify(rm::tokenize_en("x"), rm::EmotionModel{}), rm::ModelError);
}

TEST_CASE("multi-comment documents do not match across the seam") {
  auto model = one_pattern();
  std::vector<rm::TokenSeq> parts{rm::tokenize_en("people"), rm::tokenize_en("are dumb")};
  CHECK(rm::classify(parts, model).no_signal);
  std::vector<rm::TokenSeq> same{rm::tokenize_en("people are dumb"), rm::tokenize_en("people are dumb")};
  CHECK(rm::classify(same, model).of(Emotion::Angry) ==
        2.0 * rm::classify(same[0], model).of(Emotion::Angry));
}

TEST_CASE("top2 and tie rules") {
  CHECK(rm::top2(rm::make_scores({10, 9, 0, 0, 0}, 1)) == std::pair{Emotion::Angry, Emotion::Haha});
  CHECK(rm::top2(rm::make_scores({3, 3, 3, 3, 3}, 1)) == std::pair{Emotion::Angry, Emotion::Haha});
  CHECK(rm::top2(rm::make_scores({1, 1, 1, 5, 5}, 1)) == std::pair{Emotion::Sad, Emotion::Love});
  auto s = rm::make_scores({0, 2, 7, 2, 1}, 2);
  CHECK(s.ranked[0].emotion == Emotion::Wow);
  CHECK(s.ranked[1].emotion == Emotion::Haha);
  CHECK(s.ranked[2].emotion == Emotion::Sad);
  CHECK(s.nth(4) == 0.0);
}
