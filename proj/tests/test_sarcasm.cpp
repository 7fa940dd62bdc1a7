#include "doctest.h"

#include "reaction_miner/error.hpp"
#include "reaction_miner/sarcasm.hpp"

namespace rm = reaction_miner;
using rm::Emotion;

namespace {
rm::EmotionScores top3(double s1, double s2, double s3, Emotion a = Emotion::Angry, Emotion b = Emotion::Haha,
                       Emotion c = Emotion::Wow) {
  std::array<double, 5> v{};
  v[rm::index_of(a)] = s1;
  v[rm::index_of(b)] = s2;
  v[rm::index_of(c)] = s3;
  return rm::make_scores(v, 1);
}
}  // namespace

TEST_CASE("is_candidate") {
  auto t = rm::SarcasmThresholds::defaults(rm::Lang::En);
  CHECK(rm::is_candidate({Emotion::Angry, Emotion::Haha}, t));
  CHECK(rm::is_candidate({Emotion::Haha, Emotion::Angry}, t));
  CHECK_FALSE(rm::is_candidate({Emotion::Sad, Emotion::Love}, t));
}

TEST_CASE("distance_ratio") {
  CHECK(*rm::distance_ratio(top3(10, 6, 2)) == 1.0);
  CHECK_FALSE(rm::distance_ratio(top3(10, 10, 2)).has_value());
  CHECK(*rm::distance_ratio(top3(10, 6, 6)) == 0.0);
  CHECK_THROWS_AS(rm::distance_ratio(rm::make_scores({}, 0)), rm::NoSignalError);
}

TEST_CASE("score_ratios") {
  auto r = *rm::score_ratios(top3(10, 6, 2));
  CHECK(r.third_to_second == doctest::Approx(1.0 / 3.0));
  CHECK(r.second_to_first == doctest::Approx(0.6));
  auto eq = *rm::score_ratios(top3(10, 10, 10));
  CHECK(eq.third_to_second == 1.0);
  CHECK(eq.second_to_first == 1.0);
  CHECK_FALSE(rm::score_ratios(top3(10, 0, 0)).has_value());
}

TEST_CASE("label_sarcasm") {
  auto t = rm::SarcasmThresholds::defaults(rm::Lang::En);
  auto v = rm::label_sarcasm(top3(10, 9, 2), t);
  CHECK(v.candidate);
  CHECK(*v.distance_ratio == doctest::Approx(7.0));
  CHECK(v.score_ratios->third_to_second == doctest::Approx(2.0 / 9.0));
  CHECK(v.score_ratios->second_to_first == doctest::Approx(0.9));
  CHECK(v.sarcastic);
  CHECK(v.reason == rm::SarcasmReason::Sarcastic);

  auto sl = rm::label_sarcasm(top3(10, 9, 2, Emotion::Sad, Emotion::Love, Emotion::Angry), t);
  CHECK_FALSE(sl.sarcastic);
  CHECK(sl.reason == rm::SarcasmReason::NotCandidate);

  auto tie = rm::label_sarcasm(top3(8, 8, 2, Emotion::Angry, Emotion::Wow, Emotion::Sad), t);
  CHECK_FALSE(tie.sarcastic);
  CHECK(tie.reason == rm::SarcasmReason::DegenerateScores);

  auto far = rm::label_sarcasm(top3(10, 9.9, 0), t);
  CHECK(far.reason == rm::SarcasmReason::DistanceOutOfRange);

  auto low = rm::label_sarcasm(top3(10, 4, 1), t);
  CHECK(*low.distance_ratio == doctest::Approx(0.5));
  CHECK(low.reason == rm::SarcasmReason::ScoreRatioTooLow);
}

TEST_CASE("threshold profiles") {
  std::vector<std::string> lines{"[en]", "x1 = 0.25", "combos = angry-haha, sad-love", "[zh]", "y2 = 0.4"};
  auto p = rm::parse_threshold_profiles(lines);
  CHECK(p.at(rm::Lang::En).x1 == 0.25);
  CHECK(p.at(rm::Lang::En).x2 == 10.0);
  CHECK(p.at(rm::Lang::En).combos.size() == 2);
  CHECK(p.at(rm::Lang::Zh).y2 == 0.4);
  std::vector<std::string> bad{"[en]", "x1 = 5", "x2 = 1"};
  CHECK_THROWS_AS(rm::parse_threshold_profiles(bad), rm::ConfigError);
  std::vector<std::string> unknown{"[en]", "x9 = 1"};
  CHECK_THROWS_AS(rm::parse_threshold_profiles(unknown), rm::ConfigError);
}
