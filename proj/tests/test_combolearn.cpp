#include "doctest.h"

#include <random>

#include "reaction_miner/combolearn.hpp"
#include "reaction_miner/error.hpp"

namespace rm = reaction_miner;
using rm::Emotion;

namespace {
rm::PatternStats stats(std::array<std::uint64_t, 5> f, std::uint64_t fillers) {
  rm::PatternStats s;
  s.freq = f;
  s.unique_fillers = fillers;
  return s;
}

// Sarcastic rows carry Angry and Haha mass, the others a single emotion.
std::vector<rm::TrainingExample> separable(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<rm::TrainingExample> out;
  for (std::size_t i = 0; i < count; ++i) {
    rm::TrainingExample ex{rm::ScoreMatrix(6), i % 3 == 0};
    if (ex.sarcastic) {
      ex.matrix.at(Emotion::Angry, i % 6) = 3.0 + u(rng);
      ex.matrix.at(Emotion::Haha, (i + 1) % 6) = 3.0 + u(rng);
    } else {
      ex.matrix.at(rm::kEmotions[2 + i % 3], i % 6) = 3.0 + u(rng);
      ex.matrix.at(Emotion::Angry, (i + 2) % 6) = u(rng) * 0.2;
    }
    out.push_back(std::move(ex));
  }
  return out;
}
}  // namespace

TEST_CASE("build_matrix") {
  // Angry ranking: p0, p1, p2; Haha ranking: p2, ...
  std::vector<rm::Pattern> ps{rm::Pattern::parse("a *"), rm::Pattern::parse("b *"), rm::Pattern::parse("c *")};
  auto model = rm::EmotionModel::build(ps, {stats({50, 0, 0, 0, 0}, 5), stats({20, 0, 0, 0, 0}, 5),
                                            stats({2, 40, 0, 0, 0}, 5)});
  auto m = rm::build_matrix(rm::tokenize_en("a x a y"), model, 3);
  CHECK(m.at(Emotion::Angry, 0) == 2.0);
  auto c = rm::build_matrix(rm::tokenize_en("c z"), model, 3);
  CHECK(c.at(Emotion::Angry, 2) == 3.0);
  CHECK(c.at(Emotion::Haha, 0) == 1.0);
  CHECK(rm::build_matrix(rm::tokenize_en("nothing"), model, 3).all_zero());
  CHECK_THROWS_AS(rm::build_matrix(rm::tokenize_en("a x"), model, 4), rm::ConfigError);
  CHECK_THROWS_AS(rm::build_matrix(rm::tokenize_en("a x"), model, 0), rm::ConfigError);
}

TEST_CASE("train") {
  auto data = separable(90, 1);
  rm::LearnerConfig cfg;
  cfg.epochs = 40;
  SUBCASE("separable data is learned") {
    auto trace = rm::train(data, cfg, 5);
    CHECK(trace.epoch_accuracy.back() >= 0.95);
    for (double r : trace.rate) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
  SUBCASE("logistic learner") {
    cfg.kind = rm::LearnerKind::Logistic;
    CHECK(rm::train(data, cfg, 5).epoch_accuracy.back() >= 0.95);
  }
  SUBCASE("deterministic per seed") {
    auto a = rm::train(data, cfg, 9), b = rm::train(data, cfg, 9);
    CHECK(a.correct == b.correct);
    CHECK(a.epoch_loss == b.epoch_loss);
    CHECK(a.parameters.weights == b.parameters.weights);
  }
  SUBCASE("one epoch gives rates 0 or 1") {
    cfg.epochs = 1;
    for (double r : rm::train(data, cfg, 2).rate) CHECK((r == 0.0 || r == 1.0));
  }
  SUBCASE("full-batch loss is non-increasing at a small step") {
    cfg.batch_size = 0;
    cfg.learning_rate = 0.01;
    auto trace = rm::train(data, cfg, 3);
    for (std::size_t e = 1; e < trace.epoch_loss.size(); ++e) CHECK(trace.epoch_loss[e] <= trace.epoch_loss[e - 1] + 1e-12);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(rm::train({}, cfg, 1), rm::TrainingError);
    std::vector<rm::TrainingExample> one_class(data.begin() + 1, data.begin() + 3);
    CHECK_THROWS_AS(rm::train(one_class, cfg, 1), rm::TrainingError);
    cfg.epochs = 0;
    CHECK_THROWS_AS(rm::train(data, cfg, 1), rm::ConfigError);
  }
  SUBCASE("prediction separates the classes") {
    auto trace = rm::train(data, cfg, 4);
    CHECK(rm::predict_probability(trace.parameters, cfg, data[0].matrix) > 0.5);
    CHECK(rm::predict_probability(trace.parameters, cfg, data[1].matrix) < 0.5);
  }
}

TEST_CASE("combo histogram and selection") {
  rm::ComboHistogram h;
  const rm::EmotionPair ah(Emotion::Angry, Emotion::Haha), aw(Emotion::Angry, Emotion::Wow), sl(Emotion::Sad, Emotion::Love);
  h.counts[3][ah.canonical_index()] = 40;
  h.counts[3][aw.canonical_index()] = 25;
  h.counts[3][sl.canonical_index()] = 3;
  CHECK(rm::select_combos(h, 2) == std::vector<rm::EmotionPair>{ah, aw});
  CHECK(rm::select_combos(h, 1) == std::vector<rm::EmotionPair>{ah});
  CHECK(h.empty_at(0));
  CHECK_THROWS_AS(rm::select_combos(h, 0), rm::ContractViolation);

  rm::ComboHistogram flat;
  flat.counts[3].fill(4);
  CHECK(rm::select_combos(flat, 1) == std::vector<rm::EmotionPair>{rm::all_emotion_pairs()[0]});
  CHECK_THROWS_AS(rm::select_combos(rm::ComboHistogram{}, 2), rm::TrainingError);

  auto text = h.serialize();
  CHECK(text.find("angry-haha\t0\t0\t0\t40\n") != std::string::npos);
}

TEST_CASE("combo_histogram tallies sarcastic examples by top-2 pair") {
  auto data = separable(30, 2);
  rm::TrainTrace trace;
  trace.epochs = 10;
  std::vector<rm::EmotionScores> scores;
  for (std::size_t i = 0; i < data.size(); ++i) {
    trace.correct_epochs.push_back(i % 2 == 0 ? 10 : 8);
    trace.rate.push_back(trace.correct_epochs.back() / 10.0);
    scores.push_back(rm::make_scores({5, 4, 0, 0, 0}, 1));
  }
  auto h = rm::combo_histogram(data, trace, scores);
  const rm::EmotionPair ah(Emotion::Angry, Emotion::Haha);
  // Sarcastic: i = 0, 3, ..., 27; even ones reach 1.0.
  CHECK(h.count(0, ah) == 5);
  CHECK(h.count(2, ah) == 10);
  CHECK(h.count(3, ah) == 10);
  scores.pop_back();
  CHECK_THROWS_AS(rm::combo_histogram(data, trace, scores), rm::ContractViolation);
}

TEST_CASE("annotated file") {
  std::vector<std::string> lines{"c1\ten\t1\tyeah right", "c2\ten\t0\tnice"};
  auto a = rm::parse_annotated(lines);
  REQUIRE(a.size() == 2);
  CHECK(a[0].sarcastic);
  CHECK(a[1].text == "nice");
  std::vector<std::string> bad{"c1\ten\t2\tx"};
  CHECK_THROWS_AS(rm::parse_annotated(bad), rm::FormatError);
}
