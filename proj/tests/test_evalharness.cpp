#include "doctest.h"

#include <algorithm>
#include <random>

#include "reaction_miner/error.hpp"
#include "reaction_miner/evalharness.hpp"

namespace rm = reaction_miner;
using rm::Emotion;

namespace {
rm::AnnotationSet table(std::size_t m, const std::vector<std::vector<std::uint8_t>>& rows) {
  rm::AnnotationSet set{m, {}};
  for (std::size_t i = 0; i < rows.size(); ++i) set.items.push_back({"t" + std::to_string(i), rm::Lang::En, "x", rows[i]});
  return set;
}
}  // namespace

TEST_CASE("fleiss_kappa") {
  CHECK(rm::fleiss_kappa(table(3, {{1, 1, 1}, {0, 0, 0}, {1, 1, 1}})).kappa == 1.0);
  CHECK(rm::fleiss_kappa(table(3, {{1, 1, 0}, {0, 0, 1}})).kappa == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  auto degenerate = rm::fleiss_kappa(table(2, {{1, 1}, {1, 1}}));
  CHECK(degenerate.degenerate);
  CHECK(degenerate.kappa == 1.0);
  CHECK_THROWS_AS(rm::fleiss_kappa(table(1, {{1}})), rm::ContractViolation);

  std::mt19937_64 rng(3);
  std::vector<std::vector<std::uint8_t>> rows(25);
  for (auto& r : rows) r = {static_cast<std::uint8_t>(rng() % 2), static_cast<std::uint8_t>(rng() % 2),
                            static_cast<std::uint8_t>(rng() % 2)};
  const double k = rm::fleiss_kappa(table(3, rows)).kappa;
  auto shuffled = rows;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(rm::fleiss_kappa(table(3, shuffled)).kappa == doctest::Approx(k).epsilon(1e-12));
  for (auto& r : shuffled) std::swap(r[0], r[2]);
  CHECK(rm::fleiss_kappa(table(3, shuffled)).kappa == doctest::Approx(k).epsilon(1e-12));
}

TEST_CASE("agree_labels") {
  auto set = table(3, {{1, 0, 0}, {1, 1, 1}, {0, 0, 0}});
  auto l1 = rm::agree_labels(set, 1), l2 = rm::agree_labels(set, 2), l3 = rm::agree_labels(set, 3);
  CHECK(l1.labels.at("t0") == 1);
  CHECK(l2.labels.at("t0") == 0);
  CHECK(l3.labels.at("t1") == 1);
  CHECK(l1.labels.at("t2") == 0);
  CHECK_THROWS_AS(rm::agree_labels(set, 4), rm::ContractViolation);
  CHECK_THROWS_AS(rm::agree_labels(table(2, {{1, 1}}), 3), rm::ContractViolation);
}

TEST_CASE("metrics") {
  auto perfect = rm::metrics_from_counts(4, 0, 6, 0);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);
  auto none = rm::metrics_from_counts(0, 0, 6, 4);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(none.degenerate());
  auto r = rm::metrics_from_counts(3, 1, 4, 2);
  CHECK(r.precision == 0.75);
  CHECK(r.recall == doctest::Approx(0.6));
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.accuracy == doctest::Approx(0.7));

  rm::AgreeGroundTruth truth{2, {{"a", 1}, {"b", 0}}};
  CHECK_THROWS_AS(rm::metrics({{"a", 1}}, truth), rm::ContractViolation);
}

TEST_CASE("predictions and report") {
  std::vector<std::string> two{"# header", "a\t1", "b\t0"};
  CHECK(rm::parse_predictions(two) == std::map<std::string, std::uint8_t>{{"a", 1}, {"b", 0}});
  std::vector<std::string> seven{"a\t1\t2.0\t0.1\t0.9\t1\tsarcastic"};
  CHECK(rm::parse_predictions(seven).at("a") == 1);

  auto set = table(3, {{1, 1, 0}, {0, 0, 0}});
  auto row = rm::evaluate_levels("emo-based", {{"t0", 1}, {"t1", 0}}, set);
  std::vector<rm::ReportRow> rows{row};
  auto text = rm::format_report(rows);
  CHECK(text.find("emo-based") != std::string::npos);
  CHECK(text.find("Agree 3") != std::string::npos);
}

TEST_CASE("naive bayes") {
  std::vector<rm::NbDocument> docs{{{"lol", "funny"}, 1}, {{"terrible", "news"}, 0}};
  for (auto f : {rm::NbFeatures::Bow, rm::NbFeatures::TfIdf}) {
    auto model = rm::nb_train(docs, f);
    std::vector<std::string> lol{"lol"}, unseen{"zebra"}, empty;
    CHECK(rm::nb_predict(model, lol) == 1);
    auto prior = model.log_posterior(empty);
    CHECK(model.log_posterior(unseen) == prior);
    CHECK(rm::nb_predict(model, empty) == 0);
    std::vector<rm::NbDocument> reversed{docs[1], docs[0]};
    CHECK(rm::nb_train(reversed, f).log_posterior(lol) == model.log_posterior(lol));
  }
  std::vector<rm::NbDocument> one_class{{{"a"}, 1}};
  CHECK_THROWS_AS(rm::nb_train(one_class, rm::NbFeatures::Bow), rm::TrainingError);
}

TEST_CASE("grid search") {
  std::vector<rm::EmotionScores> scores{rm::make_scores({10, 9, 2, 0, 0}, 1), rm::make_scores({10, 1, 0, 0, 0}, 1),
                                        rm::make_scores({10, 9.9, 1, 0, 0}, 1)};
  std::vector<std::uint8_t> truth{1, 0, 1};
  const auto base = rm::SarcasmThresholds::defaults(rm::Lang::En);
  rm::ThresholdGrid one{{0.5}, {10}, {0.1}, {0.5}};
  auto r1 = rm::grid_search_thresholds(scores, truth, one, base);
  CHECK(r1.evaluated == 1);
  CHECK(r1.best.x2 == 10.0);

  rm::ThresholdGrid wide{{0.5, 1.0}, {10, 200}, {0.0001, 0.1}, {0.5}};
  auto r2 = rm::grid_search_thresholds(scores, truth, wide, base);
  CHECK(r2.report.f1 == 1.0);
  CHECK(r2.best.x2 == 200.0);
  CHECK(r2.report.f1 >= r1.report.f1);

  rm::ThresholdGrid inverted{{5}, {1}, {0.1}, {0.5}};
  CHECK_THROWS_AS(rm::grid_search_thresholds(scores, truth, inverted, base), rm::ConfigError);
  CHECK_FALSE(rm::predict_sarcastic(rm::make_scores({}, 0), base));
}
