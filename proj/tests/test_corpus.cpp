#include "doctest.h"

#include <set>

#include "reaction_miner/corpus.hpp"
#include "reaction_miner/error.hpp"

namespace rm = reaction_miner;
using rm::Emotion;

namespace {
std::vector<std::string> lines(std::initializer_list<const char*> l) { return {l.begin(), l.end()}; }
}  // namespace

TEST_CASE("parse_comments") {
  SUBCASE("empty input") {
    auto r = rm::parse_comments({}, rm::Lang::En);
    CHECK(r.comments.empty());
    CHECK(r.malformed == 0);
  }
  SUBCASE("three valid, one malformed") {
    auto l = lines({"c1\tp1\tu1\ten\thello there", "c2\tp1\tu2\ten\tok", "broken line", "c3\tp2\tu1\ten\ttabs\tin text"});
    auto r = rm::parse_comments(l, rm::Lang::En);
    REQUIRE(r.comments.size() == 3);
    CHECK(r.malformed == 1);
    CHECK(r.comments[2].text == "tabs\tin text");
  }
  SUBCASE("duplicate id kept with warning") {
    auto l = lines({"c1\tp1\tu1\ten\ta", "c1\tp1\tu2\ten\tb"});
    auto r = rm::parse_comments(l, rm::Lang::En);
    CHECK(r.comments.size() == 2);
    CHECK_FALSE(r.warnings.empty());
  }
  SUBCASE("other language counted") {
    auto l = lines({"c1\tp1\tu1\tzh\t你好", "c2\tp1\tu2\ten\thi"});
    auto r = rm::parse_comments(l, rm::Lang::En);
    CHECK(r.comments.size() == 1);
    CHECK(r.other_lang == 1);
  }
  SUBCASE("mostly malformed is fatal") {
    auto l = lines({"x", "y", "c1\tp1\tu1\ten\thi"});
    CHECK_THROWS_AS(rm::parse_comments(l, rm::Lang::En), rm::FormatError);
  }
}

TEST_CASE("parse_reactions keeps first duplicate") {
  auto l = lines({"p1\tu1\tangry", "p1\tu1\tlove", "p2\tu1\tsad"});
  auto r = rm::parse_reactions(l);
  CHECK(r.events.size() == 2);
  CHECK(r.duplicates == 1);
  CHECK(r.events[0].reaction == Emotion::Angry);
}

TEST_CASE("overlap_join") {
  std::vector<rm::RawComment> comments{{"c1", "p1", "u1", "text", rm::Lang::En}};
  SUBCASE("no reactions") { CHECK(rm::overlap_join(comments, {}).labeled.empty()); }
  SUBCASE("matching pair") {
    std::vector<rm::ReactionEvent> r{{"p1", "u1", Emotion::Angry}};
    auto j = rm::overlap_join(comments, r);
    REQUIRE(j.labeled.size() == 1);
    CHECK(j.labeled[0].label == Emotion::Angry);
  }
  SUBCASE("post mismatch") {
    std::vector<rm::ReactionEvent> r{{"p2", "u1", Emotion::Sad}};
    CHECK(rm::overlap_join(comments, r).labeled.empty());
  }
  SUBCASE("every comment of the user inherits the label") {
    comments.push_back({"c2", "p1", "u1", "again", rm::Lang::En});
    std::vector<rm::ReactionEvent> r{{"p1", "u1", Emotion::Wow}};
    auto j = rm::overlap_join(comments, r);
    CHECK(j.labeled.size() == 2);
  }
}

TEST_CASE("distribution") {
  std::vector<Emotion> one{Emotion::Love};
  auto d = rm::distribution(std::span<const Emotion>(one));
  CHECK(d.total == 1);
  CHECK(d.share(Emotion::Love) == 1.0);
  CHECK(d.share(Emotion::Angry) == 0.0);

  std::vector<Emotion> a{Emotion::Angry, Emotion::Haha, Emotion::Angry}, b{Emotion::Sad, Emotion::Angry};
  std::vector<Emotion> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  auto sum = rm::distribution(std::span<const Emotion>(a)) + rm::distribution(std::span<const Emotion>(b));
  CHECK(sum.counts == rm::distribution(std::span<const Emotion>(ab)).counts);
  CHECK(sum.total == 5);
}

TEST_CASE("synth_corpus") {
  auto cfg = rm::default_synth_config(rm::Lang::En);
  cfg.comments_per_emotion.fill(100);
  SUBCASE("deterministic per seed") {
    auto x = rm::synth_corpus(cfg, 7), y = rm::synth_corpus(cfg, 7);
    CHECK(rm::format_labeled(x.labeled) == rm::format_labeled(y.labeled));
    CHECK(rm::format_posts(x.posts) == rm::format_posts(y.posts));
    CHECK(x.sarcastic_ids == y.sarcastic_ids);
  }
  SUBCASE("rate zero") { CHECK(rm::synth_corpus(cfg, 1).sarcastic_ids.empty()); }
  SUBCASE("rate 0.1 over 500 comments") {
    cfg.sarcasm_rate = 0.1;
    auto c = rm::synth_corpus(cfg, 3);
    // Binomial(500, 0.1): mean 50, sd about 6.7.
    CHECK(c.sarcastic_ids.size() >= 25);
    CHECK(c.sarcastic_ids.size() <= 75);
  }
  SUBCASE("files round-trip through the join") {
    auto c = rm::synth_corpus(cfg, 4);
    auto raw = rm::strip_labels(c.labeled);
    auto ev = rm::reactions_of(c.labeled);
    auto j = rm::overlap_join(raw, ev);
    REQUIRE(j.labeled.size() == c.labeled.size());
    for (std::size_t i = 0; i < j.labeled.size(); ++i) CHECK(j.labeled[i].label == c.labeled[i].label);
  }
}

TEST_CASE("labeled file round trip") {
  std::vector<rm::LabeledComment> l{{{"c1", "p1", "u1", "so sad .", rm::Lang::En}, Emotion::Sad}};
  auto text = rm::format_labeled(l);
  std::vector<std::string> ls;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') ls.push_back(text.substr(start, i - start)), start = i + 1;
  }
  auto back = rm::parse_labeled(ls);
  REQUIRE(back.size() == 1);
  CHECK(back[0].label == Emotion::Sad);
  CHECK(back[0].comment.text == "so sad .");
}
