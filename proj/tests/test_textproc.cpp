#include "doctest.h"

#include "oracles.hpp"
#include "reaction_miner/textproc.hpp"

namespace rm = reaction_miner;
using rm::Element;

TEST_CASE("normalize") {
  CHECK(rm::normalize("Check HTTP://X.CO @bob!!") == "check url user !!");
  CHECK(rm::normalize("") == "");
  CHECK(rm::normalize("你好!!") == "你好!!");
  for (const char* s : {"Check HTTP://X.CO @bob!!", "  A  b ", "www.x.org and @me"}) {
    CHECK(rm::normalize(rm::normalize(s)) == rm::normalize(s));
  }
}

TEST_CASE("tokenize_en") {
  using V = std::vector<Element>;
  CHECK(rm::tokenize_en("happy bday john").elements ==
        V{Element::word("happy"), Element::word("bday"), Element::word("john")});
  CHECK(rm::tokenize_en("so sad .").elements == V{Element::word("so"), Element::word("sad"), Element::symbol(".")});
  CHECK(rm::tokenize_en("what !!!!").elements == V{Element::word("what"), Element::symbol("!!!!")});
  CHECK(rm::tokenize_en("").elements.empty());
  auto t = rm::tokenize_en("wow!! really?");
  CHECK(rm::tokenize_en(rm::render(t)).elements == t.elements);
}

TEST_CASE("build_zh_lexicon") {
  std::vector<std::string> abcd{"天氣晴朗"};
  auto lex = rm::build_zh_lexicon(abcd, 1);
  CHECK(lex.entries() == std::map<std::string, std::uint64_t>{{"天氣晴朗", 1}});
  CHECK(rm::build_zh_lexicon({}, 1).empty());
  std::vector<std::string> xy(5, "你好");
  CHECK(rm::build_zh_lexicon(xy, 3).entries() == std::map<std::string, std::uint64_t>{{"你好", 5}});
  std::vector<std::string> nested{"你好嗎", "你好嗎", "你好"};
  auto raw = rm::count_zh_ngrams(nested);
  auto adjusted = rm::build_zh_lexicon(nested, 1);
  for (const auto& [w, f] : adjusted.entries()) CHECK(f <= raw[w]);
}

TEST_CASE("segment_zh") {
  using V = std::vector<Element>;
  rm::ZhLexicon ab({{"天氣", 5}});
  CHECK(rm::segment_zh("天氣晴", ab).elements == V{Element::word("天氣"), Element::word("晴")});
  CHECK(rm::segment_zh("天氣", rm::ZhLexicon{}).elements == V{Element::word("天"), Element::word("氣")});
  rm::ZhLexicon longer({{"天氣晴朗", 2}, {"天氣", 9}});
  CHECK(rm::segment_zh("天氣晴朗", longer).elements == V{Element::word("天氣晴朗")});

  const std::string text = "天氣晴朗！今天好";
  std::string joined;
  for (const auto& e : rm::segment_zh(text, longer).elements) joined += e.surface;
  CHECK(joined == text);
}

TEST_CASE("lexicon serialization round trip") {
  rm::ZhLexicon lex({{"天氣", 5}, {"晴朗", 7}});
  auto s = lex.serialize();
  CHECK(s.rfind("晴朗\t7", 0) == 0);
  std::vector<std::string> lines{"晴朗\t7", "天氣\t5"};
  CHECK(rm::ZhLexicon::parse(lines).entries() == lex.entries());
}

TEST_CASE("Tokenizer dispatch") {
  rm::Tokenizer en(rm::Lang::En);
  CHECK(en("So SAD .").elements.size() == 3);
  auto lex = std::make_shared<rm::ZhLexicon>(std::map<std::string, std::uint64_t>{{"天氣", 5}});
  rm::Tokenizer zh(rm::Lang::Zh, lex);
  CHECK(zh("天氣!").elements == std::vector<Element>{Element::word("天氣"), Element::symbol("!")});
}
