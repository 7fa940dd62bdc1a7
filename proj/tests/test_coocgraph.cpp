#include "doctest.h"

#include "reaction_miner/coocgraph.hpp"
#include "reaction_miner/error.hpp"

namespace rm = reaction_miner;

namespace {
rm::TokenSeq words(std::initializer_list<const char*> ws) {
  rm::TokenSeq s;
  for (auto w : ws) s.elements.push_back(rm::Element::word(w));
  return s;
}

rm::CoocGraph with_node(const std::string& w, std::uint64_t f, std::uint64_t total) {
  rm::CoocGraph g;
  g.add_node(w, f);
  if (total > f) g.add_node("filler", total - f);
  return g;
}
}  // namespace

TEST_CASE("build_graph") {
  std::vector<rm::TokenSeq> aba{words({"a", "b", "a"})};
  auto g = rm::build_graph(aba);
  CHECK(g.node_frequency("a") == 2);
  CHECK(g.node_frequency("b") == 1);
  CHECK(g.edge_frequency("a", "b") == 1);
  CHECK(g.edge_frequency("b", "a") == 1);
  CHECK(g.edge_count() == 2);
  CHECK(g.total_node_frequency() == 3);

  CHECK(rm::build_graph({}).empty());
  std::vector<rm::TokenSeq> twice{words({"a", "b"}), words({"a", "b"})};
  CHECK(rm::build_graph(twice).edge_frequency("a", "b") == 2);
}

TEST_CASE("merge equals concatenation") {
  std::vector<rm::TokenSeq> p1{words({"a", "b", "c"})}, p2{words({"c", "a", "b"})};
  std::vector<rm::TokenSeq> all{p1[0], p2[0]};
  auto m = rm::build_graph(p1);
  m.merge(rm::build_graph(p2));
  CHECK(m == rm::build_graph(all));
}

TEST_CASE("serialization round trip") {
  std::vector<rm::TokenSeq> s{words({"x", "y", "x", "z"})};
  auto g = rm::build_graph(s);
  auto text = g.serialize();
  CHECK(text.rfind("#nodes 3 #edges 3", 0) == 0);
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') lines.push_back(text.substr(start, i - start)), start = i + 1;
  }
  CHECK(rm::CoocGraph::parse(lines) == g);
}

TEST_CASE("reduce_graph") {
  SUBCASE("absent from objective graph is kept") {
    auto r = rm::reduce_graph(with_node("w", 10, 100), rm::CoocGraph{}, 0.5);
    CHECK(r.keeps("w"));
  }
  SUBCASE("equality meets the rule at dominance 1") {
    auto r = rm::reduce_graph(with_node("w", 10, 100), with_node("w", 10, 100), 1.0);
    CHECK_FALSE(r.keeps("w"));
    CHECK(r.removed.count("w") == 1);
  }
  SUBCASE("small dominance removes every shared word") {
    auto r = rm::reduce_graph(with_node("w", 99, 100), with_node("w", 1, 1000), 1e-6);
    CHECK_FALSE(r.keeps("w"));
  }
  SUBCASE("symbols are exempt") {
    rm::CoocGraph s, o;
    s.add_node("!", 5);
    o.add_node("!", 500);
    CHECK(rm::reduce_graph(s, o, 0.5).keeps("!"));
  }
  SUBCASE("incident edges dropped") {
    std::vector<rm::TokenSeq> subj{words({"a", "w", "b"})}, obj{words({"w"})};
    auto r = rm::reduce_graph(rm::build_graph(subj), rm::build_graph(obj), 0.5);
    CHECK(r.removed == std::set<std::string>{"w"});
    CHECK(r.graph.edge_count() == 0);
  }
  SUBCASE("dominance out of range") {
    CHECK_THROWS_AS(rm::reduce_graph({}, {}, 0.0), rm::ConfigError);
    CHECK_THROWS_AS(rm::reduce_graph({}, {}, 1.5), rm::ConfigError);
  }
}
