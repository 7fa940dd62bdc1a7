#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reaction_miner/textproc.hpp"

namespace reaction_miner {

/// Directed word co-occurrence graph. Nodes are element surfaces with their
/// occurrence counts; an edge a->b counts how often b directly follows a.
class CoocGraph {
 public:
  using NodeId = std::uint32_t;

  /// Adds one sequence: every element bumps its node, every adjacent pair its edge.
  void add(const TokenSeq& seq);
  /// Frequency-wise merge.
  void merge(const CoocGraph& other);

  std::uint64_t node_frequency(std::string_view surface) const;
  std::uint64_t edge_frequency(std::string_view from, std::string_view to) const;
  bool has_node(std::string_view surface) const { return find(surface) != kMissing; }

  std::size_t node_count() const { return surfaces_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  /// Sum of node frequencies (the element count of the input).
  std::uint64_t total_node_frequency() const { return total_; }
  bool empty() const { return surfaces_.empty(); }

  /// Nodes sorted by surface bytes.
  std::vector<std::pair<std::string, std::uint64_t>> nodes() const;
  struct Edge {
    std::string from;
    std::string to;
    std::uint64_t frequency;
  };
  /// Edges sorted by (from, to).
  std::vector<Edge> edges() const;

  /// Direct insertion, used by deserialization and reduction.
  void add_node(std::string_view surface, std::uint64_t freq);
  void add_edge(std::string_view from, std::string_view to, std::uint64_t freq);

  /// `#nodes N #edges M`, then `n` and `e` lines, deterministic order.
  std::string serialize() const;
  static CoocGraph parse(std::span<const std::string> lines);
  static CoocGraph load(const std::filesystem::path& path);

  friend bool operator==(const CoocGraph& a, const CoocGraph& b);

 private:
  static constexpr NodeId kMissing = ~NodeId{0};
  NodeId find(std::string_view surface) const;
  NodeId intern(std::string_view surface);
  static std::uint64_t edge_key(NodeId a, NodeId b) { return (std::uint64_t{a} << 32) | b; }

  std::vector<std::string> surfaces_;
  std::vector<std::uint64_t> freq_;
  std::unordered_map<std::string, NodeId> index_;
  std::unordered_map<std::uint64_t, std::uint64_t> edges_;
  std::uint64_t total_ = 0;
};

/// Builds the graph over all sequences; partitions are counted in parallel and merged.
CoocGraph build_graph(std::span<const TokenSeq> seqs);

struct ReducedGraph {
  CoocGraph graph;
  std::set<std::string> removed;

  bool keeps(std::string_view surface) const { return graph.has_node(surface); }
};

/// Graph serialization followed by one `r<TAB>surface` line per removed node.
std::string serialize_reduced(const ReducedGraph& reduced);
ReducedGraph parse_reduced(std::span<const std::string> lines);
ReducedGraph load_reduced(const std::filesystem::path& path);

inline constexpr double kDefaultDominance = 0.5;

/// The removal test on its own: objective relative frequency of `surface`
/// >= dominance x its subjective relative frequency. Symbols never qualify.
bool is_objective_dominant(const CoocGraph& subjective, const CoocGraph& objective, std::string_view surface,
                           double dominance);

/// Drops every dominant node of `subjective` together with its incident edges.
/// Throws ConfigError unless dominance lies in (0, 1].
ReducedGraph reduce_graph(const CoocGraph& subjective, const CoocGraph& objective, double dominance);

}  // namespace reaction_miner
