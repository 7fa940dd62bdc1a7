#include "reaction_miner/coocgraph.hpp"

#include <algorithm>
#include <tuple>

#include "reaction_miner/error.hpp"
#include "reaction_miner/util.hpp"

namespace reaction_miner {

CoocGraph::NodeId CoocGraph::find(std::string_view surface) const {
  auto it = index_.find(std::string(surface));
  return it == index_.end() ? kMissing : it->second;
}

CoocGraph::NodeId CoocGraph::intern(std::string_view surface) {
  auto [it, inserted] = index_.try_emplace(std::string(surface), static_cast<NodeId>(surfaces_.size()));
  if (inserted) {
    surfaces_.emplace_back(surface);
    freq_.push_back(0);
  }
  return it->second;
}

void CoocGraph::add_node(std::string_view surface, std::uint64_t freq) {
  auto id = intern(surface);
  freq_[id] += freq;
  total_ += freq;
}

void CoocGraph::add_edge(std::string_view from, std::string_view to, std::uint64_t freq) {
  auto a = find(from);
  auto b = find(to);
  if (a == kMissing || b == kMissing) throw ContractViolation("edge endpoint is not a node");
  edges_[edge_key(a, b)] += freq;
}

void CoocGraph::add(const TokenSeq& seq) {
  NodeId prev = kMissing;
  for (const auto& el : seq.elements) {
    auto id = intern(el.surface);
    ++freq_[id];
    ++total_;
    if (prev != kMissing) ++edges_[edge_key(prev, id)];
    prev = id;
  }
}

void CoocGraph::merge(const CoocGraph& other) {
  std::vector<NodeId> remap(other.surfaces_.size());
  for (NodeId i = 0; i < other.surfaces_.size(); ++i) {
    remap[i] = intern(other.surfaces_[i]);
    freq_[remap[i]] += other.freq_[i];
  }
  total_ += other.total_;
  for (const auto& [key, f] : other.edges_) {
    auto a = remap[static_cast<NodeId>(key >> 32)];
    auto b = remap[static_cast<NodeId>(key & 0xFFFFFFFFu)];
    edges_[edge_key(a, b)] += f;
  }
}

std::uint64_t CoocGraph::node_frequency(std::string_view surface) const {
  auto id = find(surface);
  return id == kMissing ? 0 : freq_[id];
}

std::uint64_t CoocGraph::edge_frequency(std::string_view from, std::string_view to) const {
  auto a = find(from);
  auto b = find(to);
  if (a == kMissing || b == kMissing) return 0;
  auto it = edges_.find(edge_key(a, b));
  return it == edges_.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, std::uint64_t>> CoocGraph::nodes() const {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  out.reserve(surfaces_.size());
  for (NodeId i = 0; i < surfaces_.size(); ++i) out.emplace_back(surfaces_[i], freq_[i]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CoocGraph::Edge> CoocGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [key, f] : edges_) {
    out.push_back({surfaces_[key >> 32], surfaces_[key & 0xFFFFFFFFu], f});
  }
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  return out;
}

std::string CoocGraph::serialize() const {
  std::string out = "#nodes " + std::to_string(node_count()) + " #edges " + std::to_string(edge_count()) + '\n';
  for (const auto& [s, f] : nodes()) out += "n\t" + s + '\t' + std::to_string(f) + '\n';
  for (const auto& e : edges()) out += "e\t" + e.from + '\t' + e.to + '\t' + std::to_string(e.frequency) + '\n';
  return out;
}

CoocGraph CoocGraph::parse(std::span<const std::string> lines) {
  if (lines.empty() || lines[0].rfind("#nodes ", 0) != 0) throw FormatError("graph: missing '#nodes' header");
  auto head = split(lines[0], ' ');
  if (head.size() != 4 || head[2] != "#edges") throw FormatError("graph: malformed header");
  const auto expect_nodes = std::stoull(std::string(head[1]));
  const auto expect_edges = std::stoull(std::string(head[3]));
  CoocGraph g;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto& line = lines[ln];
    if (line.empty()) continue;
    auto f = split(line, '\t');
    try {
      if (f[0] == "n" && f.size() == 3) {
        g.add_node(f[1], std::stoull(std::string(f[2])));
      } else if (f[0] == "e" && f.size() == 4) {
        g.add_edge(f[1], f[2], std::stoull(std::string(f[3])));
      } else if (f[0] == "r" && f.size() == 2) {
        // removal record of a reduced graph; not part of the graph itself
      } else {
        throw FormatError("");
      }
    } catch (const std::exception&) {
      throw FormatError("graph: bad record at line " + std::to_string(ln + 1));
    }
  }
  if (g.node_count() != expect_nodes || g.edge_count() != expect_edges) {
    throw FormatError("graph: header counts do not match records");
  }
  return g;
}

CoocGraph CoocGraph::load(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse(lines);
}

bool operator==(const CoocGraph& a, const CoocGraph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  if (a.nodes() != b.nodes()) return false;
  auto ea = a.edges();
  auto eb = b.edges();
  return std::equal(ea.begin(), ea.end(), eb.begin(), eb.end(), [](const auto& x, const auto& y) {
    return x.from == y.from && x.to == y.to && x.frequency == y.frequency;
  });
}

CoocGraph build_graph(std::span<const TokenSeq> seqs) {
  auto parts = partition_count(seqs.size());
  std::vector<CoocGraph> partial(parts);
  parallel_partitions(seqs.size(), parts, [&](std::size_t b, std::size_t e, std::size_t p) {
    for (std::size_t i = b; i < e; ++i) partial[p].add(seqs[i]);
  });
  CoocGraph out = std::move(partial[0]);
  for (std::size_t p = 1; p < parts; ++p) out.merge(partial[p]);
  return out;
}

bool is_objective_dominant(const CoocGraph& subjective, const CoocGraph& objective, std::string_view surface,
                           double dominance) {
  if (is_symbol_surface(surface)) return false;
  const auto obj_f = objective.node_frequency(surface);
  const auto subj_f = subjective.node_frequency(surface);
  if (obj_f == 0 || subj_f == 0) return false;
  // obj_f / obj_total >= dominance * subj_f / subj_total, cross-multiplied.
  const long double lhs = static_cast<long double>(obj_f) * static_cast<long double>(subjective.total_node_frequency());
  const long double rhs = static_cast<long double>(dominance) * static_cast<long double>(subj_f) *
                          static_cast<long double>(objective.total_node_frequency());
  return lhs >= rhs;
}

ReducedGraph reduce_graph(const CoocGraph& subjective, const CoocGraph& objective, double dominance) {
  if (!(dominance > 0.0 && dominance <= 1.0)) throw ConfigError("dominance must lie in (0, 1]");
  ReducedGraph out;
  for (const auto& [surface, freq] : subjective.nodes()) {
    if (is_objective_dominant(subjective, objective, surface, dominance)) {
      out.removed.insert(surface);
    } else {
      out.graph.add_node(surface, freq);
    }
  }
  for (const auto& e : subjective.edges()) {
    if (out.graph.has_node(e.from) && out.graph.has_node(e.to)) out.graph.add_edge(e.from, e.to, e.frequency);
  }
  return out;
}

std::string serialize_reduced(const ReducedGraph& reduced) {
  std::string out = reduced.graph.serialize();
  for (const auto& s : reduced.removed) out += "r\t" + s + '\n';
  return out;
}

ReducedGraph parse_reduced(std::span<const std::string> lines) {
  ReducedGraph out{CoocGraph::parse(lines), {}};
  for (const auto& line : lines) {
    if (line.rfind("r\t", 0) == 0) out.removed.insert(line.substr(2));
  }
  return out;
}

ReducedGraph load_reduced(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse_reduced(lines);
}

}  // namespace reaction_miner
