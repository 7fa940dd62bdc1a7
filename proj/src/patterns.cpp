#include "reaction_miner/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "reaction_miner/error.hpp"
#include "reaction_miner/util.hpp"

namespace reaction_miner {

// ---- Pattern --------------------------------------------------------------------

std::size_t Pattern::wildcard_position() const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].is_wildcard()) return i;
  }
  return elements.size();
}

bool Pattern::valid() const {
  if (elements.size() < 2 || elements.size() > 3) return false;
  std::size_t wild = 0;
  for (const auto& e : elements) {
    if (e.is_wildcard()) {
      ++wild;
    } else if (e.surface.empty()) {
      return false;
    }
  }
  return wild == 1;
}

std::string Pattern::text() const {
  std::string out;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i) out += ' ';
    const auto& e = elements[i];
    if (e.is_wildcard()) {
      out += '*';
    } else {
      if (e.surface == "*" || e.surface.front() == '\\') out += '\\';
      out += e.surface;
    }
  }
  return out;
}

Pattern Pattern::parse(std::string_view text) {
  Pattern p;
  for (auto tok : split(text, ' ')) {
    if (tok.empty()) throw FormatError("pattern: empty element in '" + std::string(text) + "'");
    if (tok == "*") {
      p.elements.push_back(Element::wildcard());
      continue;
    }
    std::string surface(tok.front() == '\\' ? tok.substr(1) : tok);
    if (surface.empty()) throw FormatError("pattern: dangling escape in '" + std::string(text) + "'");
    p.elements.push_back(is_symbol_surface(surface) ? Element::symbol(std::move(surface))
                                                    : Element::word(std::move(surface)));
  }
  if (!p.valid()) throw FormatError("pattern: '" + std::string(text) + "' needs 2-3 elements with one '*'");
  return p;
}

std::uint64_t PatternStats::total() const { return std::accumulate(freq.begin(), freq.end(), std::uint64_t{0}); }

// ---- mining ---------------------------------------------------------------------

namespace {

using SurfaceId = std::uint32_t;
constexpr SurfaceId kWild = 0xFFFFFFFFu;
constexpr SurfaceId kNone = 0xFFFFFFFEu;

struct CandidateKey {
  std::array<SurfaceId, 3> ids{kNone, kNone, kNone};
  friend bool operator==(const CandidateKey&, const CandidateKey&) = default;
};

struct CandidateKeyHash {
  std::size_t operator()(const CandidateKey& k) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (auto id : k.ids) {
      h ^= id + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

struct Candidate {
  std::array<std::uint64_t, kEmotionCount> freq{};
  std::vector<SurfaceId> fillers;  // sorted, unique

  void add_filler(SurfaceId id) {
    auto it = std::lower_bound(fillers.begin(), fillers.end(), id);
    if (it == fillers.end() || *it != id) fillers.insert(it, id);
  }
};

using CandidateMap = std::unordered_map<CandidateKey, Candidate, CandidateKeyHash>;

struct SurfaceInfo {
  bool word = false;
  bool survives = false;  // in reduced graph, or a symbol
  bool in_graph = false;
};

}  // namespace

MinedPatterns extract_patterns(const ReducedGraph& reduced, std::span<const LabeledTokens> labeled,
                               const MiningParams& params) {
  if (params.max_length < 2 || params.max_length > 3) throw ConfigError("max pattern length must be 2 or 3");

  // Intern surfaces once so counting works on integer ids.
  std::unordered_map<std::string, SurfaceId> ids;
  std::vector<const std::string*> surfaces;
  std::vector<SurfaceInfo> info;
  std::vector<std::vector<SurfaceId>> seqs(labeled.size());
  for (std::size_t c = 0; c < labeled.size(); ++c) {
    const auto& els = labeled[c].tokens.elements;
    seqs[c].reserve(els.size());
    for (const auto& el : els) {
      auto [it, inserted] = ids.try_emplace(el.surface, static_cast<SurfaceId>(surfaces.size()));
      if (inserted) {
        surfaces.push_back(&it->first);
        bool in_graph = reduced.keeps(el.surface);
        bool word = el.kind == ElementKind::Word;
        info.push_back({word, in_graph || el.kind == ElementKind::Symbol, in_graph});
      }
      seqs[c].push_back(it->second);
    }
  }

  auto count_partition = [&](std::size_t b, std::size_t e, CandidateMap& out) {
    for (std::size_t c = b; c < e; ++c) {
      const auto& seq = seqs[c];
      // Comments with fewer than two elements cannot hold a pattern.
      if (seq.size() < 2) continue;
      const auto label = index_of(labeled[c].label);
      for (std::size_t len = 2; len <= params.max_length; ++len) {
        for (std::size_t i = 0; i + len <= seq.size(); ++i) {
          for (std::size_t w = 0; w < len; ++w) {
            const auto slot = seq[i + w];
            if (!info[slot].word) continue;
            CandidateKey key;
            bool ok = true;
            for (std::size_t k = 0; k < len; ++k) {
              if (k == w) {
                key.ids[k] = kWild;
              } else if (info[seq[i + k]].survives) {
                key.ids[k] = seq[i + k];
              } else {
                ok = false;
                break;
              }
            }
            if (!ok) continue;
            auto& cand = out[key];
            ++cand.freq[label];
            if (info[slot].in_graph) cand.add_filler(slot);
          }
        }
      }
    }
  };

  auto parts = partition_count(labeled.size(), 2048);
  std::vector<CandidateMap> partial(parts);
  parallel_partitions(labeled.size(), parts,
                      [&](std::size_t b, std::size_t e, std::size_t p) { count_partition(b, e, partial[p]); });
  CandidateMap merged = std::move(partial[0]);
  for (std::size_t p = 1; p < parts; ++p) {
    for (auto& [key, cand] : partial[p]) {
      auto& dst = merged[key];
      for (std::size_t k = 0; k < kEmotionCount; ++k) dst.freq[k] += cand.freq[k];
      for (auto f : cand.fillers) dst.add_filler(f);
    }
    partial[p].clear();
  }

  std::vector<std::pair<Pattern, PatternStats>> kept;
  const std::size_t min_fillers = std::max<std::size_t>(1, params.min_fillers);
  for (const auto& [key, cand] : merged) {
    if (cand.fillers.size() < min_fillers) continue;
    std::uint64_t total = std::accumulate(cand.freq.begin(), cand.freq.end(), std::uint64_t{0});
    if (total < params.min_pattern_freq) continue;
    Pattern p;
    bool anchored = false;
    for (auto id : key.ids) {
      if (id == kNone) break;
      if (id == kWild) {
        p.elements.push_back(Element::wildcard());
        continue;
      }
      anchored = anchored || info[id].in_graph;
      p.elements.push_back(info[id].word ? Element::word(*surfaces[id]) : Element::symbol(*surfaces[id]));
    }
    if (!anchored) continue;
    PatternStats s;
    s.freq = cand.freq;
    for (auto f : cand.fillers) s.fillers.push_back(*surfaces[f]);
    std::sort(s.fillers.begin(), s.fillers.end());
    s.unique_fillers = s.fillers.size();
    kept.emplace_back(std::move(p), std::move(s));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  MinedPatterns out;
  out.patterns.reserve(kept.size());
  out.stats.reserve(kept.size());
  for (auto& [p, s] : kept) {
    out.patterns.push_back(std::move(p));
    out.stats.push_back(std::move(s));
  }
  return out;
}

// ---- weights --------------------------------------------------------------------

namespace {
double log_in(double x, LogBase base) { return base == LogBase::Natural ? std::log(x) : std::log10(x); }
}  // namespace

double pattern_frequency(const PatternStats& stats, Emotion emo, LogBase base) {
  return log_in(static_cast<double>(stats.frequency(emo)) + 1.0, base);
}

double inverse_emotion_frequency(const PatternStats& stats) {
  auto present = std::count_if(stats.freq.begin(), stats.freq.end(), [](auto f) { return f > 0; });
  if (present == 0) throw ContractViolation("inverse emotion frequency of a pattern that never occurs");
  return static_cast<double>(kEmotionCount) / static_cast<double>(present);
}

double diversity(const PatternStats& stats, LogBase base) {
  if (stats.unique_fillers == 0) throw ContractViolation("diversity of a pattern without fillers");
  return log_in(static_cast<double>(stats.unique_fillers), base);
}

double emotion_degree(const PatternStats& stats, Emotion emo, LogBase base) {
  return pattern_frequency(stats, emo, base) * inverse_emotion_frequency(stats) * diversity(stats, base);
}

// ---- EmotionModel ---------------------------------------------------------------

namespace {

void append_lookup(std::string& key, const Element& e) {
  key += e.is_wildcard() ? '\x02' : (e.kind == ElementKind::Symbol ? '\x03' : '\x04');
  key += e.surface;
  key += '\x1f';
}

std::string lookup_key(const Pattern& p) {
  std::string key;
  for (const auto& e : p.elements) append_lookup(key, e);
  return key;
}

}  // namespace

EmotionModel EmotionModel::build(std::vector<Pattern> patterns, std::vector<PatternStats> stats, LogBase base) {
  if (patterns.size() != stats.size()) throw ModelError("pattern and stats lists differ in length");
  if (patterns.size() >= std::numeric_limits<PatternIndex>::max()) throw ModelError("too many patterns");
  EmotionModel m;
  m.base_ = base;
  const auto n = patterns.size();
  m.degree_.assign(n * kEmotionCount, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    if (!patterns[p].valid()) throw ModelError("invalid pattern '" + patterns[p].text() + "'");
    if (stats[p].total() == 0 || stats[p].unique_fillers == 0) {
      throw ModelError("pattern '" + patterns[p].text() + "' has no occurrences or no fillers");
    }
    if (!m.index_.emplace(lookup_key(patterns[p]), static_cast<PatternIndex>(p)).second) {
      throw ModelError("duplicate pattern '" + patterns[p].text() + "'");
    }
    for (auto e : kEmotions) m.degree_[p * kEmotionCount + index_of(e)] = emotion_degree(stats[p], e, base);
  }
  for (auto e : kEmotions) {
    auto& order = m.ranking_[index_of(e)];
    order.resize(n);
    std::iota(order.begin(), order.end(), PatternIndex{0});
    std::stable_sort(order.begin(), order.end(), [&](PatternIndex a, PatternIndex b) {
      return m.degree_[a * kEmotionCount + index_of(e)] > m.degree_[b * kEmotionCount + index_of(e)];
    });
    auto& pos = m.rank_pos_[index_of(e)];
    pos.resize(n);
    for (std::size_t r = 0; r < n; ++r) pos[order[r]] = static_cast<std::uint32_t>(r + 1);
  }
  m.patterns_ = std::move(patterns);
  m.stats_ = std::move(stats);
  return m;
}

std::optional<EmotionModel::PatternIndex> EmotionModel::find(const Pattern& p) const {
  auto it = index_.find(lookup_key(p));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::map<EmotionModel::PatternIndex, std::uint32_t> EmotionModel::match(const TokenSeq& tokens) const {
  std::map<PatternIndex, std::uint32_t> counts;
  if (index_.empty()) return counts;
  const auto& els = tokens.elements;
  std::string key;
  for (std::size_t len = 2; len <= 3; ++len) {
    for (std::size_t i = 0; i + len <= els.size(); ++i) {
      for (std::size_t w = 0; w < len; ++w) {
        if (els[i + w].kind != ElementKind::Word) continue;
        key.clear();
        for (std::size_t k = 0; k < len; ++k) {
          if (k == w) {
            key += "\x02\x1f";
          } else {
            append_lookup(key, els[i + k]);
          }
        }
        auto it = index_.find(key);
        if (it != index_.end()) ++counts[it->second];
      }
    }
  }
  return counts;
}

std::map<EmotionModel::PatternIndex, std::uint32_t> match(const TokenSeq& tokens, const EmotionModel& model) {
  return model.match(tokens);
}

std::string EmotionModel::serialize() const {
  std::string out(kModelHeader);
  out += '\n';
  for (std::size_t p = 0; p < patterns_.size(); ++p) {
    out += patterns_[p].text();
    for (auto f : stats_[p].freq) out += '\t' + std::to_string(f);
    out += '\t' + std::to_string(stats_[p].unique_fillers) + '\n';
  }
  return out;
}

EmotionModel EmotionModel::parse(std::span<const std::string> lines, LogBase base) {
  if (lines.empty() || lines[0] != kModelHeader) throw FormatError("model: missing or unsupported header");
  std::vector<Pattern> patterns;
  std::vector<PatternStats> stats;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto f = split(lines[ln], '\t');
    if (f.size() != 2 + kEmotionCount) throw FormatError("model: bad field count at line " + std::to_string(ln + 1));
    PatternStats s;
    try {
      for (std::size_t k = 0; k < kEmotionCount; ++k) s.freq[k] = std::stoull(std::string(f[1 + k]));
      s.unique_fillers = std::stoull(std::string(f[1 + kEmotionCount]));
    } catch (const std::exception&) {
      throw FormatError("model: bad number at line " + std::to_string(ln + 1));
    }
    patterns.push_back(Pattern::parse(f[0]));
    stats.push_back(std::move(s));
  }
  try {
    return build(std::move(patterns), std::move(stats), base);
  } catch (const ModelError& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
}

EmotionModel EmotionModel::load(const std::filesystem::path& path, LogBase base) {
  auto lines = read_lines(path);
  return parse(lines, base);
}

}  // namespace reaction_miner
