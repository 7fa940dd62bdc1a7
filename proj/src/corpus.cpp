#include "reaction_miner/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "reaction_miner/error.hpp"
#include "reaction_miner/util.hpp"

namespace reaction_miner {

std::string_view lang_name(Lang lang) { return lang == Lang::En ? "en" : "zh"; }

std::optional<Lang> parse_lang(std::string_view s) {
  if (s == "en") return Lang::En;
  if (s == "zh") return Lang::Zh;
  return std::nullopt;
}

namespace {

void check_malformed_ratio(std::size_t malformed, std::size_t seen, std::string_view what) {
  if (seen > 0 && malformed * 2 > seen) {
    throw FormatError(std::string(what) + ": " + std::to_string(malformed) + " of " + std::to_string(seen) +
                      " records malformed");
  }
}

std::string reaction_key(std::string_view post_id, std::string_view user_id) {
  std::string key(post_id);
  key += '\t';
  key += user_id;
  return key;
}

}  // namespace

CommentLoad parse_comments(std::span<const std::string> lines, Lang lang) {
  CommentLoad out;
  std::unordered_set<std::string> seen_ids;
  std::size_t seen = 0;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto& line = lines[ln];
    if (trim(line).empty()) continue;
    ++seen;
    auto f = split_n(line, '\t', 5);
    std::optional<Lang> record_lang;
    if (f.size() == 5) record_lang = parse_lang(f[3]);
    if (f.size() < 5 || f[0].empty() || f[1].empty() || f[2].empty() || !record_lang || trim(f[4]).empty()) {
      ++out.malformed;
      continue;
    }
    if (*record_lang != lang) {
      ++out.other_lang;
      continue;
    }
    RawComment c{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[4]), *record_lang};
    if (!seen_ids.insert(c.id).second) {
      out.warnings.push_back("duplicate comment id '" + c.id + "' at line " + std::to_string(ln + 1));
    }
    out.comments.push_back(std::move(c));
  }
  check_malformed_ratio(out.malformed, seen, "comment file");
  return out;
}

CommentLoad load_comments(const std::filesystem::path& path, Lang lang) {
  auto lines = read_lines(path);
  return parse_comments(lines, lang);
}

ReactionLoad parse_reactions(std::span<const std::string> lines) {
  ReactionLoad out;
  std::unordered_set<std::string> keys;
  std::size_t seen = 0;
  for (const auto& line : lines) {
    if (trim(line).empty()) continue;
    ++seen;
    auto f = split(line, '\t');
    if (f.size() != 3 || f[0].empty() || f[1].empty()) {
      ++out.malformed;
      continue;
    }
    // The file spelling is lowercase only.
    auto emo = parse_emotion(f[2]);
    if (!emo || emotion_name(*emo) != f[2]) {
      ++out.malformed;
      continue;
    }
    if (!keys.insert(reaction_key(f[0], f[1])).second) {
      ++out.duplicates;
      continue;
    }
    out.events.push_back({std::string(f[0]), std::string(f[1]), *emo});
  }
  check_malformed_ratio(out.malformed, seen, "reaction file");
  return out;
}

ReactionLoad load_reactions(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse_reactions(lines);
}

PostLoad parse_posts(std::span<const std::string> lines, Lang lang) {
  PostLoad out;
  std::size_t seen = 0;
  for (const auto& line : lines) {
    if (trim(line).empty()) continue;
    ++seen;
    auto f = split_n(line, '\t', 3);
    std::optional<Lang> record_lang;
    if (f.size() == 3) record_lang = parse_lang(f[1]);
    if (f.size() < 3 || f[0].empty() || !record_lang || trim(f[2]).empty()) {
      ++out.malformed;
      continue;
    }
    if (*record_lang != lang) {
      ++out.other_lang;
      continue;
    }
    out.posts.push_back({std::string(f[0]), std::string(f[2]), *record_lang});
  }
  check_malformed_ratio(out.malformed, seen, "post file");
  return out;
}

PostLoad load_posts(const std::filesystem::path& path, Lang lang) {
  auto lines = read_lines(path);
  return parse_posts(lines, lang);
}

std::string format_labeled(std::span<const LabeledComment> labeled) {
  std::string out;
  for (const auto& lc : labeled) {
    const auto& c = lc.comment;
    out += c.id + '\t' + c.post_id + '\t' + c.user_id + '\t';
    out += lang_name(c.lang);
    out += '\t';
    out += emotion_name(lc.label);
    out += '\t' + c.text + '\n';
  }
  return out;
}

std::vector<LabeledComment> parse_labeled(std::span<const std::string> lines) {
  std::vector<LabeledComment> out;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    auto f = split_n(lines[ln], '\t', 6);
    std::optional<Lang> lang;
    std::optional<Emotion> label;
    if (f.size() == 6) {
      lang = parse_lang(f[3]);
      label = parse_emotion(f[4]);
    }
    if (!lang || !label) throw FormatError("labeled file: bad record at line " + std::to_string(ln + 1));
    out.push_back({{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[5]), *lang}, *label});
  }
  return out;
}

std::vector<LabeledComment> load_labeled(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse_labeled(lines);
}

std::string format_comments(std::span<const RawComment> comments) {
  std::string out;
  for (const auto& c : comments) {
    out += c.id + '\t' + c.post_id + '\t' + c.user_id + '\t';
    out += lang_name(c.lang);
    out += '\t' + c.text + '\n';
  }
  return out;
}

std::string format_reactions(std::span<const ReactionEvent> events) {
  std::string out;
  for (const auto& r : events) {
    out += r.post_id + '\t' + r.user_id + '\t';
    out += emotion_name(r.reaction);
    out += '\n';
  }
  return out;
}

std::string format_posts(std::span<const NewsPost> posts) {
  std::string out;
  for (const auto& p : posts) {
    out += p.id + '\t';
    out += lang_name(p.lang);
    out += '\t' + p.text + '\n';
  }
  return out;
}

JoinResult overlap_join(std::span<const RawComment> comments, std::span<const ReactionEvent> reactions) {
  JoinResult out;
  std::unordered_map<std::string, Emotion> by_key;
  by_key.reserve(reactions.size());
  for (const auto& r : reactions) {
    if (!by_key.emplace(reaction_key(r.post_id, r.user_id), r.reaction).second) ++out.duplicate_reactions;
  }
  // Every comment a user leaves on a post inherits that user's single reaction.
  for (const auto& c : comments) {
    auto it = by_key.find(reaction_key(c.post_id, c.user_id));
    if (it == by_key.end()) {
      ++out.unmatched;
      continue;
    }
    out.labeled.push_back({c, it->second});
  }
  return out;
}

LabelDistribution distribution_from_counts(const std::array<std::uint64_t, kEmotionCount>& counts) {
  LabelDistribution d;
  d.counts = counts;
  for (auto c : counts) d.total += c;
  if (d.total > 0) {
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
      d.shares[i] = static_cast<double>(counts[i]) / static_cast<double>(d.total);
    }
  }
  return d;
}

LabelDistribution distribution(std::span<const LabeledComment> labeled) {
  std::array<std::uint64_t, kEmotionCount> counts{};
  for (const auto& lc : labeled) ++counts[index_of(lc.label)];
  return distribution_from_counts(counts);
}

LabelDistribution distribution(std::span<const Emotion> labels) {
  std::array<std::uint64_t, kEmotionCount> counts{};
  for (auto e : labels) ++counts[index_of(e)];
  return distribution_from_counts(counts);
}

LabelDistribution operator+(const LabelDistribution& a, const LabelDistribution& b) {
  std::array<std::uint64_t, kEmotionCount> counts{};
  for (std::size_t i = 0; i < kEmotionCount; ++i) counts[i] = a.counts[i] + b.counts[i];
  return distribution_from_counts(counts);
}

std::string format_distribution_report(const LabelDistribution& dist) {
  std::ostringstream os;
  char row[128];
  std::snprintf(row, sizeof row, "%-8s %12s %9s\n", "emotion", "count", "share");
  os << row;
  for (auto e : kEmotions) {
    std::snprintf(row, sizeof row, "%-8s %12llu %8.2f%%\n", std::string(emotion_name(e)).c_str(),
                  static_cast<unsigned long long>(dist.count(e)), 100.0 * dist.share(e));
    os << row;
  }
  std::snprintf(row, sizeof row, "%-8s %12llu\n", "total", static_cast<unsigned long long>(dist.total));
  os << row << '\n';
  for (auto e : kEmotions) {
    os << emotion_name(e) << '\t' << dist.count(e) << '\t' << format_fixed(dist.share(e), 6) << '\n';
  }
  return os.str();
}

// ---- synthetic corpus ---------------------------------------------------

namespace {

// Raw mt19937_64 output only: std distributions are implementation defined,
// and synthetic files must be identical across standard libraries.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<std::string> render_template(const PlantedTemplate& t, SynthRng& rng) {
  std::vector<std::string> words;
  for (auto part : split(t.pattern, ' ')) {
    if (part.empty()) continue;
    words.emplace_back(part == "*" ? rng.pick(t.fillers) : std::string(part));
  }
  return words;
}

std::string render_words(const std::vector<std::string>& words, Lang lang) {
  // Chinese text carries no spaces between words.
  return join(words, lang == Lang::Zh ? "" : " ");
}

void append_objective(std::vector<std::string>& out, const SynthConfig& cfg, SynthRng& rng) {
  auto n = rng.between(cfg.comment_min_filler, cfg.comment_max_filler);
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng.pick(cfg.objective_vocab));
}

std::string zero_pad(std::string_view prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, n);
  return std::string(prefix) + buf;
}

}  // namespace

SynthCorpus synth_corpus(const SynthConfig& cfg, std::uint64_t seed) {
  for (auto e : kEmotions) {
    const auto& templates = cfg.planted[index_of(e)];
    bool needed = cfg.comments_per_emotion[index_of(e)] > 0 ||
                  (cfg.sarcasm_rate > 0 && (e == Emotion::Angry || e == Emotion::Haha));
    if (!needed) continue;
    if (templates.empty()) {
      throw ConfigError("synthetic corpus: no planted vocabulary for " + std::string(emotion_name(e)));
    }
    for (const auto& t : templates) {
      if (t.fillers.empty() || std::count(t.pattern.begin(), t.pattern.end(), '*') != 1) {
        throw ConfigError("synthetic corpus: template '" + t.pattern + "' needs one '*' and fillers");
      }
    }
  }
  if (cfg.objective_vocab.empty()) throw ConfigError("synthetic corpus: empty objective vocabulary");
  if (cfg.posts == 0) throw ConfigError("synthetic corpus: at least one post required");
  if (cfg.sarcasm_rate < 0 || cfg.sarcasm_rate > 1 || cfg.noise_rate < 0 || cfg.noise_rate > 1) {
    throw ConfigError("synthetic corpus: rates must lie in [0,1]");
  }

  SynthRng rng(seed);
  SynthCorpus out;
  const int post_width = 5;
  for (std::size_t p = 0; p < cfg.posts; ++p) {
    std::vector<std::string> words;
    auto n = rng.between(cfg.post_min_words, cfg.post_max_words);
    for (std::size_t i = 0; i < n; ++i) words.push_back(rng.pick(cfg.objective_vocab));
    std::string text = render_words(words, cfg.lang);
    text += cfg.lang == Lang::Zh ? "。" : " .";
    out.posts.push_back({zero_pad("p", p, post_width), std::move(text), cfg.lang});
  }

  std::vector<Emotion> labels;
  for (auto e : kEmotions) labels.insert(labels.end(), cfg.comments_per_emotion[index_of(e)], e);
  rng.shuffle(labels);

  std::vector<Emotion> off_label_choices;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Emotion label = labels[i];
    std::vector<std::string> words;
    append_objective(words, cfg, rng);
    bool sarcastic = rng.chance(cfg.sarcasm_rate);
    if (sarcastic) {
      // Laughing at news that angers most readers: mixes both vocabularies,
      // reacted to with one of the two.
      auto angry = render_template(rng.pick(cfg.planted[index_of(Emotion::Angry)]), rng);
      auto haha = render_template(rng.pick(cfg.planted[index_of(Emotion::Haha)]), rng);
      bool angry_first = rng.chance(0.5);
      auto& a = angry_first ? angry : haha;
      auto& b = angry_first ? haha : angry;
      words.insert(words.end(), a.begin(), a.end());
      append_objective(words, cfg, rng);
      words.insert(words.end(), b.begin(), b.end());
      label = rng.chance(0.5) ? Emotion::Angry : Emotion::Haha;
    } else {
      auto own = render_template(rng.pick(cfg.planted[index_of(label)]), rng);
      words.insert(words.end(), own.begin(), own.end());
      if (rng.chance(cfg.noise_rate)) {
        off_label_choices.clear();
        for (auto e : kEmotions) {
          if (e != label && !cfg.planted[index_of(e)].empty()) off_label_choices.push_back(e);
        }
        if (!off_label_choices.empty()) {
          auto other = rng.pick(off_label_choices);
          auto extra = render_template(rng.pick(cfg.planted[index_of(other)]), rng);
          append_objective(words, cfg, rng);
          words.insert(words.end(), extra.begin(), extra.end());
        }
      }
    }
    append_objective(words, cfg, rng);

    RawComment c;
    c.id = zero_pad("c", i, 7);
    c.post_id = zero_pad("p", rng.index(cfg.posts), post_width);
    c.user_id = zero_pad("u", i, 7);
    c.text = render_words(words, cfg.lang);
    c.lang = cfg.lang;
    if (sarcastic) out.sarcastic_ids.insert(c.id);
    out.labeled.push_back({std::move(c), label});
  }
  return out;
}

std::vector<RawComment> strip_labels(std::span<const LabeledComment> labeled) {
  std::vector<RawComment> out;
  out.reserve(labeled.size());
  for (const auto& lc : labeled) out.push_back(lc.comment);
  return out;
}

std::vector<ReactionEvent> reactions_of(std::span<const LabeledComment> labeled) {
  std::vector<ReactionEvent> out;
  std::unordered_set<std::string> keys;
  for (const auto& lc : labeled) {
    if (keys.insert(reaction_key(lc.comment.post_id, lc.comment.user_id)).second) {
      out.push_back({lc.comment.post_id, lc.comment.user_id, lc.label});
    }
  }
  return out;
}

SynthConfig default_synth_config(Lang lang) {
  SynthConfig cfg;
  cfg.lang = lang;
  cfg.comments_per_emotion.fill(1000);
  auto set = [&](Emotion e, std::vector<std::string> patterns, std::vector<std::string> fillers) {
    for (auto& p : patterns) cfg.planted[index_of(e)].push_back({std::move(p), fillers});
  };
  if (lang == Lang::En) {
    set(Emotion::Angry, {"people are *", "what a *", "* all haters", "* this country", "sick of *"},
        {"dumb", "stupid", "evil", "corrupt", "disgusting", "pathetic", "liars", "idiots", "ridiculous", "shameful"});
    set(Emotion::Haha, {"* . lol", "happy bday *", "* ! yeah", "looks so *", "ever !! *"},
        {"hilarious", "funny", "lmao", "haha", "silly", "goofy", "hysterical", "amusing", "comical", "rofl"});
    set(Emotion::Wow, {"* . awesome", "a * what", "* user omg", "!!!! * !", "* !!! how"},
        {"amazing", "incredible", "unbelievable", "insane", "stunning", "wild", "crazy", "shocking", "impressive",
         "whoa"});
    set(Emotion::Sad, {"* so sad", "my heart *", "* god bless", "prayers for *", ". rip *"},
        {"heartbreaking", "tragic", "terrible", "devastating", "awful", "painful", "sorrowful", "horrible", "grim",
         "unfair"});
    set(Emotion::Love, {"so * love", "* bless you", "love this *", "* my dear", "such * couple"},
        {"beautiful", "adorable", "lovely", "gorgeous", "precious", "sweet", "wonderful", "cute", "darling",
         "perfect"});
    cfg.objective_vocab = {"government", "president", "election",  "report",   "economy",  "police",
                           "city",       "officials", "announced", "minister", "policy",   "budget",
                           "court",      "market",    "global",    "meeting",  "today",    "plan",
                           "company",    "school",    "state",     "county",   "vote",     "senate",
                           "trade",      "tax",       "law",       "news",     "week",     "year",
                           "percent",    "million",   "workers",   "health",   "hospital", "weather",
                           "storm",      "agency",    "statement", "press",    "border",   "military",
                           "campaign",   "poll",      "data",      "energy",   "oil",      "prices"};
  } else {
    set(Emotion::Angry, {"真的 *", "一群 *", "* 滾開"}, {"垃圾", "無恥", "可惡", "白癡", "廢物", "噁心", "混蛋", "腦殘"});
    set(Emotion::Haha, {"* 哈哈", "根本 *", "* 一下"}, {"好笑", "笑死", "爆笑", "有趣", "搞笑", "逗趣", "太妙", "傻眼"});
    set(Emotion::Wow, {"* 天啊", "居然 *", "* 驚呆"}, {"驚人", "厲害", "神奇", "誇張", "震撼", "離譜", "不敢", "超猛"});
    set(Emotion::Sad, {"* 難過", "心好 *", "* 安息"}, {"心碎", "悲傷", "可憐", "痛心", "遺憾", "不捨", "哀悼", "淚崩"});
    set(Emotion::Love, {"* 愛你", "好 *", "* 感動"}, {"美麗", "可愛", "溫暖", "幸福", "甜蜜", "貼心", "美好", "暖心"});
    cfg.objective_vocab = {"政府", "總統", "選舉", "報告", "經濟", "警方", "城市", "官員", "宣布", "部長",
                           "政策", "預算", "法院", "市場", "國際", "會議", "今天", "計畫", "公司", "學校",
                           "立法", "投票", "稅收", "新聞", "本週", "今年", "百萬", "勞工", "醫院", "天氣"};
  }
  return cfg;
}

}  // namespace reaction_miner
