#include "reaction_miner/sarcasm.hpp"

#include "reaction_miner/config.hpp"
#include "reaction_miner/error.hpp"
#include "reaction_miner/util.hpp"

namespace reaction_miner {

void SarcasmThresholds::validate() const {
  if (!(x1 >= 0.0 && x1 <= x2)) throw ConfigError("sarcasm thresholds: need 0 <= x1 <= x2");
  if (!(y1 > 0.0 && y1 <= 1.0 && y2 > 0.0 && y2 <= 1.0)) throw ConfigError("sarcasm thresholds: y1, y2 must lie in (0, 1]");
  if (combos.empty()) throw ConfigError("sarcasm thresholds: no emotion combinations");
}

SarcasmThresholds SarcasmThresholds::defaults(Lang lang) {
  SarcasmThresholds t;
  if (lang == Lang::Zh) {
    t.x1 = 0.2;
    t.x2 = 10.0;
    t.y1 = 0.05;
    t.y2 = 0.3;
  }
  return t;
}

std::string_view reason_name(SarcasmReason r) {
  switch (r) {
    case SarcasmReason::Sarcastic: return "sarcastic";
    case SarcasmReason::NotCandidate: return "not_candidate";
    case SarcasmReason::DegenerateScores: return "degenerate_scores";
    case SarcasmReason::DistanceOutOfRange: return "distance_out_of_range";
    case SarcasmReason::ZeroScore: return "zero_score";
    case SarcasmReason::ScoreRatioTooLow: return "score_ratio_too_low";
  }
  return "unknown";
}

bool is_candidate(std::pair<Emotion, Emotion> top_pair, const SarcasmThresholds& thresholds) {
  if (top_pair.first == top_pair.second) return false;
  return thresholds.combos.count(EmotionPair(top_pair.first, top_pair.second)) > 0;
}

namespace {
void require_signal(const EmotionScores& scores) {
  if (scores.no_signal) throw NoSignalError("sarcasm rules need a text that matched patterns");
}
}  // namespace

std::optional<double> distance_ratio(const EmotionScores& scores) {
  require_signal(scores);
  const double s1 = scores.nth(0), s2 = scores.nth(1), s3 = scores.nth(2);
  if (s1 == s2) return std::nullopt;
  return (s3 - s2) / (s2 - s1);
}

std::optional<ScoreRatios> score_ratios(const EmotionScores& scores) {
  require_signal(scores);
  const double s1 = scores.nth(0), s2 = scores.nth(1), s3 = scores.nth(2);
  if (s1 == 0.0 || s2 == 0.0) return std::nullopt;
  return ScoreRatios{s3 / s2, s2 / s1};
}

SarcasmVerdict label_sarcasm(const EmotionScores& scores, const SarcasmThresholds& t) {
  SarcasmVerdict v;
  v.candidate = is_candidate(top2(scores), t);
  v.distance_ratio = distance_ratio(scores);
  v.score_ratios = score_ratios(scores);
  if (!v.candidate) {
    v.reason = SarcasmReason::NotCandidate;
  } else if (!v.distance_ratio) {
    v.reason = SarcasmReason::DegenerateScores;
  } else if (!(*v.distance_ratio >= t.x1 && *v.distance_ratio <= t.x2)) {
    v.reason = SarcasmReason::DistanceOutOfRange;
  } else if (!v.score_ratios) {
    v.reason = SarcasmReason::ZeroScore;
  } else if (!(v.score_ratios->third_to_second >= t.y1 && v.score_ratios->second_to_first >= t.y2)) {
    v.reason = SarcasmReason::ScoreRatioTooLow;
  } else {
    v.reason = SarcasmReason::Sarcastic;
    v.sarcastic = true;
  }
  return v;
}

std::map<Lang, SarcasmThresholds> parse_threshold_profiles(std::span<const std::string> lines) {
  auto cfg = KeyValueConfig::parse(lines);
  std::map<Lang, SarcasmThresholds> out;
  for (const auto& [section, kv] : cfg.sections()) {
    auto lang = parse_lang(section);
    if (!lang) {
      if (section.empty() && kv.empty()) continue;
      throw ConfigError("threshold profile: unknown language section '" + section + "'");
    }
    auto t = SarcasmThresholds::defaults(*lang);
    for (const auto& [key, value] : kv) {
      if (key == "x1") {
        t.x1 = parse_double(value, "x1");
      } else if (key == "x2") {
        t.x2 = parse_double(value, "x2");
      } else if (key == "y1") {
        t.y1 = parse_double(value, "y1");
      } else if (key == "y2") {
        t.y2 = parse_double(value, "y2");
      } else if (key == "combos") {
        t.combos.clear();
        for (const auto& item : split_list(value)) {
          auto pair = EmotionPair::parse(item);
          if (!pair) throw ConfigError("threshold profile: bad emotion pair '" + item + "'");
          t.combos.insert(*pair);
        }
      } else {
        throw ConfigError("threshold profile: unknown key '" + key + "'");
      }
    }
    t.validate();
    out[*lang] = t;
  }
  return out;
}

std::map<Lang, SarcasmThresholds> load_threshold_profiles(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse_threshold_profiles(lines);
}

std::string format_threshold_profiles(const std::map<Lang, SarcasmThresholds>& profiles) {
  std::string out;
  for (const auto& [lang, t] : profiles) {
    out += "[" + std::string(lang_name(lang)) + "]\n";
    out += "x1 = " + format_double(t.x1) + "\n";
    out += "x2 = " + format_double(t.x2) + "\n";
    out += "y1 = " + format_double(t.y1) + "\n";
    out += "y2 = " + format_double(t.y2) + "\n";
    std::vector<std::string> names;
    for (const auto& c : t.combos) names.push_back(c.name());
    out += "combos = " + join(names, ",") + "\n";
  }
  return out;
}

}  // namespace reaction_miner
