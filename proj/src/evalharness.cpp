#include "reaction_miner/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "reaction_miner/error.hpp"
#include "reaction_miner/util.hpp"

namespace reaction_miner {

std::size_t AnnotatedItem::positives() const {
  return static_cast<std::size_t>(std::count(votes.begin(), votes.end(), 1));
}

AnnotationSet parse_annotations(std::span<const std::string> lines) {
  AnnotationSet set;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const auto where = "annotations line " + std::to_string(ln + 1);
    auto f = split_n(lines[ln], '\t', 4);
    if (f.size() != 4 || f[0].empty()) throw FormatError(where + ": expected id, lang, labels, text");
    auto lang = parse_lang(f[1]);
    if (!lang) throw FormatError(where + ": unknown language '" + std::string(f[1]) + "'");
    AnnotatedItem item{std::string(f[0]), *lang, std::string(f[3]), {}};
    for (auto v : split(f[2], ',')) {
      v = trim(v);
      if (v != "0" && v != "1") throw FormatError(where + ": labels must be 0 or 1");
      item.votes.push_back(v == "1" ? 1 : 0);
    }
    if (item.votes.size() < 2) throw FormatError(where + ": need at least two annotators");
    if (set.annotators == 0) set.annotators = item.votes.size();
    if (item.votes.size() != set.annotators) {
      throw FormatError(where + ": " + std::to_string(item.votes.size()) + " labels, expected " +
                        std::to_string(set.annotators));
    }
    set.items.push_back(std::move(item));
  }
  return set;
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse_annotations(lines);
}

std::string format_annotations(const AnnotationSet& set) {
  std::string out;
  for (const auto& item : set.items) {
    out += item.id + '\t';
    out += lang_name(item.lang);
    out += '\t';
    for (std::size_t i = 0; i < item.votes.size(); ++i) {
      if (i) out += ',';
      out += item.votes[i] ? '1' : '0';
    }
    out += '\t' + item.text + '\n';
  }
  return out;
}

KappaResult fleiss_kappa(const AnnotationSet& set) {
  const std::size_t m = set.annotators;
  if (m < 2) throw ContractViolation("Fleiss' kappa needs at least two annotators");
  if (set.items.empty()) throw ContractViolation("Fleiss' kappa needs at least one item");
  const double n = static_cast<double>(m);
  double agreement = 0.0;
  double positives = 0.0;
  for (const auto& item : set.items) {
    if (item.votes.size() != m) throw ContractViolation("item '" + item.id + "' has a different annotator count");
    const double pos = static_cast<double>(item.positives());
    const double neg = n - pos;
    agreement += (pos * pos + neg * neg - n) / (n * (n - 1.0));
    positives += pos;
  }
  const double items = static_cast<double>(set.items.size());
  const double p_bar = agreement / items;
  const double p1 = positives / (items * n);
  const double p_e = p1 * p1 + (1.0 - p1) * (1.0 - p1);
  if (p_e >= 1.0) return {1.0, true};
  return {(p_bar - p_e) / (1.0 - p_e), false};
}

AgreeGroundTruth agree_labels(const AnnotationSet& set, int k) {
  if (k < 1 || k > 3) throw ContractViolation("agree level must be 1, 2 or 3");
  if (static_cast<std::size_t>(k) > set.annotators) {
    throw ContractViolation("agree level " + std::to_string(k) + " exceeds the " + std::to_string(set.annotators) +
                            " annotators");
  }
  AgreeGroundTruth truth;
  truth.level = k;
  for (const auto& item : set.items) {
    truth.labels[item.id] = item.positives() >= static_cast<std::size_t>(k) ? 1 : 0;
  }
  return truth;
}

// ---- metrics -------------------------------------------------------------------------

MetricReport metrics_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn) {
  MetricReport r{tp, fp, tn, fn};
  const auto total = tp + fp + tn + fn;
  r.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  if (tp + fp) {
    r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    r.precision_degenerate = true;
  }
  if (tp + fn) {
    r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    r.recall_degenerate = true;
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  } else {
    r.f1_degenerate = true;
  }
  return r;
}

MetricReport metrics(const std::map<std::string, std::uint8_t>& pred, const AgreeGroundTruth& truth) {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& [id, label] : truth.labels) {
    auto it = pred.find(id);
    if (it == pred.end()) throw ContractViolation("no prediction for '" + id + "'");
    const bool p = it->second != 0;
    if (p && label) ++tp;
    else if (p) ++fp;
    else if (label) ++fn;
    else ++tn;
  }
  return metrics_from_counts(tp, fp, tn, fn);
}

std::map<std::string, std::uint8_t> parse_predictions(std::span<const std::string> lines) {
  std::map<std::string, std::uint8_t> out;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty() || lines[ln].front() == '#') continue;
    auto f = split(lines[ln], '\t');
    std::string_view flag;
    if (f.size() == 2) flag = f[1];
    else if (f.size() == 7) flag = f[5];
    if (f[0].empty() || (flag != "0" && flag != "1")) {
      throw FormatError("predictions line " + std::to_string(ln + 1) + ": expected id and a 0/1 flag");
    }
    out[std::string(f[0])] = flag == "1" ? 1 : 0;
  }
  return out;
}

std::map<std::string, std::uint8_t> load_predictions(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse_predictions(lines);
}

std::string format_report(std::span<const ReportRow> rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.method.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string out = pad("", width);
  for (int level = 1; level <= 3; ++level) out += " | " + pad("Agree " + std::to_string(level), 39);
  out += '\n' + pad("Method", width);
  for (int level = 0; level < 3; ++level) out += " | Accuracy  F1        Recall    Precision";
  out += '\n';
  for (const auto& r : rows) {
    out += pad(r.method, width);
    for (const auto& lv : r.levels) {
      out += " | ";
      if (!lv) {
        out += pad("-", 39);
        continue;
      }
      out += pad(format_fixed(lv->accuracy, 4), 10) + pad(format_fixed(lv->f1, 4), 10) +
             pad(format_fixed(lv->recall, 4), 10) + pad(format_fixed(lv->precision, 4), 9);
    }
    out += '\n';
  }
  return out;
}

ReportRow evaluate_levels(std::string method, const std::map<std::string, std::uint8_t>& pred,
                          const AnnotationSet& set) {
  ReportRow row{std::move(method), {}};
  for (int k = 1; k <= 3; ++k) {
    if (static_cast<std::size_t>(k) > set.annotators) break;
    row.levels[k - 1] = metrics(pred, agree_labels(set, k));
  }
  return row;
}

// ---- Naive Bayes ---------------------------------------------------------------------

std::string_view features_name(NbFeatures f) { return f == NbFeatures::Bow ? "bow" : "tfidf"; }

std::optional<NbFeatures> parse_features(std::string_view s) {
  if (s == "bow") return NbFeatures::Bow;
  if (s == "tfidf") return NbFeatures::TfIdf;
  return std::nullopt;
}

NbModel nb_train(std::span<const NbDocument> docs, NbFeatures features) {
  std::array<std::size_t, 2> class_docs{};
  for (const auto& d : docs) ++class_docs[d.label ? 1 : 0];
  if (class_docs[0] == 0 || class_docs[1] == 0) throw TrainingError("Naive Bayes needs both classes");

  NbModel model;
  model.features_ = features;
  for (const auto& d : docs) {
    for (const auto& t : d.tokens) model.vocab_.emplace(t, 0);
  }
  std::size_t next = 0;
  for (auto& [w, id] : model.vocab_) id = next++;
  const auto v = model.vocab_.size();

  // Integer term counts per class and document frequencies; weighting happens after.
  std::array<std::vector<std::uint64_t>, 2> tf{std::vector<std::uint64_t>(v, 0), std::vector<std::uint64_t>(v, 0)};
  std::vector<std::uint64_t> df(v, 0);
  std::vector<std::size_t> seen;
  for (const auto& d : docs) {
    seen.clear();
    for (const auto& t : d.tokens) {
      auto id = model.vocab_.at(t);
      ++tf[d.label ? 1 : 0][id];
      seen.push_back(id);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto id : seen) ++df[id];
  }
  model.idf_.assign(v, 1.0);
  if (features == NbFeatures::TfIdf) {
    const double n = static_cast<double>(docs.size());
    for (std::size_t i = 0; i < v; ++i) model.idf_[i] = std::log(n / static_cast<double>(df[i]));
  }
  for (int c = 0; c < 2; ++c) {
    model.log_prior_[c] = std::log(static_cast<double>(class_docs[c]) / static_cast<double>(docs.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < v; ++i) total += static_cast<double>(tf[c][i]) * model.idf_[i];
    auto& ll = model.log_likelihood_[c];
    ll.resize(v);
    for (std::size_t i = 0; i < v; ++i) {
      ll[i] = std::log((static_cast<double>(tf[c][i]) * model.idf_[i] + 1.0) / (total + static_cast<double>(v)));
    }
  }
  return model;
}

std::array<double, 2> NbModel::log_posterior(std::span<const std::string> tokens) const {
  std::array<double, 2> score = log_prior_;
  for (const auto& t : tokens) {
    auto it = vocab_.find(t);
    if (it == vocab_.end()) continue;
    for (int c = 0; c < 2; ++c) score[c] += idf_[it->second] * log_likelihood_[c][it->second];
  }
  return score;
}

std::uint8_t nb_predict(const NbModel& model, std::span<const std::string> tokens) {
  auto s = model.log_posterior(tokens);
  return s[1] > s[0] ? 1 : 0;
}

std::vector<std::string> surfaces(const TokenSeq& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& e : tokens.elements) out.push_back(e.surface);
  return out;
}

// ---- threshold search -----------------------------------------------------------------

SarcasmThresholds ThresholdGrid::at(std::size_t i, const SarcasmThresholds& base) const {
  SarcasmThresholds t = base;
  t.y2 = y2[i % y2.size()];
  i /= y2.size();
  t.y1 = y1[i % y1.size()];
  i /= y1.size();
  t.x2 = x2[i % x2.size()];
  i /= x2.size();
  t.x1 = x1[i];
  return t;
}

ThresholdGrid parse_grid(const KeyValueConfig& cfg) {
  const std::string section = cfg.has_section("grid") ? "grid" : "";
  ThresholdGrid g;
  auto read = [&](const char* key, std::vector<double>& into) {
    auto v = cfg.get(section, key);
    if (!v) throw ConfigError(std::string("grid: missing key ") + key);
    for (const auto& item : split_list(*v)) into.push_back(parse_double(item, key));
    if (into.empty()) throw ConfigError(std::string("grid: empty list for ") + key);
  };
  read("x1", g.x1);
  read("x2", g.x2);
  read("y1", g.y1);
  read("y2", g.y2);
  return g;
}

ThresholdGrid load_grid(const std::filesystem::path& path) { return parse_grid(KeyValueConfig::load(path)); }

bool predict_sarcastic(const EmotionScores& scores, const SarcasmThresholds& thresholds) {
  return !scores.no_signal && label_sarcasm(scores, thresholds).sarcastic;
}

GridResult grid_search_thresholds(std::span<const EmotionScores> scores, std::span<const std::uint8_t> truth,
                                  const ThresholdGrid& grid, const SarcasmThresholds& base) {
  if (scores.size() != truth.size()) throw ContractViolation("scores and truth differ in length");
  const std::size_t points = grid.size();
  if (points == 0) throw ConfigError("empty threshold grid");
  std::vector<std::optional<MetricReport>> results(points);
  parallel_partitions(points, partition_count(points, 16), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      auto t = grid.at(i, base);
      if (t.x1 > t.x2) continue;
      std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
      for (std::size_t j = 0; j < scores.size(); ++j) {
        const bool p = predict_sarcastic(scores[j], t);
        if (p && truth[j]) ++tp;
        else if (p) ++fp;
        else if (truth[j]) ++fn;
        else ++tn;
      }
      results[i] = metrics_from_counts(tp, fp, tn, fn);
    }
  });
  GridResult out;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < points; ++i) {
    if (!results[i]) continue;
    ++out.evaluated;
    if (!best || results[i]->f1 > results[*best]->f1 ||
        (results[i]->f1 == results[*best]->f1 && results[i]->precision > results[*best]->precision)) {
      best = i;
    }
  }
  if (!best) throw ConfigError("threshold grid has no point with x1 <= x2");
  out.best = grid.at(*best, base);
  out.report = *results[*best];
  return out;
}

GridResult grid_search_thresholds(const EmotionModel& model, const Tokenizer& tokenizer, const AnnotationSet& set,
                                  const ThresholdGrid& grid, const SarcasmThresholds& base) {
  const auto truth_map = agree_labels(set, 2);
  std::vector<EmotionScores> scores(set.items.size());
  std::vector<std::uint8_t> truth(set.items.size());
  parallel_partitions(set.items.size(), partition_count(set.items.size(), 256),
                      [&](std::size_t b, std::size_t e, std::size_t) {
                        for (std::size_t i = b; i < e; ++i) {
                          scores[i] = classify(tokenizer(set.items[i].text, set.items[i].id), model);
                        }
                      });
  for (std::size_t i = 0; i < set.items.size(); ++i) truth[i] = truth_map.labels.at(set.items[i].id);
  return grid_search_thresholds(scores, truth, grid, base);
}

}  // namespace reaction_miner
