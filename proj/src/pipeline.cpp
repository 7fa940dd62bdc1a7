#include "reaction_miner/pipeline.hpp"

#include <chrono>
#include <functional>
#include <ostream>
#include <set>

#include "reaction_miner/error.hpp"
#include "reaction_miner/evalharness.hpp"
#include "reaction_miner/util.hpp"

namespace reaction_miner {

namespace fs = std::filesystem;

std::vector<TokenSeq> tokenize_all(std::span<const std::string> texts, std::span<const std::string> ids,
                                   const Tokenizer& tokenizer) {
  std::vector<TokenSeq> out(texts.size());
  parallel_partitions(texts.size(), partition_count(texts.size(), 1024),
                      [&](std::size_t b, std::size_t e, std::size_t) {
                        for (std::size_t i = b; i < e; ++i) {
                          out[i] = tokenizer(texts[i], i < ids.size() ? ids[i] : std::string());
                        }
                      });
  return out;
}

std::vector<LabeledTokens> tokenize_labeled(std::span<const LabeledComment> labeled, const Tokenizer& tokenizer) {
  std::vector<LabeledTokens> out(labeled.size());
  parallel_partitions(labeled.size(), partition_count(labeled.size(), 1024),
                      [&](std::size_t b, std::size_t e, std::size_t) {
                        for (std::size_t i = b; i < e; ++i) {
                          out[i] = {tokenizer(labeled[i].comment.text, labeled[i].comment.id), labeled[i].label};
                        }
                      });
  return out;
}

std::string format_classification(const std::string& id, const EmotionScores& scores) {
  std::string line = id;
  for (const auto& r : scores.ranked) {
    line += '\t';
    line += emotion_name(r.emotion);
    line += '\t' + format_double(r.score);
  }
  line += scores.no_signal ? "\t1" : "\t0";
  return line;
}

std::string format_sarcasm(const std::string& id, const EmotionScores& scores, const SarcasmThresholds& thresholds) {
  if (scores.no_signal) return id + "\t0\tNA\tNA\tNA\t0\tno_signal";
  auto v = label_sarcasm(scores, thresholds);
  std::string line = id + (v.candidate ? "\t1\t" : "\t0\t");
  line += v.distance_ratio ? format_double(*v.distance_ratio) : "NA";
  if (v.score_ratios) {
    line += '\t' + format_double(v.score_ratios->third_to_second);
    line += '\t' + format_double(v.score_ratios->second_to_first);
  } else {
    line += "\tNA\tNA";
  }
  line += v.sarcastic ? "\t1\t" : "\t0\t";
  line += reason_name(v.reason);
  return line;
}

// ---- configuration -----------------------------------------------------------------------

void apply_overrides(KeyValueConfig& cfg, std::span<const std::string> overrides) {
  for (const auto& o : overrides) {
    auto eq = o.find('=');
    auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError("override '" + o + "' is not section.key=value");
    }
    cfg.set(std::string(trim(std::string_view(o).substr(0, dot))),
            std::string(trim(std::string_view(o).substr(dot + 1, eq - dot - 1))),
            std::string(trim(std::string_view(o).substr(eq + 1))));
  }
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"pipeline", {"lang", "work_dir", "seed", "threads", "model"}},
      {"ingest", {"comments", "reactions", "posts"}},
      {"lexicon", {"threshold"}},
      {"graph", {"dominance"}},
      {"patterns", {"min_freq", "min_fillers", "max_length"}},
      {"classify", {"input"}},
      {"sarcasm", {"thresholds"}},
      {"evaluate", {"annotations"}},
      {"learner", {"kind", "epochs", "learning_rate", "batch_size", "filters", "kernel_width", "balance_classes"}},
  };
  return keys;
}

std::uint64_t non_negative(long long v, const char* what) {
  if (v < 0) throw ConfigError(std::string(what) + " must not be negative");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

PipelineConfig PipelineConfig::from(const KeyValueConfig& cfg, const fs::path& base_dir) {
  for (const auto& [section, kv] : cfg.sections()) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (section.empty() && kv.empty()) continue;
      throw ConfigError("config: unknown section '" + section + "'");
    }
    for (const auto& [key, value] : kv) {
      if (!it->second.count(key)) throw ConfigError("config: unknown key '" + section + "." + key + "'");
    }
  }
  auto path = [&](const std::string& section, const std::string& key) -> fs::path {
    auto v = cfg.get(section, key);
    if (!v || v->empty()) return {};
    fs::path p(*v);
    return p.is_absolute() ? p : base_dir / p;
  };

  PipelineConfig c;
  auto lang = parse_lang(cfg.get_or("pipeline", "lang", "en"));
  if (!lang) throw ConfigError("config: pipeline.lang must be en or zh");
  c.lang = *lang;
  if (auto w = path("pipeline", "work_dir"); !w.empty()) c.work_dir = w;
  else c.work_dir = base_dir / "work";
  c.seed = non_negative(cfg.get_int("pipeline", "seed", 1), "pipeline.seed");
  c.threads = non_negative(cfg.get_int("pipeline", "threads", 0), "pipeline.threads");
  c.model = path("pipeline", "model");
  if (c.model.empty()) c.model = c.work_dir / "model.tsv";

  c.comments = path("ingest", "comments");
  c.reactions = path("ingest", "reactions");
  c.posts = path("ingest", "posts");
  c.classify_input = path("classify", "input");
  if (c.classify_input.empty()) c.classify_input = c.comments;
  c.thresholds = path("sarcasm", "thresholds");
  c.annotations = path("evaluate", "annotations");

  c.lexicon_threshold = non_negative(cfg.get_int("lexicon", "threshold", kDefaultLexiconThreshold), "lexicon.threshold");
  c.dominance = cfg.get_double("graph", "dominance", kDefaultDominance);
  c.mining.min_pattern_freq = non_negative(cfg.get_int("patterns", "min_freq", 10), "patterns.min_freq");
  c.mining.min_fillers = non_negative(cfg.get_int("patterns", "min_fillers", 3), "patterns.min_fillers");
  c.mining.max_length = non_negative(cfg.get_int("patterns", "max_length", 3), "patterns.max_length");

  auto kind = cfg.get_or("learner", "kind", "cnn");
  if (kind == "cnn") c.learner.kind = LearnerKind::Cnn;
  else if (kind == "logistic") c.learner.kind = LearnerKind::Logistic;
  else throw ConfigError("config: learner.kind must be cnn or logistic");
  c.learner.epochs = non_negative(cfg.get_int("learner", "epochs", 50), "learner.epochs");
  c.learner.learning_rate = cfg.get_double("learner", "learning_rate", c.learner.learning_rate);
  c.learner.batch_size = non_negative(cfg.get_int("learner", "batch_size", 16), "learner.batch_size");
  c.learner.filters = non_negative(cfg.get_int("learner", "filters", 4), "learner.filters");
  c.learner.kernel_width = non_negative(cfg.get_int("learner", "kernel_width", 3), "learner.kernel_width");
  auto balance = cfg.get_or("learner", "balance_classes", "true");
  if (balance != "true" && balance != "false") throw ConfigError("config: learner.balance_classes must be true or false");
  c.learner.balance_classes = balance == "true";
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path, std::span<const std::string> overrides) {
  auto cfg = KeyValueConfig::load(path);
  apply_overrides(cfg, overrides);
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  auto c = from(cfg, base);
  c.source = path;
  return c;
}

void PipelineConfig::validate() const {
  auto require = [](const fs::path& p, const char* what) {
    if (p.empty()) throw ConfigError(std::string("config: ") + what + " is not set");
    if (!fs::is_regular_file(p)) throw ConfigError(std::string("config: ") + what + " '" + p.string() + "' does not exist");
  };
  require(comments, "ingest.comments");
  require(reactions, "ingest.reactions");
  require(posts, "ingest.posts");
  require(classify_input, "classify.input");
  if (!thresholds.empty()) require(thresholds, "sarcasm.thresholds");
  if (!annotations.empty()) require(annotations, "evaluate.annotations");
  if (lexicon_threshold == 0) throw ConfigError("config: lexicon.threshold must be positive");
  if (!(dominance > 0.0 && dominance <= 1.0)) throw ConfigError("config: graph.dominance must lie in (0, 1]");
  if (mining.max_length < 2 || mining.max_length > 3) throw ConfigError("config: patterns.max_length must be 2 or 3");
  if (learner.epochs == 0) throw ConfigError("config: learner.epochs must be positive");
  if (!(learner.learning_rate > 0.0)) throw ConfigError("config: learner.learning_rate must be positive");
}

// ---- orchestration ----------------------------------------------------------------------

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Ingest: return "ingest";
    case Stage::Lexicon: return "lexicon";
    case Stage::Graph: return "graph";
    case Stage::Reduce: return "reduce";
    case Stage::Patterns: return "patterns";
    case Stage::Classify: return "classify";
    case Stage::Sarcasm: return "sarcasm";
    case Stage::Evaluate: return "evaluate";
  }
  return "unknown";
}

int stage_exit_code(Stage s) { return 10 + static_cast<int>(s); }

namespace {

struct Counts {
  std::size_t in = 0;
  std::size_t out = 0;
};

bool up_to_date(const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs) {
  fs::file_time_type newest_in = fs::file_time_type::min();
  for (const auto& p : inputs) {
    if (p.empty()) continue;
    if (!fs::exists(p)) return false;
    newest_in = std::max(newest_in, fs::last_write_time(p));
  }
  for (const auto& p : outputs) {
    if (!fs::exists(p) || fs::last_write_time(p) < newest_in) return false;
  }
  return true;
}

class Runner {
 public:
  Runner(const PipelineOptions& options, PipelineResult& result) : options_(options), result_(result) {}

  /// False once a stage has failed.
  bool run(Stage stage, std::vector<fs::path> inputs, const std::vector<fs::path>& outputs,
           const std::function<Counts()>& body, const fs::path& config) {
    if (result_.failed) return false;
    inputs.push_back(config);
    StageLog log{stage, "ran"};
    auto start = std::chrono::steady_clock::now();
    if (!options_.force && up_to_date(inputs, outputs)) {
      log.status = "skipped";
    } else {
      try {
        auto c = body();
        log.records_in = c.in;
        log.records_out = c.out;
      } catch (const std::exception& e) {
        result_.failed = stage;
        result_.exit_code = stage_exit_code(stage);
        result_.error = e.what();
        log.status = "failed";
      }
    }
    log.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    emit(log);
    return !result_.failed;
  }

  void not_applicable(Stage stage) { emit({stage, "not_applicable"}); }

 private:
  void emit(const StageLog& log) {
    result_.stages.push_back(log);
    if (!options_.log) return;
    *options_.log << "[pipeline] stage=" << stage_name(log.stage) << " status=" << log.status
                  << " wall_ms=" << format_fixed(log.wall_ms, 1) << " in=" << log.records_in
                  << " out=" << log.records_out;
    if (log.status == "failed") *options_.log << " error=\"" << result_.error << '"';
    *options_.log << '\n';
  }

  const PipelineOptions& options_;
  PipelineResult& result_;
};

std::vector<std::string> normalized_texts(const CommentLoad& comments, const PostLoad& posts) {
  std::vector<std::string> texts;
  texts.reserve(comments.comments.size() + posts.posts.size());
  for (const auto& p : posts.posts) texts.push_back(normalize(p.text));
  for (const auto& c : comments.comments) texts.push_back(normalize(c.text));
  return texts;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const PipelineOptions& options) {
  PipelineResult result;
  try {
    config.validate();
    fs::create_directories(config.work_dir);
  } catch (const std::exception& e) {
    result.exit_code = kConfigExitCode;
    result.error = e.what();
    if (options.log) *options.log << "[pipeline] config error: " << e.what() << '\n';
    return result;
  }
  if (config.threads > 0) set_thread_cap(config.threads);

  const auto labeled_path = config.artifact("labeled.tsv");
  const auto dist_path = config.artifact("distribution.txt");
  const auto lexicon_path = config.artifact("lexicon.tsv");
  const auto subj_path = config.artifact("subjective.graph");
  const auto obj_path = config.artifact("objective.graph");
  const auto reduced_path = config.artifact("reduced.graph");
  const auto classify_path = config.artifact("classify.tsv");
  const auto sarcasm_path = config.artifact("sarcasm.tsv");
  const auto eval_path = config.artifact("evaluation.txt");
  const bool zh = config.lang == Lang::Zh;
  const fs::path lexicon_input = zh ? lexicon_path : fs::path();

  auto tokenizer = [&]() {
    if (!zh) return Tokenizer(Lang::En);
    return Tokenizer(Lang::Zh, std::make_shared<const ZhLexicon>(ZhLexicon::load(lexicon_path)));
  };

  Runner runner(options, result);
  const auto& cfg_file = config.source;

  if (options.no_build) {
    for (auto s : {Stage::Ingest, Stage::Lexicon, Stage::Graph, Stage::Reduce, Stage::Patterns}) {
      runner.not_applicable(s);
    }
  } else {
    runner.run(Stage::Ingest, {config.comments, config.reactions}, {labeled_path, dist_path}, [&] {
      auto comments = load_comments(config.comments, config.lang);
      auto reactions = load_reactions(config.reactions);
      auto joined = overlap_join(comments.comments, reactions.events);
      write_file(labeled_path, format_labeled(joined.labeled));
      write_file(dist_path, format_distribution_report(distribution(std::span<const LabeledComment>(joined.labeled))));
      return Counts{comments.comments.size(), joined.labeled.size()};
    }, cfg_file);

    if (zh) {
      runner.run(Stage::Lexicon, {config.comments, config.posts}, {lexicon_path}, [&] {
        auto comments = load_comments(config.comments, config.lang);
        auto posts = load_posts(config.posts, config.lang);
        auto texts = normalized_texts(comments, posts);
        auto lexicon = build_zh_lexicon(texts, config.lexicon_threshold);
        write_file(lexicon_path, lexicon.serialize());
        return Counts{texts.size(), lexicon.size()};
      }, cfg_file);
    } else {
      runner.not_applicable(Stage::Lexicon);
    }

    runner.run(Stage::Graph, {labeled_path, config.posts, lexicon_input}, {subj_path, obj_path}, [&] {
      auto tok = tokenizer();
      auto labeled = load_labeled(labeled_path);
      auto posts = load_posts(config.posts, config.lang);
      std::vector<std::string> texts, ids;
      for (const auto& l : labeled) texts.push_back(l.comment.text), ids.push_back(l.comment.id);
      auto subjective = build_graph(tokenize_all(texts, ids, tok));
      texts.clear();
      ids.clear();
      for (const auto& p : posts.posts) texts.push_back(p.text), ids.push_back(p.id);
      auto objective = build_graph(tokenize_all(texts, ids, tok));
      write_file(subj_path, subjective.serialize());
      write_file(obj_path, objective.serialize());
      return Counts{labeled.size() + posts.posts.size(), subjective.node_count() + objective.node_count()};
    }, cfg_file);

    runner.run(Stage::Reduce, {subj_path, obj_path}, {reduced_path}, [&] {
      auto subjective = CoocGraph::load(subj_path);
      auto objective = CoocGraph::load(obj_path);
      auto reduced = reduce_graph(subjective, objective, config.dominance);
      write_file(reduced_path, serialize_reduced(reduced));
      return Counts{subjective.node_count(), reduced.graph.node_count()};
    }, cfg_file);

    runner.run(Stage::Patterns, {reduced_path, labeled_path, lexicon_input}, {config.model}, [&] {
      auto reduced = load_reduced(reduced_path);
      auto labeled = load_labeled(labeled_path);
      auto tokens = tokenize_labeled(labeled, tokenizer());
      auto mined = extract_patterns(reduced, tokens, config.mining);
      auto model = EmotionModel::build(std::move(mined.patterns), std::move(mined.stats));
      write_file(config.model, model.serialize());
      return Counts{labeled.size(), model.size()};
    }, cfg_file);
  }

  auto classify_input = [&](std::vector<std::string>& ids) {
    auto model = EmotionModel::load(config.model);
    auto comments = load_comments(config.classify_input, config.lang);
    std::vector<std::string> texts;
    for (const auto& c : comments.comments) texts.push_back(c.text), ids.push_back(c.id);
    auto tokens = tokenize_all(texts, ids, tokenizer());
    std::vector<EmotionScores> scores(tokens.size());
    parallel_partitions(tokens.size(), partition_count(tokens.size(), 1024),
                        [&](std::size_t b, std::size_t e, std::size_t) {
                          for (std::size_t i = b; i < e; ++i) scores[i] = classify(tokens[i], model);
                        });
    return scores;
  };

  runner.run(Stage::Classify, {config.model, config.classify_input, lexicon_input}, {classify_path}, [&] {
    std::vector<std::string> ids;
    auto scores = classify_input(ids);
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) out += format_classification(ids[i], scores[i]) + '\n';
    write_file(classify_path, out);
    return Counts{ids.size(), ids.size()};
  }, cfg_file);

  runner.run(Stage::Sarcasm, {config.model, config.classify_input, lexicon_input, config.thresholds}, {sarcasm_path},
             [&] {
               auto thresholds = SarcasmThresholds::defaults(config.lang);
               if (!config.thresholds.empty()) {
                 auto profiles = load_threshold_profiles(config.thresholds);
                 if (auto it = profiles.find(config.lang); it != profiles.end()) thresholds = it->second;
               }
               std::vector<std::string> ids;
               auto scores = classify_input(ids);
               std::string out;
               std::size_t sarcastic = 0;
               for (std::size_t i = 0; i < ids.size(); ++i) {
                 out += format_sarcasm(ids[i], scores[i], thresholds) + '\n';
                 sarcastic += predict_sarcastic(scores[i], thresholds) ? 1 : 0;
               }
               write_file(sarcasm_path, out);
               return Counts{ids.size(), sarcastic};
             }, cfg_file);

  if (config.annotations.empty()) {
    runner.not_applicable(Stage::Evaluate);
  } else {
    runner.run(Stage::Evaluate, {sarcasm_path, config.annotations}, {eval_path}, [&] {
      auto set = load_annotations(config.annotations);
      auto pred = load_predictions(sarcasm_path);
      std::vector<ReportRow> rows{evaluate_levels("emo-based", pred, set)};
      auto kappa = fleiss_kappa(set);
      std::string out = format_report(rows);
      out += "fleiss_kappa\t" + format_fixed(kappa.kappa, 4) + (kappa.degenerate ? "\tdegenerate\n" : "\n");
      write_file(eval_path, out);
      return Counts{set.items.size(), rows.size()};
    }, cfg_file);
  }
  return result;
}

}  // namespace reaction_miner
