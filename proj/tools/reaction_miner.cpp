// reaction-miner: command-line front end for every pipeline stage.

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <random>

#include "reaction_miner/combolearn.hpp"
#include "reaction_miner/coocgraph.hpp"
#include "reaction_miner/corpus.hpp"
#include "reaction_miner/error.hpp"
#include "reaction_miner/evalharness.hpp"
#include "reaction_miner/pipeline.hpp"
#include "reaction_miner/util.hpp"

namespace rm = reaction_miner;
namespace fs = std::filesystem;

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const rm::ConfigError*>(&e)) return 2;
  if (dynamic_cast<const rm::IoError*>(&e)) return 3;
  if (dynamic_cast<const rm::FormatError*>(&e)) return 4;
  if (dynamic_cast<const rm::ModelError*>(&e)) return 5;
  if (dynamic_cast<const rm::NoSignalError*>(&e)) return 6;
  if (dynamic_cast<const rm::TrainingError*>(&e)) return 7;
  if (dynamic_cast<const rm::ContractViolation*>(&e)) return 8;
  return 1;
}

rm::Lang lang_of(const std::string& s) {
  auto l = rm::parse_lang(s);
  if (!l) throw rm::ConfigError("--lang must be en or zh");
  return *l;
}

rm::Tokenizer make_tokenizer(const std::string& lang, const std::string& lexicon) {
  auto l = lang_of(lang);
  if (l == rm::Lang::En) return rm::Tokenizer(l);
  if (lexicon.empty()) throw rm::ConfigError("--lexicon is required for zh");
  return rm::Tokenizer(l, std::make_shared<const rm::ZhLexicon>(rm::ZhLexicon::load(lexicon)));
}

struct Texts {
  std::vector<std::string> ids;
  std::vector<std::string> texts;
};

// Accepts comment (5 fields), labeled (6 fields) and post (3 fields) records.
Texts read_texts(const std::vector<std::string>& files, rm::Lang lang) {
  Texts out;
  for (const auto& f : files) {
    auto lines = rm::read_lines(f);
    for (const auto& line : lines) {
      if (rm::trim(line).empty()) continue;
      auto c = rm::split_n(line, '\t', 5);
      if (c.size() == 5 && rm::parse_lang(c[3]) == lang) {
        auto l = rm::split_n(line, '\t', 6);
        bool labeled = l.size() == 6 && rm::parse_emotion(l[4]).has_value();
        out.ids.emplace_back(c[0]);
        out.texts.emplace_back(labeled ? l[5] : c[4]);
        continue;
      }
      auto p = rm::split_n(line, '\t', 3);
      if (p.size() == 3 && rm::parse_lang(p[1]) == lang) {
        out.ids.emplace_back(p[0]);
        out.texts.emplace_back(p[2]);
      }
    }
  }
  return out;
}

std::vector<rm::EmotionScores> classify_all(const std::vector<rm::TokenSeq>& tokens, const rm::EmotionModel& model) {
  std::vector<rm::EmotionScores> scores(tokens.size());
  rm::parallel_partitions(tokens.size(), rm::partition_count(tokens.size(), 1024),
                          [&](std::size_t b, std::size_t e, std::size_t) {
                            for (std::size_t i = b; i < e; ++i) scores[i] = rm::classify(tokens[i], model);
                          });
  return scores;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    rm::write_file(out_path, content);
  }
}

rm::LearnerKind learner_kind(const std::string& s) {
  if (s == "cnn") return rm::LearnerKind::Cnn;
  if (s == "logistic") return rm::LearnerKind::Logistic;
  throw rm::ConfigError("--learner must be cnn or logistic");
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emotion pattern mining and sarcasm detection over reaction-labeled comments."};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker cap (0: REACTION_MINER_THREADS or hardware)");

  // Shared flag holders.
  std::string lang = "en", lexicon, out;

  // ingest
  std::string comments, reactions;
  auto* ingest = app.add_subcommand("ingest", "Join comments with their authors' reactions");
  ingest->add_option("--comments", comments, "Comment file")->required();
  ingest->add_option("--reactions", reactions, "Reaction file")->required();
  ingest->add_option("--lang", lang, "Language (en|zh)");
  ingest->add_option("--out", out, "Labeled comment file")->required();

  // build-lexicon
  std::vector<std::string> inputs;
  std::uint64_t lex_threshold = rm::kDefaultLexiconThreshold;
  auto* build_lexicon = app.add_subcommand("build-lexicon", "Build the Chinese n-gram lexicon");
  build_lexicon->add_option("--input", inputs, "Post and comment files")->required();
  build_lexicon->add_option("--threshold", lex_threshold, "Minimum adjusted frequency");
  build_lexicon->add_option("--out", out, "Lexicon file")->required();

  // build-graph
  auto* build_graph_cmd = app.add_subcommand("build-graph", "Build a co-occurrence graph");
  build_graph_cmd->add_option("--input", inputs, "Comment, labeled or post files")->required();
  build_graph_cmd->add_option("--lang", lang, "Language (en|zh)");
  build_graph_cmd->add_option("--lexicon", lexicon, "Lexicon file (zh)");
  build_graph_cmd->add_option("--out", out, "Graph file")->required();

  // reduce-graph
  std::string subjective, objective;
  double dominance = rm::kDefaultDominance;
  auto* reduce = app.add_subcommand("reduce-graph", "Remove objective-dominant nodes from a subjective graph");
  reduce->add_option("--subjective", subjective, "Subjective graph")->required();
  reduce->add_option("--objective", objective, "Objective graph")->required();
  reduce->add_option("--dominance", dominance, "Dominance factor in (0, 1]");
  reduce->add_option("--out", out, "Reduced graph file")->required();

  // extract-patterns
  std::string graph, labeled;
  rm::MiningParams mining;
  auto* extract = app.add_subcommand("extract-patterns", "Mine wildcard patterns and build the emotion model");
  extract->add_option("--graph", graph, "Reduced graph")->required();
  extract->add_option("--labeled", labeled, "Labeled comment file")->required();
  extract->add_option("--min-freq", mining.min_pattern_freq, "Minimum total occurrences");
  extract->add_option("--min-fillers", mining.min_fillers, "Minimum distinct fillers");
  extract->add_option("--max-length", mining.max_length, "Maximum pattern length (2|3)");
  extract->add_option("--lang", lang, "Language (en|zh)");
  extract->add_option("--lexicon", lexicon, "Lexicon file (zh)");
  extract->add_option("--out", out, "Model file")->required();

  // classify
  std::string model_path, input;
  auto* classify_cmd = app.add_subcommand("classify", "Score comments against the emotion model");
  classify_cmd->add_option("--model", model_path, "Model file")->required();
  classify_cmd->add_option("--input", input, "Comment file")->required();
  classify_cmd->add_option("--lang", lang, "Language (en|zh)");
  classify_cmd->add_option("--lexicon", lexicon, "Lexicon file (zh)");
  classify_cmd->add_option("--out", out, "Output file (- for stdout)");

  // sarcasm
  std::string thresholds_path;
  auto* sarcasm = app.add_subcommand("sarcasm", "Label comments as sarcastic");
  sarcasm->add_option("--model", model_path, "Model file")->required();
  sarcasm->add_option("--input", input, "Comment file")->required();
  sarcasm->add_option("--thresholds", thresholds_path, "Threshold profile file (language defaults if absent)");
  sarcasm->add_option("--lang", lang, "Language (en|zh)");
  sarcasm->add_option("--lexicon", lexicon, "Lexicon file (zh)");
  sarcasm->add_option("--out", out, "Output file (- for stdout)");

  // learn-combos
  std::string annotated;
  std::size_t budget = rm::kDefaultPatternBudget, top_k = 2;
  std::uint64_t seed = 1;
  std::string learner = "cnn";
  rm::LearnerConfig lcfg;
  auto* combos = app.add_subcommand("learn-combos", "Discover the emotion pairs behind learnable sarcasm");
  combos->add_option("--model", model_path, "Model file")->required();
  combos->add_option("--annotated", annotated, "Sarcasm-annotated comments")->required();
  combos->add_option("--n", budget, "Patterns per emotion row");
  combos->add_option("--epochs", lcfg.epochs, "Training epochs");
  combos->add_option("--learning-rate", lcfg.learning_rate, "Gradient step");
  combos->add_option("--batch-size", lcfg.batch_size, "Mini-batch size (0: full batch)");
  combos->add_option("--learner", learner, "cnn|logistic");
  combos->add_option("--k", top_k, "Pairs to select");
  combos->add_option("--seed", seed, "Random seed");
  combos->add_option("--lang", lang, "Language (en|zh)");
  combos->add_option("--lexicon", lexicon, "Lexicon file (zh)");
  combos->add_option("--out", out, "Combo file (- for stdout)");

  // evaluate
  std::string pred_path, annotations_path, method = "emo-based";
  int level = 0;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against annotator agreement levels");
  evaluate->add_option("--pred", pred_path, "Prediction file")->required();
  evaluate->add_option("--annotations", annotations_path, "Annotation file")->required();
  evaluate->add_option("--level", level, "Agree level 1|2|3 (0: all levels)")->check(CLI::Range(0, 3));
  evaluate->add_option("--method", method, "Row label");

  // baseline
  std::string features = "tfidf", train_path, test_path;
  auto* baseline = app.add_subcommand("baseline", "Naive Bayes sarcasm baseline");
  baseline->add_option("--features", features, "tfidf|bow");
  baseline->add_option("--train", train_path, "Sarcasm-annotated training comments")->required();
  baseline->add_option("--test", test_path, "Annotation file")->required();
  baseline->add_option("--lang", lang, "Language (en|zh)");
  baseline->add_option("--lexicon", lexicon, "Lexicon file (zh)");
  baseline->add_option("--out", out, "Prediction file (optional)");

  // tune-thresholds
  std::string grid_path;
  auto* tune = app.add_subcommand("tune-thresholds", "Grid-search sarcasm thresholds at Agree 2");
  tune->add_option("--model", model_path, "Model file")->required();
  tune->add_option("--annotations", annotations_path, "Annotation file")->required();
  tune->add_option("--grid", grid_path, "Grid file with x1, x2, y1, y2 lists")->required();
  tune->add_option("--lang", lang, "Language (en|zh)");
  tune->add_option("--lexicon", lexicon, "Lexicon file (zh)");
  tune->add_option("--out", out, "Threshold profile file (- for stdout)");

  // synth
  std::string out_dir;
  std::size_t per_emotion = 1000, test_size = 500, annotators = 3;
  double sarcasm_rate = 0.1, noise_rate = 0.0, annotator_noise = 0.05;
  auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic corpus");
  synth->add_option("--out-dir", out_dir, "Output directory")->required();
  synth->add_option("--lang", lang, "Language (en|zh)");
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--per-emotion", per_emotion, "Comments per emotion");
  synth->add_option("--sarcasm-rate", sarcasm_rate, "Share of sarcastic comments");
  synth->add_option("--noise-rate", noise_rate, "Share of comments with an off-label phrase");
  synth->add_option("--test-size", test_size, "Held-out comments written with annotations");
  synth->add_option("--annotators", annotators, "Simulated annotators");
  synth->add_option("--annotator-noise", annotator_noise, "Probability an annotator flips the true label");

  // pipeline
  std::string config_path;
  std::vector<std::string> overrides;
  bool no_build = false, force = false;
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage from a config file");
  pipeline->add_option("--config", config_path, "Config file")->required();
  pipeline->add_option("--set", overrides, "Override section.key=value (repeatable)");
  pipeline->add_flag("--no-build", no_build, "Use the existing model instead of building it");
  pipeline->add_flag("--force", force, "Run stages even when their outputs are up to date");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) rm::set_thread_cap(threads);

  try {
    if (*ingest) {
      auto l = lang_of(lang);
      auto c = rm::load_comments(comments, l);
      auto r = rm::load_reactions(reactions);
      auto joined = rm::overlap_join(c.comments, r.events);
      for (const auto& w : c.warnings) std::cerr << "warning: " << w << '\n';
      std::cerr << "comments=" << c.comments.size() << " malformed=" << c.malformed << " other_lang=" << c.other_lang
                << " reactions=" << r.events.size() << " duplicate_reactions=" << r.duplicates
                << " labeled=" << joined.labeled.size() << " unmatched=" << joined.unmatched << '\n';
      rm::write_file(out, rm::format_labeled(joined.labeled));
      std::cout << rm::format_distribution_report(rm::distribution(std::span<const rm::LabeledComment>(joined.labeled)));
    } else if (*build_lexicon) {
      auto t = read_texts(inputs, rm::Lang::Zh);
      for (auto& s : t.texts) s = rm::normalize(s);
      auto lex = rm::build_zh_lexicon(t.texts, lex_threshold);
      rm::write_file(out, lex.serialize());
      std::cerr << "texts=" << t.texts.size() << " entries=" << lex.size() << '\n';
    } else if (*build_graph_cmd) {
      auto tok = make_tokenizer(lang, lexicon);
      auto t = read_texts(inputs, tok.lang());
      auto g = rm::build_graph(rm::tokenize_all(t.texts, t.ids, tok));
      rm::write_file(out, g.serialize());
      std::cerr << "texts=" << t.texts.size() << " nodes=" << g.node_count() << " edges=" << g.edge_count() << '\n';
    } else if (*reduce) {
      auto r = rm::reduce_graph(rm::CoocGraph::load(subjective), rm::CoocGraph::load(objective), dominance);
      rm::write_file(out, rm::serialize_reduced(r));
      std::cerr << "kept=" << r.graph.node_count() << " removed=" << r.removed.size() << '\n';
    } else if (*extract) {
      auto tok = make_tokenizer(lang, lexicon);
      auto reduced = rm::load_reduced(graph);
      auto lc = rm::load_labeled(labeled);
      auto mined = rm::extract_patterns(reduced, rm::tokenize_labeled(lc, tok), mining);
      auto model = rm::EmotionModel::build(std::move(mined.patterns), std::move(mined.stats));
      rm::write_file(out, model.serialize());
      std::cerr << "labeled=" << lc.size() << " patterns=" << model.size() << '\n';
    } else if (*classify_cmd || *sarcasm) {
      auto tok = make_tokenizer(lang, lexicon);
      auto model = rm::EmotionModel::load(model_path);
      auto c = rm::load_comments(input, tok.lang());
      Texts t;
      for (const auto& x : c.comments) t.ids.push_back(x.id), t.texts.push_back(x.text);
      auto scores = classify_all(rm::tokenize_all(t.texts, t.ids, tok), model);
      std::string body;
      if (*classify_cmd) {
        for (std::size_t i = 0; i < scores.size(); ++i) body += rm::format_classification(t.ids[i], scores[i]) + '\n';
      } else {
        auto th = rm::SarcasmThresholds::defaults(tok.lang());
        if (!thresholds_path.empty()) {
          auto profiles = rm::load_threshold_profiles(thresholds_path);
          if (auto it = profiles.find(tok.lang()); it != profiles.end()) th = it->second;
        }
        for (std::size_t i = 0; i < scores.size(); ++i) body += rm::format_sarcasm(t.ids[i], scores[i], th) + '\n';
      }
      emit(out, body);
    } else if (*combos) {
      auto tok = make_tokenizer(lang, lexicon);
      auto model = rm::EmotionModel::load(model_path);
      auto items = rm::load_annotated(annotated);
      lcfg.kind = learner_kind(learner);
      if (budget > model.size()) {
        std::cerr << "warning: --n " << budget << " exceeds the model's " << model.size() << " patterns; using "
                  << model.size() << '\n';
        budget = model.size();
      }
      auto result = rm::learn_combos(model, tok, items, budget, lcfg, seed, top_k);
      std::cerr << "examples=" << result.data.size() << " final_loss=" << rm::format_fixed(result.trace.epoch_loss.back(), 4)
                << " final_accuracy=" << rm::format_fixed(result.trace.epoch_accuracy.back(), 4) << '\n';
      for (const auto& p : result.selected) std::cerr << "selected\t" << p.name() << '\n';
      emit(out, result.histogram.serialize());
    } else if (*evaluate) {
      auto set = rm::load_annotations(annotations_path);
      auto pred = rm::load_predictions(pred_path);
      rm::ReportRow row;
      if (level == 0) {
        row = rm::evaluate_levels(method, pred, set);
      } else {
        row.method = method;
        row.levels[level - 1] = rm::metrics(pred, rm::agree_labels(set, level));
      }
      std::cout << rm::format_report(std::span<const rm::ReportRow>(&row, 1));
      auto kappa = rm::fleiss_kappa(set);
      std::cout << "fleiss_kappa\t" << rm::format_fixed(kappa.kappa, 4) << (kappa.degenerate ? "\tdegenerate" : "")
                << '\n';
    } else if (*baseline) {
      auto f = rm::parse_features(features);
      if (!f) throw rm::ConfigError("--features must be tfidf or bow");
      auto tok = make_tokenizer(lang, lexicon);
      auto train_items = rm::load_annotated(train_path);
      std::vector<rm::NbDocument> docs;
      for (const auto& a : train_items) docs.push_back({rm::surfaces(tok(a.text, a.id)), a.sarcastic ? std::uint8_t{1} : std::uint8_t{0}});
      auto nb = rm::nb_train(docs, *f);
      auto set = rm::load_annotations(test_path);
      std::map<std::string, std::uint8_t> pred;
      std::string body;
      for (const auto& item : set.items) {
        auto p = rm::nb_predict(nb, rm::surfaces(tok(item.text, item.id)));
        pred[item.id] = p;
        body += item.id + '\t' + std::to_string(p) + '\n';
      }
      if (!out.empty()) emit(out, body);
      auto row = rm::evaluate_levels(std::string(rm::features_name(*f)), pred, set);
      std::cout << rm::format_report(std::span<const rm::ReportRow>(&row, 1));
    } else if (*tune) {
      auto tok = make_tokenizer(lang, lexicon);
      auto model = rm::EmotionModel::load(model_path);
      auto set = rm::load_annotations(annotations_path);
      auto grid = rm::load_grid(grid_path);
      auto result = rm::grid_search_thresholds(model, tok, set, grid, rm::SarcasmThresholds::defaults(tok.lang()));
      std::cerr << "evaluated=" << result.evaluated << " f1=" << rm::format_fixed(result.report.f1, 4)
                << " precision=" << rm::format_fixed(result.report.precision, 4) << '\n';
      emit(out, rm::format_threshold_profiles({{tok.lang(), result.best}}));
    } else if (*synth) {
      auto l = lang_of(lang);
      auto cfg = rm::default_synth_config(l);
      cfg.comments_per_emotion.fill(per_emotion);
      cfg.sarcasm_rate = sarcasm_rate;
      cfg.noise_rate = noise_rate;
      auto corpus = rm::synth_corpus(cfg, seed);
      if (test_size > corpus.labeled.size()) throw rm::ConfigError("--test-size exceeds the corpus");
      if (annotators < 2) throw rm::ConfigError("--annotators must be at least 2");
      const auto split = corpus.labeled.size() - test_size;
      std::span<const rm::LabeledComment> train(corpus.labeled.data(), split);
      std::span<const rm::LabeledComment> test(corpus.labeled.data() + split, test_size);

      fs::path dir(out_dir);
      rm::write_file(dir / "posts.tsv", rm::format_posts(corpus.posts));
      rm::write_file(dir / "comments.tsv", rm::format_comments(rm::strip_labels(train)));
      rm::write_file(dir / "reactions.tsv", rm::format_reactions(rm::reactions_of(train)));
      rm::write_file(dir / "test_comments.tsv", rm::format_comments(rm::strip_labels(test)));

      std::vector<rm::AnnotatedComment> ann;
      for (const auto& lc : train) {
        ann.push_back({lc.comment.id, l, corpus.sarcastic_ids.count(lc.comment.id) > 0, lc.comment.text});
      }
      rm::write_file(dir / "annotated.tsv", rm::format_annotated(ann));

      std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
      rm::AnnotationSet set{annotators, {}};
      for (const auto& lc : test) {
        const bool truth = corpus.sarcastic_ids.count(lc.comment.id) > 0;
        rm::AnnotatedItem item{lc.comment.id, l, lc.comment.text, {}};
        for (std::size_t a = 0; a < annotators; ++a) {
          bool vote = unit(rng) < annotator_noise ? !truth : truth;
          item.votes.push_back(vote ? 1 : 0);
        }
        set.items.push_back(std::move(item));
      }
      rm::write_file(dir / "annotations.tsv", rm::format_annotations(set));

      rm::KeyValueConfig pc;
      pc.set("pipeline", "lang", std::string(rm::lang_name(l)));
      pc.set("pipeline", "work_dir", "work");
      pc.set("pipeline", "seed", std::to_string(seed));
      pc.set("ingest", "comments", "comments.tsv");
      pc.set("ingest", "reactions", "reactions.tsv");
      pc.set("ingest", "posts", "posts.tsv");
      pc.set("classify", "input", "test_comments.tsv");
      pc.set("evaluate", "annotations", "annotations.tsv");
      rm::write_file(dir / "pipeline.ini", pc.serialize());
      std::cerr << "train=" << train.size() << " test=" << test.size() << " posts=" << corpus.posts.size()
                << " sarcastic=" << corpus.sarcastic_ids.size() << '\n';
    } else if (*pipeline) {
      rm::PipelineConfig cfg;
      try {
        cfg = rm::PipelineConfig::load(config_path, overrides);
      } catch (const rm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return rm::kConfigExitCode;
      }
      if (threads > 0) cfg.threads = threads;
      rm::PipelineOptions opts{no_build, force, &std::cerr};
      auto result = rm::run_pipeline(cfg, opts);
      if (result.exit_code != 0) std::cerr << "error: " << result.error << '\n';
      return result.exit_code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}
