#include "doctest.h"

#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "reaction_miner/error.hpp"
#include "reaction_miner/pipeline.hpp"
#include "reaction_miner/util.hpp"

namespace rm = reaction_miner;
namespace fs = std::filesystem;

namespace {
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("rm_unit_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

rm::PipelineConfig small_setup(const fs::path& dir) {
  auto cfg = rm::default_synth_config(rm::Lang::En);
  cfg.comments_per_emotion.fill(150);
  cfg.posts = 40;
  auto c = rm::synth_corpus(cfg, 21);
  rm::write_file(dir / "posts.tsv", rm::format_posts(c.posts));
  rm::write_file(dir / "comments.tsv", rm::format_comments(rm::strip_labels(c.labeled)));
  rm::write_file(dir / "reactions.tsv", rm::format_reactions(rm::reactions_of(c.labeled)));
  rm::write_file(dir / "pipeline.ini",
                 "[pipeline]\nwork_dir = work\n[ingest]\ncomments = comments.tsv\nreactions = reactions.tsv\n"
                 "posts = posts.tsv\n[patterns]\nmin_freq = 5\n");
  return rm::PipelineConfig::load(dir / "pipeline.ini");
}

std::vector<std::string> statuses(const rm::PipelineResult& r) {
  std::vector<std::string> out;
  for (const auto& s : r.stages) out.push_back(s.status);
  return out;
}
}  // namespace

TEST_CASE("config parsing") {
  auto parse = [](std::vector<std::string> lines) {
    return rm::PipelineConfig::from(rm::KeyValueConfig::parse(lines), "/base");
  };
  auto c = parse({"[pipeline]", "lang = zh", "seed = 9", "[ingest]", "comments = c.tsv", "[graph]", "dominance = 0.25"});
  CHECK(c.lang == rm::Lang::Zh);
  CHECK(c.seed == 9);
  CHECK(c.comments == fs::path("/base/c.tsv"));
  CHECK(c.dominance == 0.25);
  CHECK(c.work_dir == fs::path("/base/work"));
  CHECK_THROWS_AS(parse({"[pipeline]", "colour = red"}), rm::ConfigError);
  CHECK_THROWS_AS(parse({"[nonsense]", "a = b"}), rm::ConfigError);
  CHECK_THROWS_AS(parse({"[pipeline]", "lang = fr"}), rm::ConfigError);

  auto kv = rm::KeyValueConfig::parse(std::vector<std::string>{"[graph]", "dominance = 0.5"});
  std::vector<std::string> ov{"graph.dominance=0.75", "learner.epochs=3"};
  rm::apply_overrides(kv, ov);
  CHECK(kv.get("graph", "dominance") == "0.75");
  std::vector<std::string> bad{"nodot=1"};
  CHECK_THROWS_AS(rm::apply_overrides(kv, bad), rm::ConfigError);
}

TEST_CASE("stage exit codes") {
  CHECK(rm::stage_exit_code(rm::Stage::Ingest) == 10);
  CHECK(rm::stage_exit_code(rm::Stage::Classify) == 15);
  CHECK(rm::stage_exit_code(rm::Stage::Evaluate) == 17);
  CHECK(rm::stage_name(rm::Stage::Reduce) == "reduce");
}

TEST_CASE("pipeline run, staleness and no-build") {
  TempDir tmp("pipeline");
  auto cfg = small_setup(tmp.path);
  std::ostringstream log;
  auto first = rm::run_pipeline(cfg, {false, false, &log});
  REQUIRE_MESSAGE(first.exit_code == 0, first.error);
  CHECK(fs::exists(cfg.artifact("model.tsv")));
  CHECK(fs::exists(cfg.artifact("classify.tsv")));
  CHECK(fs::exists(cfg.artifact("sarcasm.tsv")));
  CHECK(log.str().find("[pipeline] stage=ingest status=ran") != std::string::npos);

  auto second = rm::run_pipeline(cfg);
  for (const auto& s : second.stages) {
    CHECK((s.status == "skipped" || s.status == "not_applicable"));
  }

  auto forced = rm::run_pipeline(cfg, {false, true, nullptr});
  CHECK(statuses(forced)[0] == "ran");

  auto nb = rm::run_pipeline(cfg, {true, true, nullptr});
  CHECK(nb.exit_code == 0);
  CHECK(statuses(nb)[0] == "not_applicable");

  fs::remove(cfg.artifact("model.tsv"));
  auto missing = rm::run_pipeline(cfg, {true, false, nullptr});
  CHECK(missing.exit_code == rm::stage_exit_code(rm::Stage::Classify));
  REQUIRE(missing.failed.has_value());
  CHECK(*missing.failed == rm::Stage::Classify);
}

TEST_CASE("output formats") {
  auto s = rm::make_scores({10, 9, 2, 0, 0}, 1);
  auto line = rm::format_classification("c1", s);
  CHECK(line == "c1\tangry\t10\thaha\t9\twow\t2\tsad\t0\tlove\t0\t0");
  auto sar = rm::format_sarcasm("c1", s, rm::SarcasmThresholds::defaults(rm::Lang::En));
  CHECK(sar.rfind("c1\t1\t7\t", 0) == 0);
  CHECK(sar.find("sarcastic") != std::string::npos);
  CHECK(rm::format_sarcasm("c2", rm::make_scores({}, 0), rm::SarcasmThresholds{}) ==
        "c2\t0\tNA\tNA\tNA\t0\tno_signal");
}
