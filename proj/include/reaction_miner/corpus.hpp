#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reaction_miner/emotion.hpp"

namespace reaction_miner {

enum class Lang : std::uint8_t { En, Zh };

std::string_view lang_name(Lang lang);
std::optional<Lang> parse_lang(std::string_view s);

struct RawComment {
  std::string id;
  std::string post_id;
  std::string user_id;
  std::string text;
  Lang lang = Lang::En;
};

struct ReactionEvent {
  std::string post_id;
  std::string user_id;
  Emotion reaction = Emotion::Angry;
};

struct LabeledComment {
  RawComment comment;
  Emotion label = Emotion::Angry;
};

struct NewsPost {
  std::string id;
  std::string text;
  Lang lang = Lang::En;
};

struct LabelDistribution {
  std::array<std::uint64_t, kEmotionCount> counts{};
  std::uint64_t total = 0;
  std::array<double, kEmotionCount> shares{};

  std::uint64_t count(Emotion e) const { return counts[index_of(e)]; }
  double share(Emotion e) const { return shares[index_of(e)]; }
};

// ---- ingestion ----------------------------------------------------------

/// Result of reading a comment file. Malformed lines are counted, not fatal.
struct CommentLoad {
  std::vector<RawComment> comments;
  std::size_t malformed = 0;
  /// Well-formed records tagged with the other supported language.
  std::size_t other_lang = 0;
  std::vector<std::string> warnings;
};

/// Parses comment records `id, post_id, user_id, lang, text` (tab separated,
/// text last). Throws FormatError when more than half the non-empty lines are malformed.
CommentLoad parse_comments(std::span<const std::string> lines, Lang lang);
CommentLoad load_comments(const std::filesystem::path& path, Lang lang);

struct ReactionLoad {
  std::vector<ReactionEvent> events;
  std::size_t malformed = 0;
  /// Later events repeating an earlier (post_id, user_id) key.
  std::size_t duplicates = 0;
};

ReactionLoad parse_reactions(std::span<const std::string> lines);
ReactionLoad load_reactions(const std::filesystem::path& path);

struct PostLoad {
  std::vector<NewsPost> posts;
  std::size_t malformed = 0;
  std::size_t other_lang = 0;
};

PostLoad parse_posts(std::span<const std::string> lines, Lang lang);
PostLoad load_posts(const std::filesystem::path& path, Lang lang);

/// Labeled comment file: `id, post_id, user_id, lang, label, text`.
std::string format_labeled(std::span<const LabeledComment> labeled);
std::vector<LabeledComment> load_labeled(const std::filesystem::path& path);
std::vector<LabeledComment> parse_labeled(std::span<const std::string> lines);

std::string format_comments(std::span<const RawComment> comments);
std::string format_reactions(std::span<const ReactionEvent> events);
std::string format_posts(std::span<const NewsPost> posts);

// ---- join & reporting ---------------------------------------------------

struct JoinResult {
  std::vector<LabeledComment> labeled;
  std::size_t unmatched = 0;
  std::size_t duplicate_reactions = 0;
};

/// Labels each comment with the reaction its author left on the same post.
/// Output order follows comment order; duplicate reaction keys keep the first event.
JoinResult overlap_join(std::span<const RawComment> comments, std::span<const ReactionEvent> reactions);

LabelDistribution distribution(std::span<const LabeledComment> labeled);
LabelDistribution distribution(std::span<const Emotion> labels);
LabelDistribution distribution_from_counts(const std::array<std::uint64_t, kEmotionCount>& counts);
LabelDistribution operator+(const LabelDistribution& a, const LabelDistribution& b);

/// Human table followed by `emotion<TAB>count<TAB>share` lines.
std::string format_distribution_report(const LabelDistribution& dist);

// ---- synthetic corpus ---------------------------------------------------

/// One planted phrase: space separated elements with a single "*" slot,
/// e.g. "people are *". The slot is filled from the emotion's filler words.
struct PlantedTemplate {
  std::string pattern;
  std::vector<std::string> fillers;
};

struct SynthConfig {
  Lang lang = Lang::En;
  std::array<std::vector<PlantedTemplate>, kEmotionCount> planted;
  std::array<std::size_t, kEmotionCount> comments_per_emotion{};
  /// Shared by posts and the non-planted part of comments.
  std::vector<std::string> objective_vocab;
  std::size_t posts = 200;
  std::size_t post_min_words = 8;
  std::size_t post_max_words = 16;
  std::size_t comment_min_filler = 1;
  std::size_t comment_max_filler = 5;
  /// Probability that a comment is rewritten as a sarcastic Angry+Haha mix.
  double sarcasm_rate = 0.0;
  /// Probability that a non-sarcastic comment also carries one off-label phrase.
  double noise_rate = 0.0;
};

/// English defaults: five templates per emotion modelled on typical reaction
/// comments, 1000 comments per emotion.
SynthConfig default_synth_config(Lang lang = Lang::En);

struct SynthCorpus {
  std::vector<NewsPost> posts;
  std::vector<LabeledComment> labeled;
  std::set<std::string> sarcastic_ids;
};

/// Deterministic for a fixed (config, seed). Throws ConfigError for an
/// emotion with requested comments but no planted vocabulary.
SynthCorpus synth_corpus(const SynthConfig& config, std::uint64_t seed);

/// Splits a labeled corpus back into the raw files the ingest stage reads.
std::vector<RawComment> strip_labels(std::span<const LabeledComment> labeled);
std::vector<ReactionEvent> reactions_of(std::span<const LabeledComment> labeled);

}  // namespace reaction_miner
