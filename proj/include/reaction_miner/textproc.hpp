#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reaction_miner/corpus.hpp"

namespace reaction_miner {

enum class ElementKind : std::uint8_t { Word, Symbol, Wildcard };

/// Atomic unit of text and of patterns: a word, a maximal punctuation run, or the wildcard slot.
struct Element {
  ElementKind kind = ElementKind::Word;
  std::string surface;

  static Element word(std::string s) { return {ElementKind::Word, std::move(s)}; }
  static Element symbol(std::string s) { return {ElementKind::Symbol, std::move(s)}; }
  static Element wildcard() { return {ElementKind::Wildcard, {}}; }

  bool is_wildcard() const { return kind == ElementKind::Wildcard; }

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct TokenSeq {
  std::vector<Element> elements;
  std::string source_id;

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
};

/// Space-joined surfaces.
std::string render(const TokenSeq& seq);

// ---- character classes ----------------------------------------------------

/// Decodes UTF-8 into code points; invalid bytes decode to U+FFFD one byte at a time.
std::vector<char32_t> decode_utf8(std::string_view s);
void append_utf8(std::string& out, char32_t cp);

bool is_space_cp(char32_t cp);
/// Punctuation, symbols and emoji: everything that forms Symbol elements.
bool is_symbol_cp(char32_t cp);
/// True when every code point of `surface` is a symbol (and it is non-empty).
bool is_symbol_surface(std::string_view surface);

// ---- English ----------------------------------------------------------------

/// Lowercases Latin letters, replaces URLs with `url` and @-mentions with
/// `user`, collapses whitespace. CJK text passes through unchanged. Idempotent.
std::string normalize(std::string_view text);

/// Whitespace split; leading and trailing punctuation runs of each chunk
/// become Symbol elements, the rest a Word. Expects normalized text.
TokenSeq tokenize_en(std::string_view text, std::string source_id = {});

// ---- Chinese ----------------------------------------------------------------

/// Two- to four-character words with their frequency after containment subtraction.
class ZhLexicon {
 public:
  ZhLexicon() = default;
  explicit ZhLexicon(std::map<std::string, std::uint64_t> entries);

  const std::map<std::string, std::uint64_t>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(const std::string& word) const { return entries_.count(word) > 0; }
  std::uint64_t frequency(const std::string& word) const;

  /// `word<TAB>freq` lines, descending frequency, ties by word bytes.
  std::string serialize() const;
  static ZhLexicon parse(std::span<const std::string> lines);
  static ZhLexicon load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::uint64_t> entries_;
};

/// Raw frequencies of every contiguous 2-, 3- and 4-character substring,
/// counted within runs of non-space, non-symbol characters.
std::map<std::string, std::uint64_t> count_zh_ngrams(std::span<const std::string> texts);

/// (1) count 2/3/4-grams; (2) each 3-gram loses the frequency of every distinct
/// 4-gram containing it; (3) each 2-gram loses the frequencies of every distinct
/// containing 3- and 4-gram; clamp at 0; keep entries >= threshold. Containers
/// contribute their step-1 counts.
ZhLexicon build_zh_lexicon(std::span<const std::string> texts, std::uint64_t threshold);

/// Greedy left-to-right longest match (4 > 3 > 2 characters). Unmatched
/// characters become single-character Words; punctuation runs become Symbols.
TokenSeq segment_zh(std::string_view text, const ZhLexicon& lexicon, std::string source_id = {});

inline constexpr std::uint64_t kDefaultLexiconThreshold = 5;

// ---- language dispatch -------------------------------------------------------

/// normalize + tokenize_en, or normalize + segment_zh against a lexicon.
class Tokenizer {
 public:
  explicit Tokenizer(Lang lang, std::shared_ptr<const ZhLexicon> lexicon = nullptr);

  TokenSeq operator()(std::string_view text, std::string source_id = {}) const;
  Lang lang() const { return lang_; }

 private:
  Lang lang_;
  std::shared_ptr<const ZhLexicon> lexicon_;
};

}  // namespace reaction_miner
