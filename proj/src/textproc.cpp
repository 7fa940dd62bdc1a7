#include "reaction_miner/textproc.hpp"

#include <algorithm>
#include <unordered_map>

#include "reaction_miner/error.hpp"
#include "reaction_miner/util.hpp"

namespace reaction_miner {

std::string render(const TokenSeq& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.elements.size(); ++i) {
    if (i) out += ' ';
    out += seq.elements[i].is_wildcard() ? "*" : seq.elements[i].surface;
  }
  return out;
}

// ---- UTF-8 -------------------------------------------------------------------

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' || cp == 0x00A0 ||
         cp == 0x3000 || (cp >= 0x2000 && cp <= 0x200A);
}

bool is_symbol_cp(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
           (cp >= 0x7B && cp <= 0x7E);
  }
  if (is_space_cp(cp)) return false;
  return (cp >= 0x00A1 && cp <= 0x00BF) || cp == 0x00D7 || cp == 0x00F7 ||
         (cp >= 0x200B && cp <= 0x206F) ||  // general punctuation, incl. ZWJ
         (cp >= 0x2190 && cp <= 0x2BFF) ||  // arrows, math, technical, dingbats
         (cp >= 0x3001 && cp <= 0x303F) ||  // CJK punctuation
         (cp >= 0xFE00 && cp <= 0xFE0F) ||  // variation selectors
         (cp >= 0xFE10 && cp <= 0xFE1F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
         (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65) ||
         (cp >= 0x1F000 && cp <= 0x1FAFF);  // emoji
}

bool is_symbol_surface(std::string_view surface) {
  if (surface.empty()) return false;
  auto cps = decode_utf8(surface);
  return std::all_of(cps.begin(), cps.end(), is_symbol_cp);
}

// ---- normalize ----------------------------------------------------------------

namespace {

char32_t lower_latin(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if ((cp >= 0x0100 && cp <= 0x0137) || (cp >= 0x014A && cp <= 0x0177)) return (cp % 2 == 0) ? cp + 1 : cp;
  if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E)) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;
  return cp;
}

bool is_mention_char(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9') || cp == '_' || (cp >= 'A' && cp <= 'Z');
}

bool starts_with(const std::vector<char32_t>& cps, std::size_t at, std::string_view prefix) {
  if (at + prefix.size() > cps.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (cps[at + k] != static_cast<unsigned char>(prefix[k])) return false;
  }
  return true;
}

bool is_url_trailer(char32_t cp) {
  return cp == '.' || cp == ',' || cp == '!' || cp == '?' || cp == ';' || cp == ':' || cp == ')' || cp == ']' ||
         cp == '"' || cp == '\'';
}

// Rewrites one whitespace-free chunk (already lowercased).
void normalize_chunk(const std::vector<char32_t>& chunk, std::string& out) {
  std::size_t i = 0;
  while (i < chunk.size()) {
    bool boundary = i == 0 || is_symbol_cp(chunk[i - 1]);
    if (boundary && (starts_with(chunk, i, "http://") || starts_with(chunk, i, "https://") ||
                     starts_with(chunk, i, "www."))) {
      std::size_t end = chunk.size();
      while (end > i && is_url_trailer(chunk[end - 1])) --end;
      out += " url ";
      for (std::size_t k = end; k < chunk.size(); ++k) append_utf8(out, chunk[k]);
      return;
    }
    if (boundary && chunk[i] == '@' && i + 1 < chunk.size() && is_mention_char(chunk[i + 1])) {
      std::size_t end = i + 1;
      while (end < chunk.size() && is_mention_char(chunk[end])) ++end;
      out += " user ";
      i = end;
      continue;
    }
    append_utf8(out, chunk[i]);
    ++i;
  }
}

}  // namespace

std::string normalize(std::string_view text) {
  auto cps = decode_utf8(text);
  for (auto& cp : cps) cp = lower_latin(cp);
  std::string rewritten;
  rewritten.reserve(text.size() + 8);
  std::vector<char32_t> chunk;
  auto flush = [&] {
    if (chunk.empty()) return;
    normalize_chunk(chunk, rewritten);
    rewritten += ' ';
    chunk.clear();
  };
  for (auto cp : cps) {
    if (is_space_cp(cp)) {
      flush();
    } else {
      chunk.push_back(cp);
    }
  }
  flush();
  // Collapse the whitespace introduced above.
  std::string out;
  out.reserve(rewritten.size());
  bool pending_space = false;
  for (char c : rewritten) {
    if (c == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

// ---- tokenize_en ----------------------------------------------------------------

namespace {

std::string encode(const std::vector<char32_t>& cps, std::size_t b, std::size_t e) {
  std::string s;
  for (std::size_t k = b; k < e; ++k) append_utf8(s, cps[k]);
  return s;
}

}  // namespace

TokenSeq tokenize_en(std::string_view text, std::string source_id) {
  TokenSeq seq;
  seq.source_id = std::move(source_id);
  auto cps = decode_utf8(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space_cp(cps[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < cps.size() && !is_space_cp(cps[end])) ++end;
    std::size_t lead = i;
    while (lead < end && is_symbol_cp(cps[lead])) ++lead;
    if (lead == end) {
      seq.elements.push_back(Element::symbol(encode(cps, i, end)));
    } else {
      std::size_t trail = end;
      while (trail > lead && is_symbol_cp(cps[trail - 1])) --trail;
      if (lead > i) seq.elements.push_back(Element::symbol(encode(cps, i, lead)));
      seq.elements.push_back(Element::word(encode(cps, lead, trail)));
      if (trail < end) seq.elements.push_back(Element::symbol(encode(cps, trail, end)));
    }
    i = end;
  }
  return seq;
}

// ---- Chinese lexicon ----------------------------------------------------------------

ZhLexicon::ZhLexicon(std::map<std::string, std::uint64_t> entries) : entries_(std::move(entries)) {}

std::uint64_t ZhLexicon::frequency(const std::string& word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? 0 : it->second;
}

std::string ZhLexicon::serialize() const {
  std::vector<std::pair<std::string, std::uint64_t>> rows(entries_.begin(), entries_.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::string out;
  for (const auto& [word, freq] : rows) out += word + '\t' + std::to_string(freq) + '\n';
  return out;
}

ZhLexicon ZhLexicon::parse(std::span<const std::string> lines) {
  std::map<std::string, std::uint64_t> entries;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    auto f = split(lines[ln], '\t');
    if (f.size() != 2 || f[0].empty()) throw FormatError("lexicon: bad line " + std::to_string(ln + 1));
    auto n = decode_utf8(f[0]).size();
    if (n < 2 || n > 4) throw FormatError("lexicon: word length must be 2-4 characters at line " + std::to_string(ln + 1));
    entries[std::string(f[0])] = std::stoull(std::string(f[1]));
  }
  return ZhLexicon(std::move(entries));
}

ZhLexicon ZhLexicon::load(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse(lines);
}

namespace {

using NgramCounts = std::unordered_map<std::string, std::uint64_t>;

void count_run(const std::vector<char32_t>& cps, std::size_t b, std::size_t e, NgramCounts& counts) {
  for (std::size_t i = b; i < e; ++i) {
    for (std::size_t len = 2; len <= 4 && i + len <= e; ++len) ++counts[encode(cps, i, i + len)];
  }
}

void count_text(std::string_view text, NgramCounts& counts) {
  auto cps = decode_utf8(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space_cp(cps[i]) || is_symbol_cp(cps[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < cps.size() && !is_space_cp(cps[end]) && !is_symbol_cp(cps[end])) ++end;
    count_run(cps, i, end, counts);
    i = end;
  }
}

// Distinct substrings of `len` code points.
std::vector<std::string> distinct_substrings(const std::vector<char32_t>& cps, std::size_t len) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + len <= cps.size(); ++i) {
    auto s = encode(cps, i, i + len);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::map<std::string, std::uint64_t> count_zh_ngrams(std::span<const std::string> texts) {
  auto parts = partition_count(texts.size());
  std::vector<NgramCounts> partial(parts);
  parallel_partitions(texts.size(), parts, [&](std::size_t b, std::size_t e, std::size_t p) {
    for (std::size_t i = b; i < e; ++i) count_text(texts[i], partial[p]);
  });
  std::map<std::string, std::uint64_t> merged;
  for (auto& part : partial) {
    for (auto& [k, v] : part) merged[k] += v;
  }
  return merged;
}

ZhLexicon build_zh_lexicon(std::span<const std::string> texts, std::uint64_t threshold) {
  if (threshold == 0) throw ConfigError("lexicon threshold must be positive");
  auto raw = count_zh_ngrams(texts);

  // Signed working copy: subtraction can pass below zero before clamping.
  std::map<std::string, long long> adjusted;
  for (const auto& [k, v] : raw) adjusted[k] = static_cast<long long>(v);

  for (const auto& [gram, freq] : raw) {
    auto cps = decode_utf8(gram);
    if (cps.size() == 4) {
      for (const auto& sub : distinct_substrings(cps, 3)) adjusted[sub] -= static_cast<long long>(freq);
      for (const auto& sub : distinct_substrings(cps, 2)) adjusted[sub] -= static_cast<long long>(freq);
    } else if (cps.size() == 3) {
      for (const auto& sub : distinct_substrings(cps, 2)) adjusted[sub] -= static_cast<long long>(freq);
    }
  }

  std::map<std::string, std::uint64_t> kept;
  for (const auto& [k, v] : adjusted) {
    auto clamped = static_cast<std::uint64_t>(std::max<long long>(v, 0));
    if (clamped >= threshold) kept.emplace(k, clamped);
  }
  return ZhLexicon(std::move(kept));
}

TokenSeq segment_zh(std::string_view text, const ZhLexicon& lexicon, std::string source_id) {
  TokenSeq seq;
  seq.source_id = std::move(source_id);
  auto cps = decode_utf8(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space_cp(cps[i])) {
      ++i;
      continue;
    }
    if (is_symbol_cp(cps[i])) {
      std::size_t end = i;
      while (end < cps.size() && is_symbol_cp(cps[end])) ++end;
      seq.elements.push_back(Element::symbol(encode(cps, i, end)));
      i = end;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < cps.size() && !is_space_cp(cps[run_end]) && !is_symbol_cp(cps[run_end])) ++run_end;
    std::size_t taken = 1;
    for (std::size_t len = 4; len >= 2; --len) {
      if (i + len <= run_end && lexicon.contains(encode(cps, i, i + len))) {
        taken = len;
        break;
      }
    }
    seq.elements.push_back(Element::word(encode(cps, i, i + taken)));
    i += taken;
  }
  return seq;
}

// ---- Tokenizer ----------------------------------------------------------------

Tokenizer::Tokenizer(Lang lang, std::shared_ptr<const ZhLexicon> lexicon)
    : lang_(lang), lexicon_(std::move(lexicon)) {
  if (lang_ == Lang::Zh && !lexicon_) lexicon_ = std::make_shared<const ZhLexicon>();
}

TokenSeq Tokenizer::operator()(std::string_view text, std::string source_id) const {
  auto norm = normalize(text);
  if (lang_ == Lang::En) return tokenize_en(norm, std::move(source_id));
  return segment_zh(norm, *lexicon_, std::move(source_id));
}

}  // namespace reaction_miner
