#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reaction_miner {

/// Plain-text sectioned key-value file:
///
///   # comment
///   [section]
///   key = value
///
/// Keys that appear before the first section header belong to section "".
class KeyValueConfig {
 public:
  using Section = std::map<std::string, std::string>;

  static KeyValueConfig parse(std::span<const std::string> lines);
  static KeyValueConfig load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key, std::string fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;

  void set(const std::string& section, const std::string& key, std::string value);
  bool has_section(const std::string& section) const { return sections_.count(section) > 0; }
  const std::map<std::string, Section>& sections() const { return sections_; }

  std::string serialize() const;

 private:
  std::map<std::string, Section> sections_;
};

/// Comma separated list, items trimmed, empties dropped.
std::vector<std::string> split_list(std::string_view s);

double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);

}  // namespace reaction_miner
