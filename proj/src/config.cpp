#include "reaction_miner/config.hpp"

#include <cerrno>
#include <cstdlib>

#include "reaction_miner/error.hpp"
#include "reaction_miner/util.hpp"

namespace reaction_miner {

KeyValueConfig KeyValueConfig::parse(std::span<const std::string> lines) {
  KeyValueConfig cfg;
  std::string section;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = trim(lines[ln]);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(ln + 1) + ": unterminated section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      cfg.sections_[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line " + std::to_string(ln + 1) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(ln + 1) + ": empty key");
    cfg.sections_[section][std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse(lines);
}

std::optional<std::string> KeyValueConfig::get(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string KeyValueConfig::get_or(const std::string& section, const std::string& key, std::string fallback) const {
  auto v = get(section, key);
  return v ? *v : std::move(fallback);
}

double KeyValueConfig::get_double(const std::string& section, const std::string& key, double fallback) const {
  auto v = get(section, key);
  return v ? parse_double(*v, section + "." + key) : fallback;
}

long long KeyValueConfig::get_int(const std::string& section, const std::string& key, long long fallback) const {
  auto v = get(section, key);
  return v ? parse_int(*v, section + "." + key) : fallback;
}

void KeyValueConfig::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = std::move(value);
}

std::string KeyValueConfig::serialize() const {
  std::string out;
  for (const auto& [name, kv] : sections_) {
    if (!name.empty()) out += "[" + name + "]\n";
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  }
  return out;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  for (auto item : split(s, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

double parse_double(std::string_view s, std::string_view what) {
  std::string str(trim(s));
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size() || errno == ERANGE) {
    throw ConfigError(std::string(what) + ": not a number: '" + str + "'");
  }
  return v;
}

long long parse_int(std::string_view s, std::string_view what) {
  std::string str(trim(s));
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(str.c_str(), &end, 10);
  if (str.empty() || end != str.c_str() + str.size() || errno == ERANGE) {
    throw ConfigError(std::string(what) + ": not an integer: '" + str + "'");
  }
  return v;
}

}  // namespace reaction_miner
