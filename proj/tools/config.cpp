#include "config.hpp"

#include <fstream>
#include <sstream>

namespace strav::bench {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has a bad number: " + value);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key +
                      "' has a bad integer: " + value);
  }
}

} // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not a 'key = value' pair");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " has an empty key or value");
    }
    if (!cfg.values_.emplace(key, value).second) {
      throw ConfigError("config: duplicate key '" + key + "'");
    }
  }
  return cfg;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("config: missing required key '" + key + "'");
  }
  return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

std::size_t Config::get_size(const std::string& key,
                             std::size_t fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return static_cast<std::size_t>(parse_u64(key, it->second));
}

std::size_t Config::require_size(const std::string& key) const {
  return static_cast<std::size_t>(parse_u64(key, require_string(key)));
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_u64(key, it->second);
}

std::vector<double> Config::require_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(require_string(key))) {
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' is empty");
  return out;
}

std::vector<std::uint64_t>
Config::require_u64_list(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(require_string(key))) {
    out.push_back(parse_u64(key, item));
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' is empty");
  return out;
}

std::vector<std::size_t>
Config::require_size_list(const std::string& key) const {
  std::vector<std::size_t> out;
  for (std::uint64_t v : require_u64_list(key)) {
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double>
Config::get_double_list(const std::string& key,
                        std::vector<double> fallback) const {
  consumed_.insert(key);
  if (!has(key)) return fallback;
  return require_double_list(key);
}

void Config::finish() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (consumed_.count(key) == 0) {
      unknown += unknown.empty() ? key : ", " + key;
    }
  }
  if (!unknown.empty()) {
    throw ConfigError("config: unknown keys: " + unknown);
  }
}

} // namespace strav::bench
