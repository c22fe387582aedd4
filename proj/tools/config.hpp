#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace strav::bench {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Key/value experiment configuration: one `key = value` pair per line,
/// '#' starts a comment, blank lines ignored. Keys are consumed by the
/// typed getters; finish() rejects configs with unknown (never consumed)
/// keys so that typos fail loudly.
class Config {
public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::size_t require_size(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> require_double_list(const std::string& key) const;
  std::vector<std::uint64_t> require_u64_list(const std::string& key) const;
  std::vector<std::size_t> require_size_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback) const;

  /// Throws ConfigError if any key present in the document was never read.
  void finish() const;

private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

} // namespace strav::bench
