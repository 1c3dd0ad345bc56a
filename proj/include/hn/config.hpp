#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hn {

// Flat key = value configuration with '#' comments. Typed getters record the
// fully resolved value (including defaults) for the manifest; unknown keys
// are rejected when the experiment finishes reading its schema.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text, const std::string& origin = "<text>");

  // Command-line override (--set key=value); replaces any file value.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);
  std::uint64_t get_uint(const std::string& key);
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback);
  std::vector<double> get_double_list(const std::string& key, const std::string& fallback);
  std::vector<std::string> get_string_list(const std::string& key, const std::string& fallback);

  // Throws if any key was never consumed by a getter.
  void reject_unknown() const;

  // Sorted "key = value" lines covering everything the experiment resolved.
  std::string manifest() const;

 private:
  std::string raw(const std::string& key);  // marks consumed
  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
  std::map<std::string, std::string> resolved_;
};

}  // namespace hn
