#include "hn/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hn/error.hpp"

namespace hn {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParameterError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (cfg.values_.count(key)) {
      throw ParameterError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                           "'");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  consumed_.erase(key);
}

std::string Config::raw(const std::string& key) {
  consumed_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) throw ParameterError("config: missing required key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key) {
  const std::string v = raw(key);
  resolved_[key] = v;
  return v;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  consumed_.insert(key);
  const std::string v = values_.count(key) ? values_.at(key) : fallback;
  resolved_[key] = v;
  return v;
}

double Config::get_double(const std::string& key) {
  const std::string v = raw(key);
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (errno || end == v.c_str() || *end != '\0') {
    throw ParameterError("config: key '" + key + "' is not a number: '" + v + "'");
  }
  resolved_[key] = v;
  return x;
}

double Config::get_double(const std::string& key, double fallback) {
  if (!values_.count(key)) {
    consumed_.insert(key);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", fallback);
    resolved_[key] = buf;
    return fallback;
  }
  return get_double(key);
}

std::int64_t Config::get_int(const std::string& key) {
  const std::string v = raw(key);
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (errno || end == v.c_str() || *end != '\0') {
    throw ParameterError("config: key '" + key + "' is not an integer: '" + v + "'");
  }
  resolved_[key] = v;
  return x;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) {
  if (!values_.count(key)) {
    consumed_.insert(key);
    resolved_[key] = std::to_string(fallback);
    return fallback;
  }
  return get_int(key);
}

std::uint64_t Config::get_uint(const std::string& key) {
  const std::string v = raw(key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (errno || end == v.c_str() || *end != '\0') {
    throw ParameterError("config: key '" + key + "' is not an unsigned integer: '" + v + "'");
  }
  resolved_[key] = v;
  return x;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) {
  if (!values_.count(key)) {
    consumed_.insert(key);
    resolved_[key] = std::to_string(fallback);
    return fallback;
  }
  return get_uint(key);
}

std::vector<double> Config::get_double_list(const std::string& key, const std::string& fallback) {
  const std::string v = get_string(key, fallback);
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (errno || end == item.c_str()) {
      throw ParameterError("config: key '" + key + "' has a non-numeric item: '" + item + "'");
    }
    out.push_back(x);
  }
  if (out.empty()) throw ParameterError("config: key '" + key + "' must list at least one value");
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key,
                                                 const std::string& fallback) {
  const std::string v = get_string(key, fallback);
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  if (out.empty()) throw ParameterError("config: key '" + key + "' must list at least one item");
  return out;
}

void Config::reject_unknown() const {
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) {
      throw ParameterError("config: unknown key '" + key + "'");
    }
  }
}

std::string Config::manifest() const {
  std::ostringstream out;
  for (const auto& [key, value] : resolved_) out << key << " = " << value << "\n";
  return out.str();
}

}  // namespace hn
