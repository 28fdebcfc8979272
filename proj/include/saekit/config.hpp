#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "saekit/errors.hpp"
#include "saekit/io.hpp"

namespace saekit {

// Run configuration: a flat "key = value" document, one pair per line,
// '#' starts a comment. CLI flags override config keys; the effective
// (resolved) document is written beside every command's outputs.
class RunConfig {
 public:
  static RunConfig from_file(const std::string& path) {
    RunConfig cfg;
    const std::string text = read_text_file(path);
    size_t line_no = 0, start = 0;
    while (start <= text.size()) {
      size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      ++line_no;
      std::string line = text.substr(start, end - start);
      start = end + 1;
      const size_t hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) {
        if (end == text.size()) break;
        continue;
      }
      const size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
      if (cfg.values_.count(key))
        throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate key " + key);
      cfg.values_[key] = value;
      if (end == text.size()) break;
    }
    return cfg;
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key) const {
    try {
      size_t pos = 0;
      const double v = std::stod(get(key), &pos);
      if (pos != get(key).size()) throw std::invalid_argument("trailing chars");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + " is not a number: " + get(key));
    }
  }

  uint64_t get_u64(const std::string& key) const {
    try {
      size_t pos = 0;
      const unsigned long long v = std::stoull(get(key), &pos);
      if (pos != get(key).size()) throw std::invalid_argument("trailing chars");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + " is not an integer: " + get(key));
    }
  }

  // Unknown keys are rejected so typos cannot silently change a run.
  void require_known(const std::set<std::string>& known) const {
    for (const auto& [k, v] : values_)
      if (!known.count(k)) throw ConfigError("unknown config key: " + k);
  }

  void write_resolved(const std::string& path) const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    write_text_file(path, out);
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
  }

  std::map<std::string, std::string> values_;
};

}  // namespace saekit
