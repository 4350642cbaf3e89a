#pragma once

// Plain key = value configuration files. `[section]` headers prefix the keys
// that follow with "section.", `#` starts a comment.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fcdg {

class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  /// Throws ConfigError if the file cannot be read.
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma or whitespace separated list.
  std::vector<int> get_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  const std::string& origin() const { return origin_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

}  // namespace fcdg
