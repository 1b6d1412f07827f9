#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace subred {

/// Plain-text `key=value` settings. Pairs are separated by whitespace or
/// newlines; `#` starts a comment that runs to the end of the line.
class KeyValues {
 public:
  static KeyValues parse(std::string_view text);
  static KeyValues load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;

  std::string string_at(const std::string& key) const;
  double real_at(const std::string& key) const;
  std::int64_t integer_at(const std::string& key) const;

  double real_or(const std::string& key, double fallback) const;
  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace subred

namespace subred {

/// Shortest decimal string that round-trips to the same double.
std::string format_real(double x);

}  // namespace subred
