#include "subred/config.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subred {

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
           text[j] != '#')
      ++j;
    const std::string_view token = text.substr(i, j - i);
    const auto eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw std::invalid_argument("config: expected key=value, got '" + std::string(token) + "'");
    kv.values_[std::string(token.substr(0, eq))] = std::string(token.substr(eq + 1));
    i = j;
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValues::string_at(const std::string& key) const {
  auto v = get(key);
  if (!v) throw std::invalid_argument("config: missing key '" + key + "'");
  return *v;
}

double KeyValues::real_at(const std::string& key) const {
  const std::string s = string_at(key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw std::invalid_argument("config: key '" + key + "' is not a number: " + s);
  return v;
}

std::int64_t KeyValues::integer_at(const std::string& key) const {
  const std::string s = string_at(key);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("config: key '" + key + "' is not an integer: " + s);
  return v;
}

double KeyValues::real_or(const std::string& key, double fallback) const {
  return has(key) ? real_at(key) : fallback;
}

std::int64_t KeyValues::integer_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer_at(key) : fallback;
}

}  // namespace subred

namespace subred {

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

}  // namespace subred
