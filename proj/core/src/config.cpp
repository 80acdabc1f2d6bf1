#include "jetseg/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jetseg/errors.hpp"

namespace jetseg {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text, const std::string& key) {
  text = trim(text);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError("config key '" + key + "' is not a finite number: '" +
                      std::string(text) + "'");
  }
  return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_[std::string(key)] = std::string(value);
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.contains(key); }

void KeyValueConfig::set(const std::string& key, std::string value) {
  entries_[key] = std::move(value);
}

std::optional<std::string> KeyValueConfig::find(const std::string& key) const {
  if (auto it = entries_.find(key); it != entries_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  auto value = find(key);
  if (!value) {
    throw ConfigError("missing config key '" + key + "'");
  }
  return *value;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  return find(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key) const {
  return parse_real(get_string(key), key);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto value = find(key);
  return value ? parse_real(*value, key) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key) const {
  const auto text = get_string(key);
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("config key '" + key + "' is not an integer: '" + text + "'");
  }
  return value;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto value = find(key);
  if (!value) {
    return fallback;
  }
  if (*value == "true" || *value == "1" || *value == "yes" || *value == "on") {
    return true;
  }
  if (*value == "false" || *value == "0" || *value == "no" || *value == "off") {
    return false;
  }
  throw ConfigError("config key '" + key + "' is not a boolean: '" + *value + "'");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  const auto text = get_string(key);
  std::vector<double> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_real(rest.substr(0, comma), key));
    if (comma == std::string_view::npos) {
      break;
    }
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::string KeyValueConfig::to_string() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace jetseg
