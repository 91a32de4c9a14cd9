#include "qrl/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qrl {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool parse_number(const std::string& text, ConfigValue& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  if (t.find_first_of(".eE") == std::string::npos) {
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (end && *end == '\0') {
      out = static_cast<std::int64_t>(v);
      return true;
    }
    return false;
  }
  const double d = std::strtod(t.c_str(), &end);
  if (end && *end == '\0') {
    out = d;
    return true;
  }
  return false;
}

ConfigValue parse_scalar(const std::string& raw, const std::string& context) {
  const std::string t = trim(raw);
  if (t.empty()) throw ConfigError("empty value for " + context);
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"')
      throw ConfigError("unterminated string for " + context);
    return t.substr(1, t.size() - 2);
  }
  if (t == "true") return true;
  if (t == "false") return false;
  ConfigValue num;
  if (parse_number(t, num)) return num;
  throw ConfigError("cannot parse value '" + t + "' for " + context);
}

ConfigValue parse_value(const std::string& raw, const std::string& context) {
  const std::string t = trim(raw);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw ConfigError("unterminated array for " + context);
    const std::string inner = t.substr(1, t.size() - 2);
    std::vector<std::string> items;
    std::string cur;
    bool in_string = false;
    for (char ch : inner) {
      if (ch == '"') in_string = !in_string;
      if (ch == ',' && !in_string) {
        items.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!trim(cur).empty()) items.push_back(cur);

    std::vector<double> nums;
    std::vector<std::string> strs;
    bool numeric = true;
    for (const std::string& item : items) {
      const ConfigValue v = parse_scalar(item, context);
      if (std::holds_alternative<std::string>(v)) {
        numeric = false;
        strs.push_back(std::get<std::string>(v));
      } else if (std::holds_alternative<double>(v)) {
        nums.push_back(std::get<double>(v));
      } else if (std::holds_alternative<std::int64_t>(v)) {
        nums.push_back(static_cast<double>(std::get<std::int64_t>(v)));
      } else {
        throw ConfigError("unsupported array element for " + context);
      }
    }
    if (!numeric && !nums.empty())
      throw ConfigError("mixed array types for " + context);
    if (numeric) return nums;
    return strs;
  }
  return parse_scalar(t, context);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("empty section name at line " + std::to_string(lineno));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("empty key at line " + std::to_string(lineno));
    const std::string full = section.empty() ? key : section + "." + key;
    cfg.values_[full] = parse_value(line.substr(eq + 1), full);
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str());
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

void Config::set(const std::string& key, ConfigValue value) {
  values_[key] = std::move(value);
}

void Config::apply_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like section.key=value: " + assignment);
  const std::string key = trim(assignment.substr(0, eq));
  values_[key] = parse_value(assignment.substr(eq + 1), key);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const bool* b = std::get_if<bool>(&it->second)) return *b;
  throw ConfigError(key + " must be a boolean");
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const std::int64_t* v = std::get_if<std::int64_t>(&it->second)) return *v;
  if (const double* d = std::get_if<double>(&it->second)) {
    if (*d == static_cast<std::int64_t>(*d)) return static_cast<std::int64_t>(*d);
  }
  throw ConfigError(key + " must be an integer");
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const double* d = std::get_if<double>(&it->second)) return *d;
  if (const std::int64_t* v = std::get_if<std::int64_t>(&it->second))
    return static_cast<double>(*v);
  throw ConfigError(key + " must be a number");
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
  throw ConfigError(key + " must be a string");
}

std::vector<double> Config::get_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
  // A single number counts as a one-element list.
  if (const double* d = std::get_if<double>(&it->second)) return {*d};
  if (const std::int64_t* i = std::get_if<std::int64_t>(&it->second))
    return {static_cast<double>(*i)};
  throw ConfigError(key + " must be a numeric array");
}

std::vector<std::string> Config::get_string_list(
    const std::string& key, const std::vector<std::string>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* v = std::get_if<std::vector<std::string>>(&it->second)) return *v;
  if (const std::string* s = std::get_if<std::string>(&it->second)) return {*s};
  throw ConfigError(key + " must be a string array");
}

std::string Config::canonical_dump() const {
  std::ostringstream os;
  for (const auto& [key, value] : values_) {
    os << key << " = ";
    std::visit(
        [&os](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>) {
            os << (v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, std::int64_t>) {
            os << v;
          } else if constexpr (std::is_same_v<T, double>) {
            os << format_double(v);
          } else if constexpr (std::is_same_v<T, std::string>) {
            os << '"' << v << '"';
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            os << '[';
            for (std::size_t i = 0; i < v.size(); ++i)
              os << (i ? ", " : "") << format_double(v[i]);
            os << ']';
          } else {
            os << '[';
            for (std::size_t i = 0; i < v.size(); ++i)
              os << (i ? ", " : "") << '"' << v[i] << '"';
            os << ']';
          }
        },
        value);
    os << "\n";
  }
  return os.str();
}

std::uint64_t Config::hash() const {
  // FNV-1a over the canonical dump.
  const std::string dump = canonical_dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace qrl
