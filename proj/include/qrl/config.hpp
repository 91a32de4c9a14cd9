#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qrl {

// Raised on malformed files, unknown keys, or bad values; the CLI maps it to
// exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ConfigValue = std::variant<bool, std::int64_t, double, std::string,
                                 std::vector<double>, std::vector<std::string>>;

// Flat key/value store with dotted keys filled from [table] sections.
// Supported value forms: strings, integers, floats, booleans, arrays of
// numbers or strings, and # comments.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, ConfigValue value);
  // "section.key=value" command-line override.
  void apply_override(const std::string& assignment);

  bool get_bool(const std::string& key, bool fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<std::string> get_string_list(
      const std::string& key, const std::vector<std::string>& fallback) const;

  // Sorted, normalized dump; reordering fields in the source never changes
  // it, any semantic change does.
  std::string canonical_dump() const;
  std::uint64_t hash() const;

  const std::map<std::string, ConfigValue>& values() const { return values_; }

 private:
  std::map<std::string, ConfigValue> values_;
};

}  // namespace qrl
