#ifndef ANISYM_CONFIG_HPP
#define ANISYM_CONFIG_HPP

// Minimal TOML-subset config reader.
//
// Supported syntax:  [section] and [a.b] headers, key = value pairs with
// dotted keys, strings with the usual escapes, numbers (decimal, exponent,
// inf/-inf), booleans, single-line arrays [v1, v2, ...], and inline tables
// {k1 = v1, k2 = v2}.  Comments start with '#'.  This covers the documented
// experiment grammar; anything outside it is rejected with a line-numbered
// ValidationError.
//
// Values canonicalise (sorted keys, normalised number formatting) for the
// deterministic config hash recorded in every report.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace anisym {

class ConfigValue {
public:
  using Array = std::vector<ConfigValue>;
  using Table = std::map<std::string, ConfigValue>;
  using Storage = std::variant<double, bool, std::string, Array, Table>;

  ConfigValue() : v_(Table{}) {}
  explicit ConfigValue(Storage v) : v_(std::move(v)) {}

  bool is_table() const { return std::holds_alternative<Table>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }
  bool is_number() const { return std::holds_alternative<double>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }

  Storage& storage() { return v_; }
  const Storage& storage() const { return v_; }

  // Path lookup "a.b.c"; null when absent.
  const ConfigValue* find(const std::string& path) const;
  bool has(const std::string& path) const { return find(path) != nullptr; }

  // Typed getters; throw ValidationError naming the path when the key is
  // missing (no default) or has the wrong type.
  double get_number(const std::string& path) const;
  double get_number(const std::string& path, double fallback) const;
  bool get_bool(const std::string& path, bool fallback) const;
  std::string get_string(const std::string& path) const;
  std::string get_string(const std::string& path,
                         const std::string& fallback) const;
  std::vector<double> get_number_list(const std::string& path) const;
  std::vector<std::string> get_string_list(const std::string& path) const;

  // Create-or-fetch a nested table / set a value at a dotted path.
  void set(const std::string& path, ConfigValue value);

  // Canonical serialisation (stable across key order and number spelling).
  std::string canonical() const;

private:
  Storage v_;
};

// Parse config text / file.  Throws ValidationError with 1-based line info.
ConfigValue parse_config(const std::string& text);
ConfigValue load_config_file(const std::string& path);

// FNV-1a of the canonical form, as fixed-width hex.
std::string config_hash(const ConfigValue& cfg);

}  // namespace anisym

#endif  // ANISYM_CONFIG_HPP
