#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "common.hpp"

namespace anisym {

namespace {

[[noreturn]] void fail_at(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "config error at line " << line << ": " << what;
  throw ValidationError(msg.str());
}

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

// Splits "a.b.c" into parts; empty parts are rejected by the caller.
std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string format_number(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void escape_string(const std::string& s, std::ostringstream& out) {
  out << '"';
  for (char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\t': out << "\\t"; break;
      case '\r': out << "\\r"; break;
      default: out << c;
    }
  }
  out << '"';
}

void canonicalize(const ConfigValue& value, std::ostringstream& out) {
  const auto& storage = value.storage();
  if (const auto* num = std::get_if<double>(&storage)) {
    out << format_number(*num);
  } else if (const auto* flag = std::get_if<bool>(&storage)) {
    out << (*flag ? "true" : "false");
  } else if (const auto* str = std::get_if<std::string>(&storage)) {
    escape_string(*str, out);
  } else if (const auto* arr = std::get_if<ConfigValue::Array>(&storage)) {
    out << '[';
    for (std::size_t i = 0; i < arr->size(); ++i) {
      if (i) out << ',';
      canonicalize((*arr)[i], out);
    }
    out << ']';
  } else if (const auto* tab = std::get_if<ConfigValue::Table>(&storage)) {
    out << '{';
    bool first = true;
    for (const auto& [key, sub] : *tab) {  // std::map: sorted keys
      if (!first) out << ',';
      first = false;
      out << key << '=';
      canonicalize(sub, out);
    }
    out << '}';
  }
}

// Parses a single value starting at text[pos] on the given (comment-free)
// line; pos is advanced past the value.
class ValueParser {
 public:
  ValueParser(const std::string& text, int line) : text_(text), line_(line) {}

  ConfigValue parse_all() {
    ConfigValue v = parse_value();
    skip_ws();
    if (pos_ != text_.size()) fail_at(line_, "unexpected trailing content");
    return v;
  }

  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }

  ConfigValue parse_value() {
    skip_ws();
    if (pos_ >= text_.size()) fail_at(line_, "expected a value");
    const char c = text_[pos_];
    if (c == '"') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (match_word("true")) return ConfigValue(ConfigValue::Storage(true));
    if (match_word("false")) return ConfigValue(ConfigValue::Storage(false));
    return parse_number();
  }

 private:
  const std::string& text_;
  int line_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool match_word(const char* word) {
    const std::size_t len = std::string(word).size();
    if (text_.compare(pos_, len, word) != 0) return false;
    const std::size_t after = pos_ + len;
    if (after < text_.size() && is_key_char(text_[after])) return false;
    pos_ = after;
    return true;
  }

  ConfigValue parse_string() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == '"') return ConfigValue(ConfigValue::Storage(out));
      if (c == '\\') {
        if (pos_ >= text_.size()) break;
        const char esc = text_[pos_++];
        switch (esc) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          default:
            fail_at(line_, std::string("invalid escape '\\") + esc + "'");
        }
      } else {
        out.push_back(c);
      }
    }
    fail_at(line_, "unterminated string");
  }

  ConfigValue parse_array() {
    ++pos_;  // '['
    ConfigValue::Array items;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return ConfigValue(ConfigValue::Storage(items));
    }
    for (;;) {
      items.push_back(parse_value());
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return ConfigValue(ConfigValue::Storage(items));
      }
      fail_at(line_, "unterminated array (arrays are single-line)");
    }
  }

  ConfigValue parse_inline_table() {
    ++pos_;  // '{'
    ConfigValue::Table table;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '}') {
      ++pos_;
      return ConfigValue(ConfigValue::Storage(table));
    }
    for (;;) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_key_char(text_[pos_])) ++pos_;
      if (pos_ == start) fail_at(line_, "expected a key in inline table");
      const std::string key = text_.substr(start, pos_ - start);
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '=') {
        fail_at(line_, "expected '=' in inline table");
      }
      ++pos_;
      table[key] = parse_value();
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (pos_ < text_.size() && text_[pos_] == '}') {
        ++pos_;
        return ConfigValue(ConfigValue::Storage(table));
      }
      fail_at(line_, "unterminated inline table");
    }
  }

  ConfigValue parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail_at(line_, "expected a value");
    pos_ += static_cast<std::size_t>(end - begin);
    return ConfigValue(ConfigValue::Storage(v));
  }
};

// Removes a '#' comment outside of quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

void check_key_path(const std::string& path, int line) {
  if (path.empty()) fail_at(line, "empty key");
  for (const auto& part : split_path(path)) {
    if (part.empty()) fail_at(line, "empty key component in '" + path + "'");
    for (char c : part) {
      if (!is_key_char(c)) {
        fail_at(line, "invalid key character '" + std::string(1, c) + "'");
      }
    }
  }
}

}  // namespace

const ConfigValue* ConfigValue::find(const std::string& path) const {
  const ConfigValue* cur = this;
  for (const auto& part : split_path(path)) {
    const auto* table = std::get_if<Table>(&cur->v_);
    if (!table) return nullptr;
    const auto it = table->find(part);
    if (it == table->end()) return nullptr;
    cur = &it->second;
  }
  return cur;
}

double ConfigValue::get_number(const std::string& path) const {
  const ConfigValue* v = find(path);
  if (!v) throw ValidationError("missing config key '" + path + "'");
  if (!v->is_number()) {
    throw ValidationError("config key '" + path + "' is not a number");
  }
  return std::get<double>(v->v_);
}

double ConfigValue::get_number(const std::string& path, double fallback) const {
  return find(path) ? get_number(path) : fallback;
}

bool ConfigValue::get_bool(const std::string& path, bool fallback) const {
  const ConfigValue* v = find(path);
  if (!v) return fallback;
  if (!v->is_bool()) {
    throw ValidationError("config key '" + path + "' is not a boolean");
  }
  return std::get<bool>(v->v_);
}

std::string ConfigValue::get_string(const std::string& path) const {
  const ConfigValue* v = find(path);
  if (!v) throw ValidationError("missing config key '" + path + "'");
  if (!v->is_string()) {
    throw ValidationError("config key '" + path + "' is not a string");
  }
  return std::get<std::string>(v->v_);
}

std::string ConfigValue::get_string(const std::string& path,
                                    const std::string& fallback) const {
  return find(path) ? get_string(path) : fallback;
}

std::vector<double> ConfigValue::get_number_list(const std::string& path) const {
  const ConfigValue* v = find(path);
  if (!v) throw ValidationError("missing config key '" + path + "'");
  const auto* arr = std::get_if<Array>(&v->v_);
  if (!arr) {
    throw ValidationError("config key '" + path + "' is not an array");
  }
  std::vector<double> out;
  for (const auto& item : *arr) {
    if (!item.is_number()) {
      throw ValidationError("config key '" + path +
                            "' has a non-numeric element");
    }
    out.push_back(std::get<double>(item.storage()));
  }
  return out;
}

std::vector<std::string> ConfigValue::get_string_list(
    const std::string& path) const {
  const ConfigValue* v = find(path);
  if (!v) throw ValidationError("missing config key '" + path + "'");
  const auto* arr = std::get_if<Array>(&v->v_);
  if (!arr) {
    throw ValidationError("config key '" + path + "' is not an array");
  }
  std::vector<std::string> out;
  for (const auto& item : *arr) {
    if (!item.is_string()) {
      throw ValidationError("config key '" + path +
                            "' has a non-string element");
    }
    out.push_back(std::get<std::string>(item.storage()));
  }
  return out;
}

void ConfigValue::set(const std::string& path, ConfigValue value) {
  ConfigValue* cur = this;
  const auto parts = split_path(path);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    auto* table = std::get_if<Table>(&cur->v_);
    if (!table) {
      throw ValidationError("config path '" + path +
                            "' crosses a non-table value");
    }
    cur = &(*table)[parts[i]];  // default-constructs an empty table
    if (!cur->is_table()) {
      throw ValidationError("config path '" + path +
                            "' crosses a non-table value");
    }
  }
  auto* table = std::get_if<Table>(&cur->v_);
  if (!table) {
    throw ValidationError("config path '" + path +
                          "' crosses a non-table value");
  }
  (*table)[parts.back()] = std::move(value);
}

std::string ConfigValue::canonical() const {
  std::ostringstream out;
  canonicalize(*this, out);
  return out.str();
}

ConfigValue parse_config(const std::string& text) {
  ConfigValue root;
  std::string section;  // current [section] prefix ("" at top level)

  std::istringstream lines(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        fail_at(line_no, "unterminated section header");
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      check_key_path(name, line_no);
      section = name;
      // materialise the section table so empty sections still appear
      if (!root.find(section)) root.set(section, ConfigValue());
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail_at(line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    check_key_path(key, line_no);
    const std::string rest = line.substr(eq + 1);
    ValueParser parser(rest, line_no);
    const ConfigValue value = parser.parse_all();
    const std::string full = section.empty() ? key : section + "." + key;
    root.set(full, value);
  }
  return root;
}

ConfigValue load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) {
    throw ValidationError("cannot open config file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_hash(const ConfigValue& cfg) {
  const std::uint64_t h = fnv1a64(cfg.canonical());
  std::ostringstream out;
  out << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4) {
    out << ((h >> shift) & 0xf);
  }
  return out.str();
}

}  // namespace anisym
