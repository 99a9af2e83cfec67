#include "sdllg/toml_lite.hpp"

#include "sdllg/types.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace sdllg {

namespace {

using json = nlohmann::json;

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* current = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        const bool array = peek(1) == '[';
        pos_ += array ? 2 : 1;
        skip_ws();
        const auto path = parse_key_path();
        skip_ws();
        expect(']');
        if (array) expect(']');
        current = array ? &open_array_table(root, path) : &open_table(root, path);
        end_of_line();
        continue;
      }
      parse_key_value(*current);
      end_of_line();
    }
    return root;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::set<std::string> defined_tables_;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "config line " << line_ << ": " << what;
    throw ConfigError(os.str());
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t off = 0) const { return pos_ + off < s_.size() ? s_[pos_ + off] : '\0'; }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }

  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      break;
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void skip_ws_nl() { skip_blank_lines(); }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    ++pos_;
    ++line_;
  }

  std::string parse_simple_key() {
    if (peek() == '"') return parse_basic_string();
    if (peek() == '\'') return parse_literal_string();
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    if (pos_ == start) fail("expected a key");
    return s_.substr(start, pos_ - start);
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> path{parse_simple_key()};
    skip_ws();
    while (peek() == '.') {
      ++pos_;
      skip_ws();
      path.push_back(parse_simple_key());
      skip_ws();
    }
    return path;
  }

  static std::string joined(const std::vector<std::string>& path) {
    std::string out;
    for (const auto& p : path) out += (out.empty() ? "" : ".") + p;
    return out;
  }

  // Walks to the table at `path`, descending into the last element of
  // arrays of tables on the way.
  json& walk(json& root, const std::vector<std::string>& path, std::size_t count) {
    json* node = &root;
    for (std::size_t i = 0; i < count; ++i) {
      json& child = (*node)[path[i]];
      if (child.is_null()) child = json::object();
      if (child.is_array()) {
        if (child.empty() || !child.back().is_object()) fail("key '" + path[i] + "' is not a table");
        node = &child.back();
      } else if (child.is_object()) {
        node = &child;
      } else {
        fail("key '" + path[i] + "' is not a table");
      }
    }
    return *node;
  }

  json& open_table(json& root, const std::vector<std::string>& path) {
    if (!defined_tables_.insert(joined(path)).second) fail("table [" + joined(path) + "] defined twice");
    json& parent = walk(root, path, path.size() - 1);
    json& t = parent[path.back()];
    if (t.is_null()) t = json::object();
    if (!t.is_object()) fail("[" + joined(path) + "] redefines a value");
    return t;
  }

  json& open_array_table(json& root, const std::vector<std::string>& path) {
    json& parent = walk(root, path, path.size() - 1);
    json& arr = parent[path.back()];
    if (arr.is_null()) arr = json::array();
    if (!arr.is_array()) fail("[[" + joined(path) + "]] redefines a value");
    arr.push_back(json::object());
    // Sub-tables of the previous element may be redefined for the new one.
    const std::string prefix = joined(path) + ".";
    for (auto it = defined_tables_.begin(); it != defined_tables_.end();)
      it = it->rfind(prefix, 0) == 0 ? defined_tables_.erase(it) : std::next(it);
    return arr.back();
  }

  void parse_key_value(json& table) {
    const auto path = parse_key_path();
    skip_ws();
    expect('=');
    skip_ws();
    json value = parse_value();
    json* node = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      json& child = (*node)[path[i]];
      if (child.is_null()) child = json::object();
      if (!child.is_object()) fail("dotted key '" + joined(path) + "' crosses a value");
      node = &child;
    }
    if (node->contains(path.back())) fail("duplicate key '" + joined(path) + "'");
    (*node)[path.back()] = std::move(value);
  }

  json parse_value() {
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  std::string parse_basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      const char e = s_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'u': append_utf8(out, parse_hex(4)); break;
        case 'U': append_utf8(out, parse_hex(8)); break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
    return out;
  }

  char32_t parse_hex(int digits) {
    if (pos_ + digits > s_.size()) fail("truncated unicode escape");
    char32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      const char h = s_[pos_++];
      if (!std::isxdigit(static_cast<unsigned char>(h))) fail("bad unicode escape");
      cp = cp * 16 + static_cast<char32_t>(std::isdigit(static_cast<unsigned char>(h)) ? h - '0' : std::tolower(h) - 'a' + 10);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("unicode escape is not a scalar value");
    return cp;
  }

  static void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string parse_literal_string() {
    expect('\'');
    const std::size_t start = pos_;
    while (!eof() && peek() != '\'' && peek() != '\n') ++pos_;
    if (peek() != '\'') fail("unterminated string");
    std::string out = s_.substr(start, pos_ - start);
    ++pos_;
    return out;
  }

  json parse_number() {
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                      peek() == '.' || peek() == '_'))
      ++pos_;
    std::string tok;
    for (std::size_t i = start; i < pos_; ++i)
      if (s_[i] != '_') tok += s_[i];
    if (tok.empty()) fail("expected a value");
    std::string body = tok;
    double sign = 1.0;
    if (body[0] == '+' || body[0] == '-') {
      sign = body[0] == '-' ? -1.0 : 1.0;
      body = body.substr(1);
    }
    if (body == "inf") return sign * std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = tok.find_first_of(".eE") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_float) {
        const double v = std::stod(tok, &used);
        if (used != tok.size()) fail("malformed number '" + tok + "'");
        return v;
      }
      const long long v = std::stoll(tok, &used, 10);
      if (used != tok.size()) fail("malformed number '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("malformed value '" + tok + "'");
    }
  }

  json parse_array() {
    expect('[');
    json arr = json::array();
    skip_ws_nl();
    while (peek() != ']') {
      arr.push_back(parse_value());
      skip_ws_nl();
      if (peek() == ',') {
        ++pos_;
        skip_ws_nl();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    ++pos_;
    return arr;
  }

  json parse_inline_table() {
    expect('{');
    json t = json::object();
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return t;
    }
    while (true) {
      parse_key_value(t);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        skip_ws();
        continue;
      }
      expect('}');
      return t;
    }
  }
};

}  // namespace

nlohmann::json parse_toml(const std::string& text) { return Parser(text).parse(); }

nlohmann::json parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_toml(ss.str());
}

}  // namespace sdllg
