// Copyright 2026 The sir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sir/common/toml.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace sir::toml {

namespace {

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, Document& doc) : s_(text), doc_(doc) {}

  void run() {
    Json* table = &doc_.root;
    std::string table_ptr;
    for (;;) {
      skip_ws_comments_newlines();
      if (eof()) break;
      if (peek() == '[') {
        const bool array = peek(1) == '[';
        pos_ += array ? 2 : 1;
        skip_inline_ws();
        const auto keys = parse_key_path();
        skip_inline_ws();
        expect(']');
        if (array) expect(']');
        end_of_line();
        std::tie(table, table_ptr) = open_table(keys, array);
        continue;
      }
      parse_key_value(*table, table_ptr);
      end_of_line();
    }
  }

 private:
  std::string_view s_;
  Document& doc_;
  std::size_t pos_ = 0;
  int line_ = 1;
  // Tables created by headers (may not be redefined) and implicit ones.
  std::map<std::string, bool> defined_tables_;

  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t off = 0) const { return pos_ + off < s_.size() ? s_[pos_ + off] : '\0'; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError(fmt::format("{}:{}: {}", doc_.source, line_, msg));
  }

  void expect(char c) {
    if (peek() != c) fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }

  void skip_ws_comments_newlines() {
    for (;;) {
      skip_inline_ws();
      skip_comment();
      if (peek() == '\r' && peek(1) == '\n') ++pos_;
      if (peek() == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      break;
    }
  }

  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    ++pos_;
    ++line_;
  }

  static bool bare_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

  std::string parse_simple_key() {
    if (peek() == '"') return parse_basic_string();
    if (peek() == '\'') return parse_literal_string();
    const std::size_t start = pos_;
    while (!eof() && bare_char(peek())) ++pos_;
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> keys{parse_simple_key()};
    for (;;) {
      skip_inline_ws();
      if (peek() != '.') break;
      ++pos_;
      skip_inline_ws();
      keys.push_back(parse_simple_key());
    }
    return keys;
  }

  std::pair<Json*, std::string> open_table(const std::vector<std::string>& keys, bool array) {
    Json* cur = &doc_.root;
    std::string ptr;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const bool last = i + 1 == keys.size();
      ptr += "/" + escape_pointer(keys[i]);
      if (!cur->contains(keys[i])) {
        if (last && array) {
          (*cur)[keys[i]] = Json::array();
        } else {
          (*cur)[keys[i]] = Json::object();
        }
        doc_.lines.emplace(ptr, line_);
      }
      Json* next = &(*cur)[keys[i]];
      if (last && array) {
        if (!next->is_array() || (!next->empty() && !next->back().is_object()))
          fail(fmt::format("'{}' is not an array of tables", keys[i]));
        next->push_back(Json::object());
        ptr += "/" + std::to_string(next->size() - 1);
        doc_.lines[ptr] = line_;
        return {&next->back(), ptr};
      }
      if (next->is_array()) {
        if (next->empty() || !next->back().is_object()) fail(fmt::format("'{}' is not a table", keys[i]));
        ptr += "/" + std::to_string(next->size() - 1);
        next = &next->back();
      } else if (!next->is_object()) {
        fail(fmt::format("'{}' is already a value", keys[i]));
      }
      if (last) {
        auto [it, fresh] = defined_tables_.emplace(ptr, true);
        if (!fresh && it->second) fail(fmt::format("table '{}' defined twice", keys[i]));
        it->second = true;
        doc_.lines[ptr] = line_;
      } else {
        defined_tables_.emplace(ptr, false);
      }
      cur = next;
    }
    return {cur, ptr};
  }

  void parse_key_value(Json& table, const std::string& table_ptr) {
    const int key_line = line_;
    const auto keys = parse_key_path();
    skip_inline_ws();
    expect('=');
    skip_inline_ws();
    Json* cur = &table;
    std::string ptr = table_ptr;
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
      ptr += "/" + escape_pointer(keys[i]);
      if (!cur->contains(keys[i])) {
        (*cur)[keys[i]] = Json::object();
        doc_.lines.emplace(ptr, key_line);
      }
      cur = &(*cur)[keys[i]];
      if (!cur->is_object()) fail(fmt::format("'{}' is already a value", keys[i]));
    }
    ptr += "/" + escape_pointer(keys.back());
    if (cur->contains(keys.back())) fail(fmt::format("duplicate key '{}'", keys.back()));
    (*cur)[keys.back()] = parse_value(ptr);
    doc_.lines[ptr] = key_line;
  }

  Json parse_value(const std::string& ptr) {
    const char c = peek();
    if (c == '"') {
      if (peek(1) == '"' && peek(2) == '"') fail("multi-line strings are not supported");
      return parse_basic_string();
    }
    if (c == '\'') {
      if (peek(1) == '\'' && peek(2) == '\'') fail("multi-line strings are not supported");
      return parse_literal_string();
    }
    if (c == '[') return parse_array(ptr);
    if (c == '{') return parse_inline_table(ptr);
    if (s_.substr(pos_, 4) == "true" && !bare_char(peek(4))) {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false" && !bare_char(peek(5))) {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  Json parse_number() {
    const std::size_t start = pos_;
    while (!eof()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' || c == '_' || c == ':') {
        ++pos_;
      } else {
        break;
      }
    }
    std::string tok(s_.substr(start, pos_ - start));
    if (tok.empty()) fail("expected a value");
    std::string body = tok;
    double sign = 1.0;
    if (body[0] == '+' || body[0] == '-') {
      if (body[0] == '-') sign = -1.0;
      body = body.substr(1);
    }
    if (body == "inf") return sign * std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (tok.find(':') != std::string::npos || (tok.size() >= 10 && tok[4] == '-' && tok[7] == '-'))
      fail(fmt::format("dates and times are not supported: '{}'", tok));
    std::string clean;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] == '_') {
        const bool ok = i > 0 && i + 1 < tok.size() && std::isalnum(static_cast<unsigned char>(tok[i - 1])) &&
                        std::isalnum(static_cast<unsigned char>(tok[i + 1]));
        if (!ok) fail(fmt::format("misplaced underscore in '{}'", tok));
        continue;
      }
      clean += tok[i];
    }
    const bool is_hex = body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'o' || body[1] == 'b');
    const bool is_float =
        !is_hex && clean.find_first_of(".eE") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_hex) {
        if (tok[0] == '+' || tok[0] == '-') fail("signed non-decimal integers are not allowed");
        const int base = body[1] == 'x' ? 16 : body[1] == 'o' ? 8 : 2;
        const std::string digits = clean.substr(2);
        const long long v = std::stoll(digits, &used, base);
        if (used != digits.size()) throw std::invalid_argument(tok);
        return v;
      }
      if (is_float) {
        const double v = std::stod(clean, &used);
        if (used != clean.size()) throw std::invalid_argument(tok);
        return v;
      }
      const std::string digits = clean[0] == '+' ? clean.substr(1) : clean;
      const long long v = std::stoll(digits, &used, 10);
      if (used != digits.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::out_of_range&) {
      fail(fmt::format("number out of range: '{}'", tok));
    } catch (const std::invalid_argument&) {
      fail(fmt::format("invalid value '{}'", tok));
    }
  }

  std::string parse_basic_string() {
    expect('"');
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = s_[pos_++];
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
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'u':
        case 'U': {
          const std::size_t n = e == 'u' ? 4 : 8;
          if (pos_ + n > s_.size()) fail("truncated unicode escape");
          const unsigned long cp = std::stoul(std::string(s_.substr(pos_, n)), nullptr, 16);
          pos_ += n;
          append_utf8(out, cp);
          break;
        }
        default: fail(fmt::format("invalid escape '\\{}'", e));
      }
    }
    return out;
  }

  static void append_utf8(std::string& out, unsigned long cp) {
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
    std::string out(s_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  Json parse_array(const std::string& ptr) {
    expect('[');
    Json arr = Json::array();
    for (;;) {
      skip_ws_comments_newlines();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      const int elem_line = line_;
      const std::string elem_ptr = ptr + "/" + std::to_string(arr.size());
      arr.push_back(parse_value(elem_ptr));
      doc_.lines.emplace(elem_ptr, elem_line);
      skip_ws_comments_newlines();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      skip_ws_comments_newlines();
      if (peek() != ']') fail("expected ',' or ']' in array");
    }
  }

  Json parse_inline_table(const std::string& ptr) {
    expect('{');
    Json obj = Json::object();
    skip_inline_ws();
    if (peek() == '}') {
      ++pos_;
      return obj;
    }
    for (;;) {
      skip_inline_ws();
      parse_key_value(obj, ptr);
      skip_inline_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return obj;
    }
  }
};

bool needs_quotes(const std::string& key) {
  if (key.empty()) return true;
  for (char c : key)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return true;
  return false;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\u{:04X}", static_cast<unsigned>(c));
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string key_text(const std::string& key) { return needs_quotes(key) ? quote(key) : key; }

std::string scalar_text(const Json& v) {
  if (v.is_string()) return quote(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return fmt::format("{}", v.get<long long>());
  if (v.is_number_unsigned()) return fmt::format("{}", v.get<unsigned long long>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    std::string t = fmt::format("{}", d);
    if (t.find_first_of(".eE") == std::string::npos) t += ".0";
    return t;
  }
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ", ";
      out += scalar_text(v[i]);
    }
    return out + "]";
  }
  if (v.is_object()) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, x] : v.items()) {
      out += first ? " " : ", ";
      first = false;
      out += key_text(k) + " = " + scalar_text(x);
    }
    return out + (first ? "}" : " }");
  }
  throw InvalidArgument("toml::dump: null values cannot be written");
}

bool is_table_array(const Json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& e : v)
    if (!e.is_object()) return false;
  return true;
}

void dump_table(std::string& out, const Json& obj, const std::string& path) {
  for (const auto& [k, v] : obj.items())
    if (!v.is_object() && !is_table_array(v)) out += key_text(k) + " = " + scalar_text(v) + "\n";
  for (const auto& [k, v] : obj.items()) {
    const std::string sub = path.empty() ? key_text(k) : path + "." + key_text(k);
    if (v.is_object()) {
      out += "\n[" + sub + "]\n";
      dump_table(out, v, sub);
    }
  }
  for (const auto& [k, v] : obj.items()) {
    const std::string sub = path.empty() ? key_text(k) : path + "." + key_text(k);
    if (is_table_array(v))
      for (const auto& e : v) {
        out += "\n[[" + sub + "]]\n";
        dump_table(out, e, sub);
      }
  }
}

}  // namespace

int Document::line_of(const std::string& pointer) const {
  std::string p = pointer;
  for (;;) {
    if (auto it = lines.find(p); it != lines.end()) return it->second;
    const auto cut = p.rfind('/');
    if (cut == std::string::npos || p.empty()) return 0;
    p.resize(cut);
  }
}

std::string Document::where(const std::string& pointer, const std::string& message) const {
  return fmt::format("{}:{}: {}", source, line_of(pointer), message);
}

Document parse(std::string_view text, const std::string& source) {
  Document doc;
  doc.source = source;
  Parser(text, doc).run();
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("{}: cannot open file", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string dump(const Json& root) {
  require(root.is_object(), "toml::dump: root must be an object");
  std::string out;
  dump_table(out, root, "");
  if (!out.empty() && out.front() == '\n') out.erase(0, 1);
  return out;
}

}  // namespace sir::toml
