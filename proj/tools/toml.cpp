#include "toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dampo/io.hpp"

namespace dampo::toml {

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;
  const std::string& source;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  char get() {
    const char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
  }
  void skip_blank() {
    while (!done() && (peek() == ' ' || peek() == '\t')) get();
  }
  // blanks, newlines and comments (inside arrays)
  void skip_space() {
    for (;;) {
      skip_blank();
      if (peek() == '#') {
        while (!done() && peek() != '\n') get();
      } else if (peek() == '\n' || peek() == '\r') {
        get();
      } else {
        return;
      }
    }
  }
  void end_of_line() {
    skip_blank();
    if (peek() == '#')
      while (!done() && peek() != '\n') get();
    if (peek() == '\r') get();
    if (!done() && peek() != '\n') fail(std::string("unexpected '") + peek() + "'");
    if (!done()) get();
  }
};

bool bare_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

std::string parse_string(Cursor& c) {
  const char quote = c.get();
  std::string out;
  for (;;) {
    if (c.done() || c.peek() == '\n') c.fail("unterminated string");
    const char ch = c.get();
    if (ch == quote) return out;
    if (ch == '\\' && quote == '"') {
      if (c.done()) c.fail("unterminated string");
      const char e = c.get();
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: c.fail(std::string("unsupported escape \\") + e);
      }
    } else {
      out += ch;
    }
  }
}

std::string parse_key_part(Cursor& c) {
  c.skip_blank();
  if (c.peek() == '"' || c.peek() == '\'') return parse_string(c);
  std::string out;
  while (!c.done() && bare_char(c.peek())) out += c.get();
  if (out.empty()) c.fail("expected a key");
  return out;
}

std::string parse_key(Cursor& c) {
  std::string key = parse_key_part(c);
  for (;;) {
    c.skip_blank();
    if (c.peek() != '.') return key;
    c.get();
    key += "." + parse_key_part(c);
  }
}

Value parse_scalar_token(Cursor& c) {
  std::string tok;
  while (!c.done()) {
    const char ch = c.peek();
    if (ch == ',' || ch == ']' || ch == '#' || ch == '\n' || ch == '\r' || ch == ' ' || ch == '\t') break;
    tok += c.get();
  }
  if (tok.empty()) c.fail("expected a value");
  Value v;
  if (tok == "true" || tok == "false") {
    v.kind = Value::Kind::Bool;
    v.boolean = tok == "true";
    return v;
  }
  std::string num;
  for (char ch : tok)
    if (ch != '_') num += ch;
  std::string_view body = num;
  double sign = 1.0;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    sign = body.front() == '-' ? -1.0 : 1.0;
    body.remove_prefix(1);
  }
  if (body == "inf") {
    v.number = sign * std::numeric_limits<double>::infinity();
    return v;
  }
  if (body == "nan") {
    v.number = std::numeric_limits<double>::quiet_NaN();
    return v;
  }
  double x = 0.0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), x);
  if (res.ec != std::errc() || res.ptr != body.data() + body.size() || body.empty())
    c.fail("invalid value '" + tok + "'");
  v.number = sign * x;
  return v;
}

Value parse_value(Cursor& c, bool in_array) {
  c.skip_blank();
  Value v;
  if (c.peek() == '"' || c.peek() == '\'') {
    v.kind = Value::Kind::String;
    v.string = parse_string(c);
    return v;
  }
  if (c.peek() == '[') {
    if (in_array) c.fail("nested arrays are not supported");
    c.get();
    v.kind = Value::Kind::Array;
    for (;;) {
      c.skip_space();
      if (c.peek() == ']') {
        c.get();
        return v;
      }
      v.array.push_back(parse_value(c, true));
      c.skip_space();
      if (c.peek() == ',') {
        c.get();
      } else if (c.peek() != ']') {
        c.fail("expected ',' or ']' in array");
      }
    }
  }
  if (c.peek() == '{') c.fail("inline tables are not supported");
  return parse_scalar_token(c);
}

}  // namespace

std::string Value::describe() const {
  switch (kind) {
    case Kind::Bool: return boolean ? "true" : "false";
    case Kind::String: return "\"" + string + "\"";
    case Kind::Number:
      if (std::isinf(number)) return number > 0 ? "inf" : "-inf";
      if (std::isnan(number)) return "nan";
      return io::format_double(number);
    case Kind::Array: {
      std::string out = "[";
      for (std::size_t i = 0; i < array.size(); ++i) out += (i ? ", " : "") + array[i].describe();
      return out + "]";
    }
  }
  return {};
}

void Document::set(const std::string& key, Value v) {
  if (values.find(key) == values.end()) order.push_back(key);
  values[key] = std::move(v);
}

const Value* Document::find(const std::string& key) const {
  const auto it = values.find(key);
  return it == values.end() ? nullptr : &it->second;
}

Document parse(const std::string& text, const std::string& source) {
  Document doc;
  Cursor c{text, 0, 1, source};
  std::string table;
  while (!c.done()) {
    c.skip_blank();
    const char ch = c.peek();
    if (ch == '#' || ch == '\n' || ch == '\r') {
      c.end_of_line();
      continue;
    }
    if (ch == '[') {
      c.get();
      if (c.peek() == '[') c.fail("arrays of tables are not supported");
      table = parse_key(c);
      c.skip_blank();
      if (c.peek() != ']') c.fail("expected ']'");
      c.get();
      c.end_of_line();
      continue;
    }
    const std::string key = parse_key(c);
    c.skip_blank();
    if (c.peek() != '=') c.fail("expected '=' after '" + key + "'");
    c.get();
    const std::string full = table.empty() ? key : table + "." + key;
    if (doc.find(full)) c.fail("duplicate key '" + full + "'");
    doc.set(full, parse_value(c, false));
    c.end_of_line();
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

Value parse_value(const std::string& text) {
  try {
    Cursor c{text, 0, 1, text};
    Value v = parse_value(c, false);
    c.end_of_line();
    return v;
  } catch (const ParseError&) {
    Value v;
    v.kind = Value::Kind::String;
    v.string = text;
    return v;
  }
}

}  // namespace dampo::toml
