#include "quakebend/toml_min.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "quakebend/errors.hpp"

namespace qb {

namespace {

struct Lexer {
  const char* p;
  const char* end;
  int line = 1;

  explicit Lexer(std::string_view text) : p(text.data()), end(text.data() + text.size()) {}

  bool done() const { return p >= end; }
  char peek() const { return *p; }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "config syntax error at line " << line << ": " << what;
    fail_config(os.str());
  }

  void advance() {
    if (*p == '\n') ++line;
    ++p;
  }

  // whitespace, comments and (optionally) newlines
  void skip(bool newlines) {
    while (!done()) {
      char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '\n' && newlines) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string bare_key() {
    std::string out;
    while (!done() && key_char(peek())) {
      out.push_back(peek());
      advance();
    }
    if (out.empty()) fail("expected a key");
    return out;
  }

  std::vector<std::string> key_path() {
    std::vector<std::string> segs{bare_key()};
    while (!done() && peek() == '.') {
      advance();
      segs.push_back(bare_key());
    }
    return segs;
  }

  void expect(char c, const char* what) {
    if (done() || peek() != c) fail(what);
    advance();
  }

  TomlValue value();
};

TomlValue Lexer::value() {
  skip(false);
  if (done()) fail("expected a value");
  TomlValue v;
  v.line = line;
  char c = peek();
  if (c == '"') {
    advance();
    v.kind = TomlValue::Kind::string;
    while (!done() && peek() != '"') {
      char ch = peek();
      if (ch == '\n') fail("unterminated string");
      if (ch == '\\') {
        advance();
        if (done()) fail("unterminated escape");
        char e = peek();
        if (e == 'n')
          v.str.push_back('\n');
        else if (e == 't')
          v.str.push_back('\t');
        else if (e == '"' || e == '\\')
          v.str.push_back(e);
        else
          fail("unsupported escape sequence");
        advance();
      } else {
        v.str.push_back(ch);
        advance();
      }
    }
    expect('"', "unterminated string");
    return v;
  }
  if (c == '[') {
    advance();
    v.kind = TomlValue::Kind::array;
    skip(true);
    while (!done() && peek() != ']') {
      v.items.push_back(value());
      skip(true);
      if (!done() && peek() == ',') {
        advance();
        skip(true);
      } else {
        break;
      }
    }
    skip(true);
    expect(']', "expected ']' closing an array");
    return v;
  }
  if (std::isalpha(static_cast<unsigned char>(c))) {
    std::string word = bare_key();
    if (word == "true" || word == "false") {
      v.kind = TomlValue::Kind::boolean;
      v.boolean = word == "true";
      return v;
    }
    fail("unrecognized value '" + word + "'");
  }
  // number
  const char* start = p;
  if (peek() == '+' || peek() == '-') advance();
  bool is_int = true;
  while (!done()) {
    char ch = peek();
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      advance();
    } else if (ch == '.' || ch == 'e' || ch == 'E') {
      is_int = false;
      advance();
      if (!done() && (peek() == '+' || peek() == '-') && (ch == 'e' || ch == 'E')) advance();
    } else if (ch == '_') {
      fail("digit separators are not supported");
    } else {
      break;
    }
  }
  if (p == start) fail("expected a value");
  double num = 0.0;
  auto res = std::from_chars(start, p, num);
  if (res.ec != std::errc() || res.ptr != p) fail("malformed number");
  v.kind = TomlValue::Kind::number;
  v.num = num;
  v.is_integer = is_int;
  return v;
}

TomlTable& navigate(TomlTable& root, const std::vector<std::string>& segs, bool as_array,
                    int line, Lexer& lex) {
  TomlTable* cur = &root;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    const std::string& s = segs[i];
    if (cur->values.count(s)) lex.fail("'" + s + "' is a value, not a table");
    auto arr = cur->table_arrays.find(s);
    if (arr != cur->table_arrays.end()) {
      cur = &arr->second.back();
    } else {
      cur = &cur->tables[s];
      if (cur->line == 0) cur->line = line;
    }
  }
  const std::string& last = segs.back();
  if (cur->values.count(last)) lex.fail("'" + last + "' is a value, not a table");
  if (as_array) {
    if (cur->tables.count(last)) lex.fail("'" + last + "' already declared as a table");
    auto& vec = cur->table_arrays[last];
    vec.emplace_back();
    vec.back().line = line;
    return vec.back();
  }
  if (cur->table_arrays.count(last)) lex.fail("'" + last + "' already declared as an array of tables");
  TomlTable& t = cur->tables[last];
  if (t.line == 0) t.line = line;
  return t;
}

}  // namespace

TomlTable toml_parse(std::string_view text) {
  TomlTable root;
  Lexer lex(text);
  TomlTable* current = &root;
  while (true) {
    lex.skip(true);
    if (lex.done()) break;
    if (lex.peek() == '[') {
      int line = lex.line;
      lex.advance();
      bool array = !lex.done() && lex.peek() == '[';
      if (array) lex.advance();
      lex.skip(false);
      std::vector<std::string> path = lex.key_path();
      lex.skip(false);
      lex.expect(']', "expected ']' closing a table header");
      if (array) lex.expect(']', "expected ']]' closing an array-of-tables header");
      current = &navigate(root, path, array, line, lex);
      continue;
    }
    int line = lex.line;
    std::string key = lex.bare_key();
    lex.skip(false);
    lex.expect('=', "expected '=' after key");
    TomlValue v = lex.value();
    v.line = line;
    if (current->values.count(key) || current->tables.count(key) ||
        current->table_arrays.count(key))
      lex.fail("duplicate key '" + key + "'");
    current->values.emplace(key, std::move(v));
    lex.skip(false);
    if (!lex.done() && lex.peek() != '\n' && lex.peek() != '#')
      lex.fail("unexpected trailing characters after value");
  }
  return root;
}

// ---- TableReader ------------------------------------------------------------

const TomlTable TableReader::empty_{};

TableReader::TableReader(const TomlTable& table, std::string path)
    : table_(table), path_(std::move(path)) {}

namespace {
[[noreturn]] void key_fail(const std::string& path, const std::string& key, int line,
                           const std::string& what) {
  std::ostringstream os;
  os << "config error: " << (path.empty() ? key : path + "." + key);
  if (line > 0) os << " (line " << line << ")";
  os << ": " << what;
  fail_config(os.str());
}
}  // namespace

bool TableReader::has(const std::string& key) const { return table_.values.count(key) > 0; }

const TomlValue* TableReader::raw(const std::string& key) {
  auto it = table_.values.find(key);
  if (it == table_.values.end()) return nullptr;
  used_values_[key] = true;
  return &it->second;
}

double TableReader::number(const std::string& key, double fallback) {
  const TomlValue* v = raw(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::number) key_fail(path_, key, v->line, "expected a number");
  return v->num;
}

double TableReader::require_number(const std::string& key) {
  if (!has(key)) key_fail(path_, key, table_.line, "missing required key");
  return number(key, 0.0);
}

long long TableReader::integer(const std::string& key, long long fallback) {
  const TomlValue* v = raw(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::number || !v->is_integer)
    key_fail(path_, key, v->line, "expected an integer");
  return static_cast<long long>(v->num);
}

bool TableReader::boolean(const std::string& key, bool fallback) {
  const TomlValue* v = raw(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::boolean) key_fail(path_, key, v->line, "expected true/false");
  return v->boolean;
}

std::string TableReader::text(const std::string& key, const std::string& fallback) {
  const TomlValue* v = raw(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::string) key_fail(path_, key, v->line, "expected a string");
  return v->str;
}

std::string TableReader::require_text(const std::string& key) {
  if (!has(key)) key_fail(path_, key, table_.line, "missing required key");
  return text(key, {});
}

std::vector<double> TableReader::number_array(const std::string& key,
                                              std::vector<double> fallback) {
  const TomlValue* v = raw(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::array) key_fail(path_, key, v->line, "expected an array");
  std::vector<double> out;
  for (const TomlValue& item : v->items) {
    if (item.kind != TomlValue::Kind::number)
      key_fail(path_, key, item.line, "expected an array of numbers");
    out.push_back(item.num);
  }
  return out;
}

std::vector<std::string> TableReader::text_array(const std::string& key) {
  const TomlValue* v = raw(key);
  if (!v) return {};
  if (v->kind != TomlValue::Kind::array) key_fail(path_, key, v->line, "expected an array");
  std::vector<std::string> out;
  for (const TomlValue& item : v->items) {
    if (item.kind != TomlValue::Kind::string)
      key_fail(path_, key, item.line, "expected an array of strings");
    out.push_back(item.str);
  }
  return out;
}

bool TableReader::has_table(const std::string& key) const { return table_.tables.count(key) > 0; }

TableReader TableReader::subtable(const std::string& key) {
  used_tables_[key] = true;
  auto it = table_.tables.find(key);
  const TomlTable& t = it == table_.tables.end() ? empty_ : it->second;
  return TableReader(t, path_.empty() ? key : path_ + "." + key);
}

std::vector<TableReader> TableReader::table_array(const std::string& key) {
  used_arrays_[key] = true;
  std::vector<TableReader> out;
  auto it = table_.table_arrays.find(key);
  if (it == table_.table_arrays.end()) return out;
  int i = 0;
  for (const TomlTable& t : it->second) {
    std::ostringstream os;
    os << (path_.empty() ? key : path_ + "." + key) << "[" << i++ << "]";
    out.emplace_back(t, os.str());
  }
  return out;
}

void TableReader::finish() {
  for (const auto& [key, value] : table_.values)
    if (!used_values_.count(key)) key_fail(path_, key, value.line, "unknown key");
  for (const auto& [key, t] : table_.tables)
    if (!used_tables_.count(key)) key_fail(path_, key, t.line, "unknown table");
  for (const auto& [key, arr] : table_.table_arrays)
    if (!used_arrays_.count(key))
      key_fail(path_, key, arr.empty() ? 0 : arr.front().line, "unknown array of tables");
}

}  // namespace qb
