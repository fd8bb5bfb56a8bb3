#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qb {

// Small TOML reader covering the configuration subset used here: comments,
// bare keys, [tables], [[arrays of tables]], and values that are strings,
// numbers, booleans, or (possibly nested) arrays.  Dotted keys, inline
// tables, dates, and multi-line strings are not accepted.
struct TomlValue {
  enum class Kind { string, number, boolean, array };
  Kind kind = Kind::number;
  std::string str;
  double num = 0.0;
  bool is_integer = false;
  bool boolean = false;
  std::vector<TomlValue> items;  // array
  int line = 0;
};

struct TomlTable {
  std::map<std::string, TomlValue> values;
  std::map<std::string, TomlTable> tables;
  std::map<std::string, std::vector<TomlTable>> table_arrays;
  int line = 0;
};

// Throws Error(kind=config) with a line-numbered message on malformed input.
TomlTable toml_parse(std::string_view text);

// Schema-walking helper that records which keys were consumed, so unused
// (unknown) keys can be rejected with their source line.
class TableReader {
 public:
  TableReader(const TomlTable& table, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback);
  double require_number(const std::string& key);
  long long integer(const std::string& key, long long fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::string require_text(const std::string& key);
  std::vector<double> number_array(const std::string& key, std::vector<double> fallback);
  std::vector<std::string> text_array(const std::string& key);  // absent -> empty
  const TomlValue* raw(const std::string& key);  // consumes; nullptr if absent

  const std::string& path() const { return path_; }
  int line() const { return table_.line; }

  bool has_table(const std::string& key) const;
  TableReader subtable(const std::string& key);              // empty if absent
  std::vector<TableReader> table_array(const std::string& key);

  // Fails on any key, subtable, or table array never consumed.
  void finish();

 private:
  const TomlTable& table_;
  std::string path_;
  std::map<std::string, bool> used_values_, used_tables_, used_arrays_;
  static const TomlTable empty_;
};

}  // namespace qb
