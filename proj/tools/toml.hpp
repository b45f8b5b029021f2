#pragma once

// Reader for the TOML subset used by run configs: [tables], dotted keys,
// strings, numbers (inf/nan included), booleans, flat arrays, comments.
// Inline tables, dates and arrays of tables are rejected.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dampo::toml {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Value {
  enum class Kind { Number, Bool, String, Array };
  Kind kind = Kind::Number;
  double number = 0.0;
  bool boolean = false;
  std::string string;
  std::vector<Value> array;

  std::string describe() const;  // TOML spelling, used to echo configs
};

// Flattened: "model.parametric.Gamma" -> value. Keys keep file order in `order`.
struct Document {
  std::map<std::string, Value> values;
  std::vector<std::string> order;

  void set(const std::string& key, Value v);
  const Value* find(const std::string& key) const;
};

Document parse(const std::string& text, const std::string& source = "<config>");
Document parse_file(const std::string& path);

// Right-hand side of `--set key=value`. Anything that is not valid TOML is taken as a bare string.
Value parse_value(const std::string& text);

}  // namespace dampo::toml
