#pragma once

// JSON-like metadata values with insertion-ordered objects, their canonical
// JSON rendering, and the small literal language used in `var`/`note`
// directive arguments.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cycpp/error.hpp"

namespace cycpp {

class MetaValue;

using MetaArray = std::vector<MetaValue>;

/// Object with unique string keys kept in insertion order.
class MetaObject {
 public:
  using Member = std::pair<std::string, MetaValue>;

  MetaObject() = default;
  MetaObject(std::initializer_list<Member> members);

  bool contains(std::string_view key) const;
  const MetaValue* find(std::string_view key) const;
  MetaValue* find(std::string_view key);
  const MetaValue& at(std::string_view key) const;

  /// Replaces in place if the key exists, otherwise appends.
  void set(std::string key, MetaValue value);
  bool erase(std::string_view key);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  const std::vector<Member>& members() const { return members_; }

  friend bool operator==(const MetaObject& a, const MetaObject& b);

 private:
  std::vector<Member> members_;
};

class MetaValue {
 public:
  using Storage =
      std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, MetaArray, MetaObject>;

  MetaValue() : v_(nullptr) {}
  MetaValue(std::nullptr_t) : v_(nullptr) {}
  MetaValue(bool b) : v_(b) {}
  MetaValue(int i) : v_(static_cast<std::int64_t>(i)) {}
  MetaValue(std::int64_t i) : v_(i) {}
  MetaValue(double d) : v_(d) {}
  MetaValue(const char* s) : v_(std::string(s)) {}
  MetaValue(std::string s) : v_(std::move(s)) {}
  MetaValue(MetaArray a) : v_(std::move(a)) {}
  MetaValue(MetaObject o) : v_(std::move(o)) {}

  bool is_null() const { return std::holds_alternative<std::nullptr_t>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_float() const { return std::holds_alternative<double>(v_); }
  bool is_number() const { return is_int() || is_float(); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_array() const { return std::holds_alternative<MetaArray>(v_); }
  bool is_object() const { return std::holds_alternative<MetaObject>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_float() const { return std::get<double>(v_); }
  /// Int or float widened to double.
  double as_number() const { return is_int() ? static_cast<double>(as_int()) : as_float(); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  const MetaArray& as_array() const { return std::get<MetaArray>(v_); }
  MetaArray& as_array() { return std::get<MetaArray>(v_); }
  const MetaObject& as_object() const { return std::get<MetaObject>(v_); }
  MetaObject& as_object() { return std::get<MetaObject>(v_); }

  const Storage& storage() const { return v_; }

  /// Short name of the held alternative: null, bool, int, float, string, list, dict.
  std::string_view type_name() const;

  friend bool operator==(const MetaValue& a, const MetaValue& b) { return a.v_ == b.v_; }

 private:
  Storage v_;
};

/// Compact canonical JSON. Floats print like Python's repr (`4e14` renders
/// as `400000000000000.0`, `1e16` as `1e+16`).
std::string render_json(const MetaValue& value);

/// JSON string literal for `s`, quotes included.
std::string json_quote(std::string_view s);

/// Shortest round-trip text of `d` in Python repr style.
std::string format_float_repr(double d);

using MetaEnv = std::map<std::string, MetaValue, std::less<>>;

/// Evaluates a Python-literal expression: quoted strings, ints, floats,
/// True/False/None (and true/false/null), lists, tuples, dicts, names from
/// `env`, and `+`, `-`, `*` on compatible operands.
/// Errors: SyntaxError, UnknownName.
MetaValue parse_literal(std::string_view text, const MetaEnv& env = {});

/// As parse_literal, but the result must be a dict. Errors add NotAnObject.
MetaValue parse_annotation_literal(std::string_view text, const MetaEnv& env = {});

}  // namespace cycpp
