#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace objcheck {

/// A runtime value: an integer, a string, or the single opaque value bound
/// to data received from an external participant.
class Value {
 public:
  struct Unknown {
    friend bool operator==(Unknown, Unknown) { return true; }
  };

  Value() = default;
  static Value integer(std::int64_t v) { return Value(Rep{v}); }
  static Value string(std::string v) { return Value(Rep{std::move(v)}); }
  static Value unknown() { return Value(); }

  bool is_unknown() const { return std::holds_alternative<Unknown>(rep_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(rep_); }
  bool is_string() const { return std::holds_alternative<std::string>(rep_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(rep_); }
  const std::string& as_string() const { return std::get<std::string>(rep_); }

  std::size_t hash() const;
  /// Source-like rendering: `0`, `"1.0"`, `?`.
  std::string to_string() const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  using Rep = std::variant<Unknown, std::int64_t, std::string>;
  explicit Value(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// Payload compatibility used when matching observable actions: equal
/// values, or either side Unknown.
inline bool compatible(const Value& a, const Value& b) {
  return a.is_unknown() || b.is_unknown() || a == b;
}

}  // namespace objcheck
