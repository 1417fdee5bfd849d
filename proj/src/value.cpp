#include "objcheck/value.hpp"

#include <functional>

namespace objcheck {

std::size_t Value::hash() const {
  if (is_int()) return std::hash<std::int64_t>{}(as_int()) * 3 + 1;
  if (is_string()) return std::hash<std::string>{}(as_string()) * 3 + 2;
  return 0;
}

std::string Value::to_string() const {
  if (is_int()) return std::to_string(as_int());
  if (is_string()) return "\"" + as_string() + "\"";
  return "?";
}

}  // namespace objcheck
