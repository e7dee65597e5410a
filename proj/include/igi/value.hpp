#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace igi {

enum class SemType : std::uint8_t { Integer, IntArray, Boolean, String };

inline constexpr std::size_t kNumSemTypes = 4;

inline constexpr std::size_t type_index(SemType t) { return static_cast<std::size_t>(t); }

inline constexpr std::string_view type_name(SemType t) {
  switch (t) {
    case SemType::Integer:
      return "Integer";
    case SemType::IntArray:
      return "IntArray";
    case SemType::Boolean:
      return "Boolean";
    case SemType::String:
      return "String";
  }
  return "?";
}

inline std::optional<SemType> parse_type_name(std::string_view s) {
  if (s == "Integer") return SemType::Integer;
  if (s == "IntArray") return SemType::IntArray;
  if (s == "Boolean") return SemType::Boolean;
  if (s == "String") return SemType::String;
  return std::nullopt;
}

using IntArray = std::vector<std::int64_t>;

struct Null {
  bool operator==(const Null&) const = default;
};

// Runtime value of a DSL expression. Null is produced by partial DSL-LM
// functions and by integer overflow; it never matches an expected output.
class Value {
 public:
  using Storage = std::variant<Null, std::int64_t, IntArray, bool, std::string>;

  Value() = default;
  Value(std::int64_t v) : data_(v) {}
  Value(IntArray v) : data_(std::move(v)) {}
  Value(bool v) : data_(v) {}
  Value(std::string v) : data_(std::move(v)) {}
  Value(const char* v) : data_(std::string(v)) {}
  Value(Null) {}

  static Value null() { return Value(); }

  bool is_null() const { return std::holds_alternative<Null>(data_); }

  std::optional<SemType> type() const {
    switch (data_.index()) {
      case 1:
        return SemType::Integer;
      case 2:
        return SemType::IntArray;
      case 3:
        return SemType::Boolean;
      case 4:
        return SemType::String;
      default:
        return std::nullopt;
    }
  }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  const IntArray& as_array() const { return std::get<IntArray>(data_); }
  bool as_bool() const { return std::get<bool>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }

  const Storage& storage() const { return data_; }

  bool operator==(const Value&) const = default;

 private:
  Storage data_;
};

inline std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string to_string(const Value& v) {
  if (v.is_null()) return "NULL";
  switch (*v.type()) {
    case SemType::Integer:
      return std::to_string(v.as_int());
    case SemType::Boolean:
      return v.as_bool() ? "true" : "false";
    case SemType::String:
      return quote_string(v.as_string());
    case SemType::IntArray: {
      std::string out = "[";
      const auto& a = v.as_array();
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(a[i]);
      }
      return out + "]";
    }
  }
  return "?";
}

}  // namespace igi
