#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "roo/form.hpp"

namespace roo {

struct Value;
struct ValueEntry;

struct ValueSeq { std::vector<Value> items; };
struct ValueMap { std::vector<ValueEntry> entries; };

/// Compile-time data value: literals in the core AST and the option maps
/// handed to the reference validator.
struct Value {
  using Data = std::variant<std::monostate, bool, std::int64_t, double, std::string, Keyword, ValueSeq, ValueMap>;
  Data data;

  Value() = default;
  Value(bool b) : data(b) {}
  Value(std::int64_t i) : data(i) {}
  Value(int i) : data(std::int64_t{i}) {}
  Value(double d) : data(d) {}
  Value(std::string s) : data(std::move(s)) {}
  Value(const char* s) : data(std::string(s)) {}
  Value(Keyword k) : data(std::move(k)) {}
  Value(ValueSeq s) : data(std::move(s)) {}
  Value(ValueMap m) : data(std::move(m)) {}

  bool is_nil() const { return std::holds_alternative<std::monostate>(data); }
  template <class T>
  const T* get_if() const { return std::get_if<T>(&data); }

  /// Nil and false are falsy; everything else is truthy.
  bool truthy() const {
    if (is_nil()) return false;
    if (auto* b = get_if<bool>()) return *b;
    return true;
  }

  /// Map lookup by keyword; nil for non-maps and absent keys.
  const Value* find(const Keyword& key) const;
};

struct ValueEntry {
  Value key;
  Value value;
};

inline bool operator==(const Value& a, const Value& b);
inline bool operator==(const ValueSeq& a, const ValueSeq& b) { return a.items == b.items; }
inline bool operator==(const ValueEntry& a, const ValueEntry& b) { return a.key == b.key && a.value == b.value; }
inline bool operator==(const ValueMap& a, const ValueMap& b) { return a.entries == b.entries; }
inline bool operator==(const Value& a, const Value& b) { return a.data == b.data; }

inline const Value* Value::find(const Keyword& key) const {
  auto* map = get_if<ValueMap>();
  if (map == nullptr) return nullptr;
  for (const auto& e : map->entries) {
    auto* k = e.key.get_if<Keyword>();
    if (k != nullptr && *k == key) return &e.value;
  }
  return nullptr;
}

/// Builds a map value from keyword/value pairs, preserving order.
inline Value make_map(std::initializer_list<std::pair<Keyword, Value>> entries) {
  ValueMap map;
  for (const auto& [k, v] : entries) map.entries.push_back(ValueEntry{Value(k), v});
  return Value(std::move(map));
}

}  // namespace roo
