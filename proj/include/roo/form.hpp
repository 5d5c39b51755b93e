#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "roo/span.hpp"

namespace roo {

/// `:name` or `:ns/name`. An empty namespace means "none".
struct Keyword {
  std::string ns;
  std::string name;

  Keyword() = default;
  Keyword(std::string n) : name(std::move(n)) {}
  Keyword(std::string space, std::string n) : ns(std::move(space)), name(std::move(n)) {}

  std::string qualified() const { return ns.empty() ? name : ns + '/' + name; }
  std::string str() const { return ':' + qualified(); }

  friend bool operator==(const Keyword&, const Keyword&) = default;
  friend auto operator<=>(const Keyword&, const Keyword&) = default;
};

struct Form;
struct MapEntry;

struct Symbol { std::string name; };
struct Str { std::string value; };
struct Int { std::int64_t value = 0; };
struct Dbl { double value = 0.0; };
struct Bool { bool value = false; };
struct Nil {};
struct ListF { std::vector<Form> items; };
struct VecF { std::vector<Form> items; };
struct MapF { std::vector<MapEntry> pairs; };

using FormData = std::variant<Symbol, Keyword, Str, Int, Dbl, Bool, Nil, ListF, VecF, MapF>;

/// A parsed s-expression node. Equality is structural and ignores spans.
struct Form {
  FormData data;
  SourceSpan span;

  template <class T>
  bool is() const { return std::holds_alternative<T>(data); }
  template <class T>
  const T& as() const { return std::get<T>(data); }
  template <class T>
  const T* get_if() const { return std::get_if<T>(&data); }

  bool is_symbol(std::string_view name) const {
    auto* s = get_if<Symbol>();
    return s != nullptr && s->name == name;
  }
};

struct MapEntry {
  Form key;
  Form value;
};

inline bool operator==(const Form& a, const Form& b);

inline bool operator==(const Symbol& a, const Symbol& b) { return a.name == b.name; }
inline bool operator==(const Str& a, const Str& b) { return a.value == b.value; }
inline bool operator==(const Int& a, const Int& b) { return a.value == b.value; }
inline bool operator==(const Dbl& a, const Dbl& b) { return a.value == b.value; }
inline bool operator==(const Bool& a, const Bool& b) { return a.value == b.value; }
inline bool operator==(const Nil&, const Nil&) { return true; }
inline bool operator==(const ListF& a, const ListF& b) { return a.items == b.items; }
inline bool operator==(const VecF& a, const VecF& b) { return a.items == b.items; }
inline bool operator==(const MapEntry& a, const MapEntry& b) { return a.key == b.key && a.value == b.value; }
inline bool operator==(const MapF& a, const MapF& b) { return a.pairs == b.pairs; }

inline bool operator==(const Form& a, const Form& b) { return a.data == b.data; }

inline Form make_form(FormData data, SourceSpan span = {}) { return Form{std::move(data), std::move(span)}; }

}  // namespace roo
