#pragma once

// Type-hint registry: native argument types keyed by (class, member, hint),
// callback signatures, and the string validators used for runtime checks.
//
// Schema file shape:
//   {:schemas    {[:Class :member :hint] {:args [tag...] :returns tag :spec [[:opt :validator]...]}}
//    :callbacks  {:ns/name {:args [:double-array :double-array] :returns :double}}
//    :validators {:ns/name [:string {:min n :max m}]}}
// A class that is not a valid keyword (e.g. "std::string") is written as a string.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roo/error.hpp"
#include "roo/form.hpp"
#include "roo/reader.hpp"
#include "roo/value.hpp"

namespace roo {

struct TypeTag {
  enum class Kind : std::uint8_t { Double, Int, Bool, String, Void, Callback };

  Kind kind = Kind::Void;
  Keyword callback;  // signature name, only for Kind::Callback

  static TypeTag of(Kind k) { return TypeTag{k, {}}; }
  static TypeTag callback_of(Keyword sig) { return TypeTag{Kind::Callback, std::move(sig)}; }

  bool is_callback() const { return kind == Kind::Callback; }

  std::string str() const {
    switch (kind) {
      case Kind::Double: return ":double";
      case Kind::Int: return ":int";
      case Kind::Bool: return ":bool";
      case Kind::String: return ":string";
      case Kind::Void: return ":void";
      case Kind::Callback: return callback.str();
    }
    return ":?";
  }

  friend bool operator==(const TypeTag&, const TypeTag&) = default;
};

struct ClassName {
  std::string value;
  friend auto operator<=>(const ClassName&, const ClassName&) = default;
};

struct SchemaKey {
  ClassName cls;
  std::string member;  // "new" names the constructor
  Keyword hint;

  bool is_constructor() const { return member == "new"; }
  friend auto operator<=>(const SchemaKey&, const SchemaKey&) = default;
};

/// `[:string {:min n :max m}]`; both bounds optional.
struct ValidatorDef {
  Keyword base{"string"};
  std::optional<std::int64_t> min;
  std::optional<std::int64_t> max;
  friend bool operator==(const ValidatorDef&, const ValidatorDef&) = default;
};

/// One named option of a runtime-checked call, aligned with an argument.
struct OptionSpec {
  Keyword option;
  Keyword validator;
  ValidatorDef def;  // resolved at registration so schemas are self-contained
  friend bool operator==(const OptionSpec&, const OptionSpec&) = default;
};

struct MethodSchema {
  std::vector<TypeTag> args;
  TypeTag returns = TypeTag::of(TypeTag::Kind::Void);
  std::optional<std::vector<OptionSpec>> runtime_spec;
  friend bool operator==(const MethodSchema&, const MethodSchema&) = default;
};

/// v1 fixes every callback to double(double*, double*).
struct CallbackSig {
  Keyword name;
  std::size_t array_args = 2;
  TypeTag returns = TypeTag::of(TypeTag::Kind::Double);
  friend bool operator==(const CallbackSig&, const CallbackSig&) = default;
};

/// Immutable once built; `register_inline` returns an extended copy.
struct Registry {
  std::map<SchemaKey, MethodSchema> schemas;
  std::map<Keyword, CallbackSig> callbacks;
  std::map<Keyword, ValidatorDef> validators;
  friend bool operator==(const Registry&, const Registry&) = default;
};

namespace detail {

[[noreturn]] inline void malformed(const Form& at, const std::string& what) {
  throw Error(ErrorCode::MalformedSchemaFile, what, at.span);
}

inline const Keyword& expect_keyword(const Form& f, std::string_view what) {
  auto* k = f.get_if<Keyword>();
  if (k == nullptr) malformed(f, std::string(what) + " must be a keyword, got " + print_form(f));
  return *k;
}

inline const MapF& expect_map(const Form& f, std::string_view what) {
  auto* m = f.get_if<MapF>();
  if (m == nullptr) malformed(f, std::string(what) + " must be a map, got " + print_form(f));
  return *m;
}

inline const VecF& expect_vec(const Form& f, std::string_view what) {
  auto* v = f.get_if<VecF>();
  if (v == nullptr) malformed(f, std::string(what) + " must be a vector, got " + print_form(f));
  return *v;
}

/// Checks that every key of `map` is a plain keyword from `allowed` and
/// appears once; returns the entries keyed by name.
inline std::map<std::string, const Form*> keyword_fields(const MapF& map,
                                                         std::initializer_list<std::string_view> allowed,
                                                         std::string_view what) {
  std::map<std::string, const Form*> fields;
  for (const auto& [k, v] : map.pairs) {
    const Keyword& key = expect_keyword(k, std::string(what) + " key");
    bool known = key.ns.empty() && std::find(allowed.begin(), allowed.end(), key.name) != allowed.end();
    if (!known) malformed(k, "unknown key " + key.str() + " in " + std::string(what));
    if (!fields.emplace(key.name, &v).second) malformed(k, "duplicate key " + key.str() + " in " + std::string(what));
  }
  return fields;
}

inline TypeTag parse_type_tag(const Form& f, const Registry& reg, bool allow_void) {
  const Keyword& k = expect_keyword(f, "type tag");
  using K = TypeTag::Kind;
  if (k.ns.empty()) {
    if (k.name == "double") return TypeTag::of(K::Double);
    if (k.name == "int") return TypeTag::of(K::Int);
    if (k.name == "bool") return TypeTag::of(K::Bool);
    if (k.name == "string") return TypeTag::of(K::String);
    if (k.name == "void" && allow_void) return TypeTag::of(K::Void);
    throw Error(ErrorCode::UnknownTypeTag, "unknown type tag " + k.str(), f.span);
  }
  if (!reg.callbacks.contains(k))
    throw Error(ErrorCode::DanglingCallbackRef, "callback signature " + k.str() + " is not declared", f.span);
  return TypeTag::callback_of(k);
}

inline SchemaKey parse_schema_key(const Form& f) {
  const VecF& v = expect_vec(f, "schema key");
  if (v.items.size() != 3) malformed(f, "schema key must be [class member hint], got " + print_form(f));
  SchemaKey key;
  const Form& cls = v.items[0];
  if (auto* k = cls.get_if<Keyword>()) {
    if (!k->ns.empty()) malformed(cls, "class keyword must not be namespaced: " + k->str());
    key.cls.value = k->name;
  } else if (auto* s = cls.get_if<Str>()) {
    if (s->value.empty() || s->value.find_first_of(" \t\n\r\f\v") != std::string::npos)
      malformed(cls, "class name must be non-empty without whitespace");
    key.cls.value = s->value;
  } else {
    malformed(cls, "class must be a keyword or a string, got " + print_form(cls));
  }
  const Keyword& member = expect_keyword(v.items[1], "member");
  if (!member.ns.empty()) malformed(v.items[1], "member keyword must not be namespaced: " + member.str());
  key.member = member.name;
  key.hint = expect_keyword(v.items[2], "hint");
  return key;
}

inline std::vector<TypeTag> parse_args(const Form& f, const Registry& reg) {
  const VecF& v = expect_vec(f, ":args");
  std::vector<TypeTag> args;
  args.reserve(v.items.size());
  for (const auto& item : v.items) args.push_back(parse_type_tag(item, reg, false));
  return args;
}

inline std::vector<OptionSpec> parse_runtime_spec(const Form& f, const std::vector<TypeTag>& args,
                                                  const Registry& reg) {
  const VecF& v = expect_vec(f, "runtime spec");
  std::vector<OptionSpec> spec;
  std::set<Keyword> seen;
  for (const auto& entry : v.items) {
    const VecF& pair = expect_vec(entry, "runtime spec entry");
    if (pair.items.size() != 2) malformed(entry, "runtime spec entry must be [:option :validator]");
    const Keyword& option = expect_keyword(pair.items[0], "option name");
    const Keyword& validator = expect_keyword(pair.items[1], "validator name");
    if (!seen.insert(option).second) malformed(pair.items[0], "duplicate option " + option.str());
    auto it = reg.validators.find(validator);
    if (it == reg.validators.end())
      throw Error(ErrorCode::DanglingValidatorRef, "validator " + validator.str() + " is not declared",
                  pair.items[1].span);
    spec.push_back(OptionSpec{option, validator, it->second});
  }
  if (spec.size() != args.size()) {
    throw Error(ErrorCode::SpecArityMismatch,
                "runtime spec names " + std::to_string(spec.size()) + " options but the schema has " +
                    std::to_string(args.size()) + " arguments",
                f.span);
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].is_callback())
      malformed(v.items[i], "callback argument " + std::to_string(i) + " cannot be runtime-validated");
  }
  return spec;
}

inline void check_return(const SchemaKey& key, const TypeTag& returns, const Form& at) {
  using K = TypeTag::Kind;
  if (key.is_constructor()) return;
  if (returns.kind == K::Void || returns.kind == K::Double || returns.kind == K::Int || returns.kind == K::Bool) return;
  throw Error(ErrorCode::IllegalReturnType,
              key.cls.value + "/" + key.member + " may only return a primitive type, not " + returns.str(), at.span);
}

inline MethodSchema parse_method(const SchemaKey& key, const Form& f, const Registry& reg) {
  auto fields = keyword_fields(expect_map(f, "schema"), {"args", "returns", "spec"}, "schema");
  auto args_it = fields.find("args");
  if (args_it == fields.end()) malformed(f, "schema requires :args");
  MethodSchema schema;
  schema.args = parse_args(*args_it->second, reg);
  if (auto it = fields.find("returns"); it != fields.end()) {
    schema.returns = parse_type_tag(*it->second, reg, true);
    check_return(key, schema.returns, *it->second);
  }
  if (auto it = fields.find("spec"); it != fields.end())
    schema.runtime_spec = parse_runtime_spec(*it->second, schema.args, reg);
  return schema;
}

inline ValidatorDef parse_validator(const Form& f) {
  const VecF& v = expect_vec(f, "validator");
  if (v.items.empty() || v.items.size() > 2) malformed(f, "validator must be [:string] or [:string {...}]");
  ValidatorDef def;
  def.base = expect_keyword(v.items[0], "validator base");
  if (def.base != Keyword{"string"})
    throw Error(ErrorCode::UnknownTypeTag, "unsupported validator base " + def.base.str(), v.items[0].span);
  if (v.items.size() == 2) {
    auto fields = keyword_fields(expect_map(v.items[1], "validator constraints"), {"min", "max"},
                                 "validator constraints");
    for (const auto& [name, form] : fields) {
      auto* i = form->get_if<Int>();
      if (i == nullptr || i->value < 0) malformed(*form, ":" + name + " must be a non-negative integer");
      (name == "min" ? def.min : def.max) = i->value;
    }
    if (def.min && def.max && *def.min > *def.max) malformed(v.items[1], ":min exceeds :max");
  }
  return def;
}

inline CallbackSig parse_callback(const Keyword& name, const Form& f) {
  auto fields = keyword_fields(expect_map(f, "callback signature"), {"args", "returns"}, "callback signature");
  auto args = fields.find("args");
  auto ret = fields.find("returns");
  if (args == fields.end() || ret == fields.end()) malformed(f, "callback signature requires :args and :returns");
  const VecF& v = expect_vec(*args->second, ":args");
  bool ok = v.items.size() == 2;
  for (const auto& item : v.items) ok = ok && item.get_if<Keyword>() && *item.get_if<Keyword>() == Keyword{"double-array"};
  if (!ok) malformed(*args->second, "callback :args must be [:double-array :double-array]");
  auto* r = ret->second->get_if<Keyword>();
  if (r == nullptr || *r != Keyword{"double"}) malformed(*ret->second, "callback :returns must be :double");
  return CallbackSig{name, 2, TypeTag::of(TypeTag::Kind::Double)};
}

}  // namespace detail

/// Builds a registry from a parsed schema file. Validators and callbacks are
/// loaded before schemas so that references resolve regardless of key order.
inline Registry load_registry(const Form& root) {
  using namespace detail;
  auto top = keyword_fields(expect_map(root, "schema file"), {"schemas", "callbacks", "validators"},
                            "schema file");
  Registry reg;
  if (auto it = top.find("validators"); it != top.end()) {
    for (const auto& [k, v] : expect_map(*it->second, ":validators").pairs) {
      const Keyword& name = expect_keyword(k, "validator name");
      if (!reg.validators.emplace(name, parse_validator(v)).second) malformed(k, "duplicate validator " + name.str());
    }
  }
  if (auto it = top.find("callbacks"); it != top.end()) {
    for (const auto& [k, v] : expect_map(*it->second, ":callbacks").pairs) {
      const Keyword& name = expect_keyword(k, "callback name");
      if (name.ns.empty()) malformed(k, "callback names must be namespaced, got " + name.str());
      if (!reg.callbacks.emplace(name, parse_callback(name, v)).second) malformed(k, "duplicate callback " + name.str());
    }
  }
  if (auto it = top.find("schemas"); it != top.end()) {
    for (const auto& [k, v] : expect_map(*it->second, ":schemas").pairs) {
      SchemaKey key = parse_schema_key(k);
      MethodSchema schema = parse_method(key, v, reg);
      if (!reg.schemas.emplace(key, std::move(schema)).second) malformed(k, "duplicate schema " + print_form(k));
    }
  }
  return reg;
}

/// `(ROO/Ts key args spec?)`: adds or replaces one schema. Re-registering an
/// existing key (including :default) replaces it.
inline Registry register_inline(Registry reg, const Form& key_form, const Form& args_form,
                                const Form* spec_form = nullptr) {
  using namespace detail;
  SchemaKey key = parse_schema_key(key_form);
  MethodSchema schema;
  schema.args = parse_args(args_form, reg);
  if (spec_form != nullptr) schema.runtime_spec = parse_runtime_spec(*spec_form, schema.args, reg);
  reg.schemas.insert_or_assign(std::move(key), std::move(schema));
  return reg;
}

/// Schema for (class, member, hint). Throws an unlocated UnknownSchema that
/// lists the hints registered for the same class and member.
inline MethodSchema lookup(const Registry& reg, const ClassName& cls, std::string_view member, const Keyword& hint) {
  SchemaKey key{cls, std::string(member), hint};
  if (auto it = reg.schemas.find(key); it != reg.schemas.end()) return it->second;
  std::string msg = "no schema for " + cls.value + "/" + std::string(member) + " with hint " + hint.str();
  std::string near;
  for (const auto& [k, _] : reg.schemas) {
    if (k.cls == cls && k.member == member) near += (near.empty() ? "" : ", ") + k.hint.str();
  }
  if (!near.empty()) msg += " (available hints: " + near + ")";
  throw Error(ErrorCode::UnknownSchema, msg);
}

/// Number of Unicode scalar values in UTF-8 text.
inline std::size_t text_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

inline bool satisfies(const ValidatorDef& def, const Value& v) {
  auto* s = v.get_if<std::string>();
  if (s == nullptr) return false;
  auto len = static_cast<std::int64_t>(text_length(*s));
  if (def.min && len < *def.min) return false;
  if (def.max && len > *def.max) return false;
  return true;
}

struct ValidationResult {
  std::optional<Keyword> mismatch;  // failing option name
  bool ok() const { return !mismatch.has_value(); }
};

/// Reference semantics for runtime checks. Options are checked in declared
/// order and the first failure wins; a missing key is a failure; extra keys
/// are ignored.
inline ValidationResult validate(const MethodSchema& schema, const Value& options) {
  if (!schema.runtime_spec) throw std::logic_error("validate: schema has no runtime spec");
  for (const auto& opt : *schema.runtime_spec) {
    const Value* v = options.find(opt.option);
    if (v == nullptr || !satisfies(opt.def, *v)) return ValidationResult{opt.option};
  }
  return {};
}

/// `{:args [...] :returns ... :spec [...]}` in canonical text form.
inline std::string print_schema(const MethodSchema& schema) {
  std::string out = "{:args [";
  for (std::size_t i = 0; i < schema.args.size(); ++i) out += (i ? " " : "") + schema.args[i].str();
  out += "] :returns " + schema.returns.str();
  if (schema.runtime_spec) {
    out += " :spec [";
    for (std::size_t i = 0; i < schema.runtime_spec->size(); ++i) {
      const auto& o = (*schema.runtime_spec)[i];
      out += (i ? " [" : "[") + o.option.str() + " " + o.validator.str() + "]";
    }
    out += "]";
  }
  return out + "}";
}

}  // namespace roo
