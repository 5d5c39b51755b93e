#pragma once

// Desugared program representation produced by the expander and consumed by
// codegen. Interop calls carry the schema snapshot that was current at the
// point of expansion.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "roo/reader.hpp"
#include "roo/schema.hpp"
#include "roo/span.hpp"
#include "roo/value.hpp"

namespace roo {

/// Heap-allocated value with deep-copy semantics; lets recursive variants
/// hold single children by value.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

 private:
  std::unique_ptr<T> ptr_;
};

struct Pattern;
struct PName { std::string name; };
struct PSeq { std::vector<Pattern> items; };

/// Parameter pattern: a plain name or a (nested) positional vector.
struct Pattern {
  std::variant<PName, PSeq> node;
};

struct CoreExpr;

enum class Scope : std::uint8_t { Local, Global, Prelude };
enum class BuiltinOp : std::uint8_t { Add, Sub, Mul, Div, Eq };

struct Lit { Value value; };
struct VarRef {
  std::string name;
  Scope scope = Scope::Local;
};
struct Def {
  std::string name;
  Box<CoreExpr> value;
};
struct Fn {
  std::vector<Pattern> params;
  std::vector<CoreExpr> body;
};
struct Call {
  Box<CoreExpr> callee;
  std::vector<CoreExpr> args;
};
struct If {
  Box<CoreExpr> cond;
  Box<CoreExpr> then;
  Box<CoreExpr> otherwise;
};
struct Do { std::vector<CoreExpr> exprs; };
struct LetBinding {
  std::string name;
  Box<CoreExpr> value;
};
struct Let {
  std::vector<LetBinding> bindings;
  std::vector<CoreExpr> body;
};
struct VecLit { std::vector<CoreExpr> items; };
struct MapLitEntry {
  Box<CoreExpr> key;
  Box<CoreExpr> value;
};
struct MapLit { std::vector<MapLitEntry> entries; };
struct KeywordGet {
  Keyword key;
  Box<CoreExpr> target;
};
struct Builtin {
  BuiltinOp op;
  std::vector<CoreExpr> args;
};
/// Indexed read used by destructuring; no bounds check on array views.
struct Nth {
  Box<CoreExpr> target;
  std::size_t index = 0;
};
struct NativeNew {
  ClassName cls;
  Keyword hint;
  MethodSchema schema;
  std::vector<CoreExpr> args;
};
/// Positional args when the schema has no runtime spec, otherwise exactly
/// one options-map argument.
struct NativeCall {
  ClassName cls;
  std::string member;
  Keyword hint;
  MethodSchema schema;
  Box<CoreExpr> receiver;
  std::vector<CoreExpr> args;

  bool uses_options() const { return schema.runtime_spec.has_value(); }
};
/// A statically known function passed where a native callback is expected.
/// `target` names a global; `literal` holds an inline fn instead.
struct CallbackRef {
  Keyword sig;
  std::string target;
  std::optional<Box<CoreExpr>> literal;
};

using CoreNode = std::variant<Lit, VarRef, Def, Fn, Call, If, Do, Let, VecLit, MapLit, KeywordGet, Builtin, Nth,
                              NativeNew, NativeCall, CallbackRef>;

struct CoreExpr {
  CoreNode node;
  SourceSpan span;

  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }
  template <class T>
  const T& as() const { return std::get<T>(node); }
  template <class T>
  const T* get_if() const { return std::get_if<T>(&node); }
};

inline CoreExpr core(CoreNode node, SourceSpan span = {}) { return CoreExpr{std::move(node), std::move(span)}; }

constexpr std::string_view builtin_name(BuiltinOp op) {
  switch (op) {
    case BuiltinOp::Add: return "+";
    case BuiltinOp::Sub: return "-";
    case BuiltinOp::Mul: return "*";
    case BuiltinOp::Div: return "/";
    case BuiltinOp::Eq: return "=";
  }
  return "?";
}

inline std::optional<BuiltinOp> builtin_op(std::string_view name) {
  if (name == "+") return BuiltinOp::Add;
  if (name == "-") return BuiltinOp::Sub;
  if (name == "*") return BuiltinOp::Mul;
  if (name == "/") return BuiltinOp::Div;
  if (name == "=") return BuiltinOp::Eq;
  return std::nullopt;
}

inline std::string print_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "nil";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          std::string out;
          detail::print_string_literal(out, x);
          return out;
        } else if constexpr (std::is_same_v<T, Keyword>) {
          return x.str();
        } else if constexpr (std::is_same_v<T, ValueSeq>) {
          std::string out = "[";
          for (std::size_t i = 0; i < x.items.size(); ++i) out += (i ? " " : "") + print_value(x.items[i]);
          return out + "]";
        } else {
          std::string out = "{";
          for (std::size_t i = 0; i < x.entries.size(); ++i)
            out += (i ? " " : "") + print_value(x.entries[i].key) + " " + print_value(x.entries[i].value);
          return out + "}";
        }
      },
      v.data);
}

inline std::string print_pattern(const Pattern& p) {
  if (auto* n = std::get_if<PName>(&p.node)) return n->name;
  const auto& seq = std::get<PSeq>(p.node);
  std::string out = "[";
  for (std::size_t i = 0; i < seq.items.size(); ++i) out += (i ? " " : "") + print_pattern(seq.items[i]);
  return out + "]";
}

inline std::string print_core(const CoreExpr& e);

namespace detail {

inline std::string join_core(const std::vector<CoreExpr>& xs) {
  std::string out;
  for (const auto& x : xs) out += " " + print_core(x);
  return out;
}

}  // namespace detail

/// S-expression rendering of the core AST, used by `--emit core` and by
/// structural comparisons in tests.
inline std::string print_core(const CoreExpr& e) {
  using detail::join_core;
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Lit>) {
          return print_value(n.value);
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Def>) {
          return "(def " + n.name + " " + print_core(*n.value) + ")";
        } else if constexpr (std::is_same_v<T, Fn>) {
          std::string params;
          for (std::size_t i = 0; i < n.params.size(); ++i) params += (i ? " " : "") + print_pattern(n.params[i]);
          return "(fn [" + params + "]" + join_core(n.body) + ")";
        } else if constexpr (std::is_same_v<T, Call>) {
          return "(call " + print_core(*n.callee) + join_core(n.args) + ")";
        } else if constexpr (std::is_same_v<T, If>) {
          return "(if " + print_core(*n.cond) + " " + print_core(*n.then) + " " + print_core(*n.otherwise) + ")";
        } else if constexpr (std::is_same_v<T, Do>) {
          return "(do" + join_core(n.exprs) + ")";
        } else if constexpr (std::is_same_v<T, Let>) {
          std::string binds;
          for (std::size_t i = 0; i < n.bindings.size(); ++i)
            binds += (i ? " " : "") + n.bindings[i].name + " " + print_core(*n.bindings[i].value);
          return "(let [" + binds + "]" + join_core(n.body) + ")";
        } else if constexpr (std::is_same_v<T, VecLit>) {
          std::string out = "[";
          for (std::size_t i = 0; i < n.items.size(); ++i) out += (i ? " " : "") + print_core(n.items[i]);
          return out + "]";
        } else if constexpr (std::is_same_v<T, MapLit>) {
          std::string out = "{";
          for (std::size_t i = 0; i < n.entries.size(); ++i)
            out += (i ? " " : "") + print_core(*n.entries[i].key) + " " + print_core(*n.entries[i].value);
          return out + "}";
        } else if constexpr (std::is_same_v<T, KeywordGet>) {
          return "(get " + n.key.str() + " " + print_core(*n.target) + ")";
        } else if constexpr (std::is_same_v<T, Builtin>) {
          return "(" + std::string(builtin_name(n.op)) + join_core(n.args) + ")";
        } else if constexpr (std::is_same_v<T, Nth>) {
          return "(nth " + print_core(*n.target) + " " + std::to_string(n.index) + ")";
        } else if constexpr (std::is_same_v<T, NativeNew>) {
          return "(native-new \"" + n.cls.value + "\" " + n.hint.str() + " " + print_schema(n.schema) +
                 join_core(n.args) + ")";
        } else if constexpr (std::is_same_v<T, NativeCall>) {
          return "(native-call \"" + n.cls.value + "\" " + n.member + " " + n.hint.str() + " " +
                 print_schema(n.schema) + " " + print_core(*n.receiver) + join_core(n.args) + ")";
        } else {
          static_assert(std::is_same_v<T, CallbackRef>);
          return "(callback " + n.sig.str() + " " + (n.literal ? print_core(**n.literal) : n.target) + ")";
        }
      },
      e.node);
}

/// Calls `f` on each direct child expression of node `n`.
template <class Node, class F>
void for_each_child(const Node& n, F&& f) {
  using T = std::decay_t<Node>;
  auto all = [&](const std::vector<CoreExpr>& cs) {
    for (const auto& c : cs) f(c);
  };
  if constexpr (std::is_same_v<T, Def>) {
    f(*n.value);
  } else if constexpr (std::is_same_v<T, Fn>) {
    all(n.body);
  } else if constexpr (std::is_same_v<T, Call>) {
    f(*n.callee);
    all(n.args);
  } else if constexpr (std::is_same_v<T, If>) {
    f(*n.cond);
    f(*n.then);
    f(*n.otherwise);
  } else if constexpr (std::is_same_v<T, Do>) {
    all(n.exprs);
  } else if constexpr (std::is_same_v<T, Let>) {
    for (const auto& b : n.bindings) f(*b.value);
    all(n.body);
  } else if constexpr (std::is_same_v<T, VecLit>) {
    all(n.items);
  } else if constexpr (std::is_same_v<T, MapLit>) {
    for (const auto& en : n.entries) {
      f(*en.key);
      f(*en.value);
    }
  } else if constexpr (std::is_same_v<T, KeywordGet>) {
    f(*n.target);
  } else if constexpr (std::is_same_v<T, Builtin>) {
    all(n.args);
  } else if constexpr (std::is_same_v<T, Nth>) {
    f(*n.target);
  } else if constexpr (std::is_same_v<T, NativeNew>) {
    all(n.args);
  } else if constexpr (std::is_same_v<T, NativeCall>) {
    f(*n.receiver);
    all(n.args);
  } else if constexpr (std::is_same_v<T, CallbackRef>) {
    if (n.literal) f(**n.literal);
  }
}

/// Pre-order traversal over every node of `e`.
template <class Visitor>
void walk(const CoreExpr& e, Visitor&& visit) {
  visit(e);
  std::visit([&](const auto& n) { for_each_child(n, [&](const CoreExpr& c) { walk(c, visit); }); }, e.node);
}

}  // namespace roo
