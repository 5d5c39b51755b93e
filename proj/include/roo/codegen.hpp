#pragma once

// C++ emission. The generated translation unit includes the target library
// header and the runtime support header (roo_support.hpp) and nothing else.
// Layout, in order: includes, global value slots, callback trampolines,
// function prototypes and definitions (one per fn), entry function.
//
// Every core expression becomes a C++ expression of type roo_rt::Value.
// Sequencing forms (do, let, native calls) become immediately invoked
// lambdas so they stay expressions.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "roo/core.hpp"
#include "roo/error.hpp"
#include "roo/expander.hpp"
#include "roo/schema.hpp"

namespace roo {

struct EmitOptions {
  std::string header;                           // from native-header; may be empty without native calls
  std::string support_include = "roo_support.hpp";
  std::string entry_name = "main";
};

inline constexpr std::size_t kMaxCallbackSlots = 16;

struct TrampolineSlot {
  std::size_t index = 0;
  CallbackSig sig;
  std::string target;  // global name, or "<fn>" for an inline fn literal
};

/// Native parameter type for a schema tag. Callbacks go through trampolines
/// and have no direct mapping.
inline std::string map_type(const TypeTag& tag) {
  switch (tag.kind) {
    case TypeTag::Kind::Double: return "double";
    case TypeTag::Kind::Int: return "int";
    case TypeTag::Kind::Bool: return "bool";
    case TypeTag::Kind::String: return "const char*";
    case TypeTag::Kind::Void: return "void";
    case TypeTag::Kind::Callback: break;
  }
  throw std::logic_error("map_type: callback tags have no direct native type");
}

/// Native type of a callback array argument.
inline std::string map_array_type() { return "double*"; }

/// `lv_<name>` with every non-alphanumeric byte written as `_xx` (hex).
inline std::string mangle(std::string_view name) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "lv_";
  for (unsigned char c : name) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) {
      out += static_cast<char>(c);
    } else {
      out += '_';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

/// C++ string literal for arbitrary bytes.
inline std::string cxx_string_literal(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '?': out += "\\?"; break;  // no trigraphs
      default:
        if (c < 0x20 || c == 0x7F) {
          char buf[5];
          buf[0] = '\\';
          buf[1] = static_cast<char>('0' + ((c >> 6) & 7));
          buf[2] = static_cast<char>('0' + ((c >> 3) & 7));
          buf[3] = static_cast<char>('0' + (c & 7));
          buf[4] = '\0';
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

inline std::string trampoline_name(std::size_t index) { return "roo_trampoline_" + std::to_string(index); }

/// Plain `double(double*, double*)` function forwarding into the Lisp
/// function bound to the slot.
inline std::string emit_trampoline(const TrampolineSlot& slot) {
  std::string out;
  out += "// " + slot.sig.name.str() + " -> " + slot.target + "\n";
  out += "static double " + trampoline_name(slot.index) + "(" + map_array_type() + " arr, " + map_array_type() +
         " par) {\n";
  out += "  return roo_rt::to_double(roo_rt::invoke(roo_rt::cb_target(" + std::to_string(slot.index) +
         "), {roo_rt::array_view(arr), roo_rt::array_view(par)}));\n";
  out += "}\n";
  return out;
}

namespace detail {

/// Names a function context has bound, mapped to unique C++ identifiers.
class FnContext {
 public:
  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }

  std::string bind(const std::string& name) {
    std::string base = base_ident(name);
    auto& count = used_[base];
    std::string ident = count == 0 ? base : base + "__" + std::to_string(count);
    ++count;
    if (scopes_.empty()) push();
    scopes_.back()[name] = ident;
    return ident;
  }

  std::optional<std::string> find(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) return f->second;
    return std::nullopt;
  }

 private:
  static std::string base_ident(const std::string& name) {
    // expander temporaries "#p12" -> lt_12; codegen holders "#arg0" -> lt_arg0
    if (name.starts_with("#arg")) return "lt_" + name.substr(1);
    if (name.starts_with("#")) return "lt_" + name.substr(2);
    return mangle(name);
  }

  std::vector<std::map<std::string, std::string>> scopes_;
  std::map<std::string, int> used_;
};

/// Local names referenced in `e` that are not bound inside it, in order of
/// first occurrence.
inline void free_locals(const CoreExpr& e, std::vector<std::string>& bound, std::vector<std::string>& out) {
  auto note = [&](const std::string& name) {
    if (std::find(bound.begin(), bound.end(), name) != bound.end()) return;
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          if (n.scope == Scope::Local) note(n.name);
        } else if constexpr (std::is_same_v<T, Fn>) {
          std::size_t mark = bound.size();
          for (const auto& p : n.params) pattern_names(p, bound);
          for (const auto& b : n.body) free_locals(b, bound, out);
          bound.resize(mark);
        } else if constexpr (std::is_same_v<T, Let>) {
          std::size_t mark = bound.size();
          for (const auto& b : n.bindings) {
            free_locals(*b.value, bound, out);
            bound.push_back(b.name);
          }
          for (const auto& b : n.body) free_locals(b, bound, out);
          bound.resize(mark);
        } else {
          for_each_child(n, [&](const CoreExpr& c) { free_locals(c, bound, out); });
        }
      },
      e.node);
}

class Emitter {
 public:
  explicit Emitter(const EmitOptions& opts) : opts_(opts) {}

  std::string program(const std::vector<CoreExpr>& exprs) {
    bool native = false;
    for (const auto& e : exprs)
      walk(e, [&](const CoreExpr& c) { native = native || c.is<NativeNew>() || c.is<NativeCall>(); });
    if (native && opts_.header.empty())
      throw Error(ErrorCode::MissingNativeHeader, "native calls require a native-header", exprs.front().span);

    std::vector<std::string> globals;
    for (const auto& e : exprs) {
      if (auto* def = e.get_if<Def>(); def && std::find(globals.begin(), globals.end(), def->name) == globals.end())
        globals.push_back(def->name);
    }

    std::string entry;
    FnContext top;
    top.push();
    for (const auto& e : exprs) {
      if (auto* def = e.get_if<Def>()) {
        entry += "  " + mangle(def->name) + " = " + expr(*def->value, top) + ";\n";
      } else {
        entry += "  (void)(" + expr(e, top) + ");\n";
      }
    }

    std::string out;
    out += "// Generated by roocc. Do not edit.\n";
    if (!opts_.header.empty()) out += "#include \"" + opts_.header + "\"\n";
    out += "#include \"" + opts_.support_include + "\"\n";
    if (!globals.empty()) {
      out += "\n";
      for (const auto& g : globals) out += "static roo_rt::Value " + mangle(g) + ";\n";
    }
    for (const auto& slot : slots_) out += "\n" + emit_trampoline(slot);
    if (!fns_.empty()) {
      out += "\n";
      for (std::size_t i = 0; i < fns_.size(); ++i) out += fn_signature(i, fns_[i].captures, fns_[i].arity) + ";\n";
      for (const auto& f : fns_) out += "\n" + f.text;
    }
    out += "\nint " + opts_.entry_name + "() {\n" + entry + "  return 0;\n}\n";
    return out;
  }

  const std::vector<TrampolineSlot>& slots() const { return slots_; }

 private:
  struct EmittedFn {
    std::size_t captures = 0;
    std::size_t arity = 0;
    std::string text;
  };

  static std::string fn_name(std::size_t index) { return "roo_fn_" + std::to_string(index); }

  static std::string fn_signature(std::size_t index, std::size_t captures, std::size_t arity) {
    return "static roo_rt::Value " + fn_name(index) + "(const roo_rt::Captures&" + (captures ? " cap" : "") +
           ", roo_rt::Args" + (arity ? " args" : "") + ")";
  }

  std::string expr(const CoreExpr& e, FnContext& ctx) {
    return std::visit([&](const auto& n) { return emit(n, e, ctx); }, e.node);
  }

  std::string list(const std::vector<CoreExpr>& xs, FnContext& ctx) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + expr(xs[i], ctx);
    return out;
  }

  /// Statement lines evaluating all but the last expression, then returning it.
  std::string body(const std::vector<CoreExpr>& xs, FnContext& ctx, const std::string& indent) {
    if (xs.empty()) return indent + "return roo_rt::Value();\n";
    std::string out;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) out += indent + "(void)(" + expr(xs[i], ctx) + ");\n";
    return out + indent + "return " + expr(xs.back(), ctx) + ";\n";
  }

  /// Immediately invoked lambda. Body lines are indented one level past the
  /// line that opens it; string literals never contain raw newlines.
  static std::string iife(const std::string& stmts) {
    std::string out = "[&]() -> roo_rt::Value {\n";
    std::size_t pos = 0;
    while (pos < stmts.size()) {
      std::size_t eol = stmts.find('\n', pos);
      if (eol == std::string::npos) eol = stmts.size() - 1;
      out += "  " + stmts.substr(pos, eol - pos + 1);
      pos = eol + 1;
    }
    return out + "  }()";
  }

  std::string emit(const Lit& n, const CoreExpr&, FnContext&) { return literal(n.value); }

  static std::string literal(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            return "roo_rt::Value()";
          } else if constexpr (std::is_same_v<T, bool>) {
            return std::string("roo_rt::Value(") + (x ? "true" : "false") + ")";
          } else if constexpr (std::is_same_v<T, std::int64_t>) {
            if (x == INT64_MIN) return "roo_rt::integer(-9223372036854775807LL - 1)";
            return "roo_rt::integer(" + std::to_string(x) + "LL)";
          } else if constexpr (std::is_same_v<T, double>) {
            return "roo_rt::number(" + format_double(x) + ")";
          } else if constexpr (std::is_same_v<T, std::string>) {
            return "roo_rt::text(" + cxx_string_literal(x) + ")";
          } else if constexpr (std::is_same_v<T, Keyword>) {
            return "roo_rt::kw(" + cxx_string_literal(x.qualified()) + ")";
          } else if constexpr (std::is_same_v<T, ValueSeq>) {
            std::string out = "roo_rt::vec({";
            for (std::size_t i = 0; i < x.items.size(); ++i) out += (i ? ", " : "") + literal(x.items[i]);
            return out + "})";
          } else {
            std::string out = "roo_rt::map({";
            for (std::size_t i = 0; i < x.entries.size(); ++i)
              out += std::string(i ? ", " : "") + "{" + literal(x.entries[i].key) + ", " + literal(x.entries[i].value) + "}";
            return out + "})";
          }
        },
        v.data);
  }

  std::string emit(const VarRef& n, const CoreExpr& e, FnContext& ctx) {
    switch (n.scope) {
      case Scope::Global: return mangle(n.name);
      case Scope::Prelude: return "roo_rt::prelude(" + cxx_string_literal(n.name) + ")";
      case Scope::Local: break;
    }
    if (auto ident = ctx.find(n.name)) return *ident;
    throw Error(ErrorCode::UnsupportedConstruct, "unbound local " + n.name, e.span);
  }

  std::string emit(const Def& n, const CoreExpr& e, FnContext&) {
    throw Error(ErrorCode::UnsupportedConstruct, "def of " + n.name + " outside top level", e.span);
  }

  std::string emit(const Fn& n, const CoreExpr& e, FnContext& ctx) {
    std::vector<std::string> bound, free;
    free_locals(e, bound, free);

    std::size_t index = fns_.size();
    fns_.push_back(EmittedFn{free.size(), n.params.size(), {}});

    FnContext inner;
    inner.push();
    std::string text = fn_signature(index, free.size(), n.params.size()) + " {\n";
    for (std::size_t i = 0; i < free.size(); ++i)
      text += "  const roo_rt::Value& " + inner.bind(free[i]) + " = cap[" + std::to_string(i) + "];\n";
    for (std::size_t i = 0; i < n.params.size(); ++i) {
      const Pattern& p = n.params[i];
      std::string arg = "args[" + std::to_string(i) + "]";
      if (auto* name = std::get_if<PName>(&p.node)) {
        text += "  const roo_rt::Value& " + inner.bind(name->name) + " = " + arg + ";\n";
        continue;
      }
      std::string holder = "#arg" + std::to_string(i);
      text += "  const roo_rt::Value& " + inner.bind(holder) + " = " + arg + ";\n";
      for (const auto& b : destructure(p, core(VarRef{holder, Scope::Local}, e.span))) {
        std::string value = expr(*b.value, inner);
        text += "  const roo_rt::Value " + inner.bind(b.name) + " = " + value + ";\n";
      }
    }
    text += body(n.body, inner, "  ");
    text += "}\n";
    fns_[index].text = std::move(text);

    std::string caps;
    for (std::size_t i = 0; i < free.size(); ++i) {
      auto ident = ctx.find(free[i]);
      if (!ident) throw Error(ErrorCode::UnsupportedConstruct, "unbound capture " + free[i], e.span);
      caps += (i ? ", " : "") + *ident;
    }
    return "roo_rt::make_fn(&" + fn_name(index) + ", " + std::to_string(n.params.size()) + ", {" + caps + "})";
  }

  std::string emit(const Call& n, const CoreExpr&, FnContext& ctx) {
    return "roo_rt::invoke(" + expr(*n.callee, ctx) + ", {" + list(n.args, ctx) + "})";
  }

  std::string emit(const If& n, const CoreExpr&, FnContext& ctx) {
    return "(roo_rt::truthy(" + expr(*n.cond, ctx) + ") ? roo_rt::Value(" + expr(*n.then, ctx) +
           ") : roo_rt::Value(" + expr(*n.otherwise, ctx) + "))";
  }

  std::string emit(const Do& n, const CoreExpr&, FnContext& ctx) {
    if (n.exprs.empty()) return "roo_rt::Value()";
    if (n.exprs.size() == 1) return expr(n.exprs.front(), ctx);
    return iife(body(n.exprs, ctx, "  "));
  }

  std::string emit(const Let& n, const CoreExpr&, FnContext& ctx) {
    ctx.push();
    std::string stmts;
    for (const auto& b : n.bindings) {
      std::string value = expr(*b.value, ctx);
      stmts += "  const roo_rt::Value " + ctx.bind(b.name) + " = " + value + ";\n";
    }
    stmts += body(n.body, ctx, "  ");
    ctx.pop();
    return iife(stmts);
  }

  std::string emit(const VecLit& n, const CoreExpr&, FnContext& ctx) { return "roo_rt::vec({" + list(n.items, ctx) + "})"; }

  std::string emit(const MapLit& n, const CoreExpr&, FnContext& ctx) {
    std::string out = "roo_rt::map({";
    for (std::size_t i = 0; i < n.entries.size(); ++i)
      out += std::string(i ? ", " : "") + "{" + expr(*n.entries[i].key, ctx) + ", " + expr(*n.entries[i].value, ctx) + "}";
    return out + "})";
  }

  std::string emit(const KeywordGet& n, const CoreExpr&, FnContext& ctx) {
    return "roo_rt::get(" + expr(*n.target, ctx) + ", roo_rt::kw(" + cxx_string_literal(n.key.qualified()) + "))";
  }

  std::string emit(const Builtin& n, const CoreExpr&, FnContext& ctx) {
    static constexpr std::string_view kNames[] = {"add", "sub", "mul", "div", "eq"};
    return "roo_rt::" + std::string(kNames[static_cast<int>(n.op)]) + "({" + list(n.args, ctx) + "})";
  }

  std::string emit(const Nth& n, const CoreExpr&, FnContext& ctx) {
    return "roo_rt::nth(" + expr(*n.target, ctx) + ", " + std::to_string(n.index) + ")";
  }

  /// Converts bound argument `argN` to the native parameter type.
  static std::string convert(const TypeTag& tag, const std::string& arg) {
    switch (tag.kind) {
      case TypeTag::Kind::Double: return "roo_rt::to_double(" + arg + ")";
      case TypeTag::Kind::Int: return "roo_rt::to_int(" + arg + ")";
      case TypeTag::Kind::Bool: return "roo_rt::to_bool(" + arg + ")";
      case TypeTag::Kind::String: return "roo_rt::to_cstr(" + arg + ")";
      case TypeTag::Kind::Callback: return "roo_rt::cb_pointer(" + arg + ")";
      case TypeTag::Kind::Void: break;
    }
    throw Error(ErrorCode::UnsupportedConstruct, "void argument");
  }

  static std::string native_args(const MethodSchema& schema) {
    std::string out;
    for (std::size_t i = 0; i < schema.args.size(); ++i)
      out += (i ? ", " : "") + convert(schema.args[i], "arg" + std::to_string(i));
    return out;
  }

  std::string emit(const NativeNew& n, const CoreExpr& e, FnContext& ctx) {
    if (n.args.size() != n.schema.args.size())
      throw Error(ErrorCode::UnsupportedConstruct, "constructor argument count differs from schema", e.span);
    std::string stmts;
    for (std::size_t i = 0; i < n.args.size(); ++i)
      stmts += "  const roo_rt::Value& arg" + std::to_string(i) + " = " + expr(n.args[i], ctx) + ";\n";
    stmts += "  return roo_rt::make_handle(" + cxx_string_literal(n.cls.value) + ", new " + n.cls.value + "(" +
             native_args(n.schema) + "));\n";
    return iife(stmts);
  }

  std::string emit(const NativeCall& n, const CoreExpr& e, FnContext& ctx) {
    std::string stmts;
    if (n.uses_options()) {
      if (n.args.size() != 1)
        throw Error(ErrorCode::UnsupportedConstruct, "runtime-checked call needs one options map", e.span);
      stmts += "  const roo_rt::Value& opts = " + expr(n.args[0], ctx) + ";\n";
      std::string checks;
      const auto& spec = *n.schema.runtime_spec;
      for (std::size_t i = 0; i < spec.size(); ++i) {
        const ValidatorDef& def = spec[i].def;
        checks += std::string(i ? ", " : "") + "{roo_rt::kw(" + cxx_string_literal(spec[i].option.qualified()) +
                  "), " + (def.min ? std::to_string(*def.min) : "0") + ", " +
                  (def.max ? std::to_string(*def.max) : "roo_rt::kNoMax") + "}";
      }
      stmts += "  if (roo_rt::Value mismatch = roo_rt::validate_options(opts, {" + checks +
               "}); roo_rt::truthy(mismatch)) return mismatch;\n";
      for (std::size_t i = 0; i < spec.size(); ++i)
        stmts += "  const roo_rt::Value arg" + std::to_string(i) + " = roo_rt::get(opts, roo_rt::kw(" +
                 cxx_string_literal(spec[i].option.qualified()) + "));\n";
    } else {
      if (n.args.size() != n.schema.args.size())
        throw Error(ErrorCode::UnsupportedConstruct, "method argument count differs from schema", e.span);
      for (std::size_t i = 0; i < n.args.size(); ++i)
        stmts += "  const roo_rt::Value& arg" + std::to_string(i) + " = " + expr(n.args[i], ctx) + ";\n";
    }
    stmts += "  auto* self = static_cast<" + n.cls.value + "*>(roo_rt::handle_ptr(" + expr(*n.receiver, ctx) + ", " +
             cxx_string_literal(n.cls.value) + "));\n";
    std::string call = "self->" + n.member + "(" + native_args(n.schema) + ")";
    switch (n.schema.returns.kind) {
      case TypeTag::Kind::Void:
        stmts += "  " + call + ";\n  return roo_rt::Value();\n";
        break;
      case TypeTag::Kind::Double:
        stmts += "  return roo_rt::number(static_cast<double>(" + call + "));\n";
        break;
      case TypeTag::Kind::Int:
        stmts += "  return roo_rt::integer(static_cast<long long>(" + call + "));\n";
        break;
      case TypeTag::Kind::Bool:
        stmts += "  return roo_rt::Value(static_cast<bool>(" + call + "));\n";
        break;
      default:
        throw Error(ErrorCode::UnsupportedConstruct, "non-primitive return type " + n.schema.returns.str(), e.span);
    }
    return iife(stmts);
  }

  std::string emit(const CallbackRef& n, const CoreExpr& e, FnContext& ctx) {
    std::size_t index = 0;
    std::string target;
    if (n.literal) {
      index = new_slot(n.sig, "<fn>", e);
      target = expr(**n.literal, ctx);
    } else {
      auto it = slot_of_global_.find(n.target);
      if (it == slot_of_global_.end()) it = slot_of_global_.emplace(n.target, new_slot(n.sig, n.target, e)).first;
      index = it->second;
      target = mangle(n.target);
    }
    return "roo_rt::cb_bind(" + std::to_string(index) + ", " + target + ", &" + trampoline_name(index) + ")";
  }

  std::size_t new_slot(const Keyword& sig, const std::string& target, const CoreExpr& e) {
    if (slots_.size() >= kMaxCallbackSlots)
      throw Error(ErrorCode::TooManyCallbacks,
                  "more than " + std::to_string(kMaxCallbackSlots) + " callback slots are required", e.span);
    slots_.push_back(TrampolineSlot{slots_.size(), CallbackSig{sig}, target});
    return slots_.back().index;
  }

  const EmitOptions& opts_;
  std::vector<EmittedFn> fns_;
  std::vector<TrampolineSlot> slots_;
  std::map<std::string, std::size_t> slot_of_global_;
};

}  // namespace detail

/// Deterministic translation unit for an expanded program.
inline std::string emit_program(const std::vector<CoreExpr>& exprs, const EmitOptions& opts) {
  return detail::Emitter(opts).program(exprs);
}

}  // namespace roo
