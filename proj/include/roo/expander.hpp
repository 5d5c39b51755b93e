#pragma once

// Macro expansion from reader forms to the core AST.
//
// Special forms: native-header, require, def, defn, fn, let, do, if, when,
// doto, quote, and the interop alias forms A/T and A/Ts. Everything else in
// call position is an ordinary call. Calls whose callee is statically known
// to be an interop function (an A/T form or a global bound to one) are
// checked against the schema snapshot: arity, literal argument types and
// static resolvability of callbacks.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roo/core.hpp"
#include "roo/error.hpp"
#include "roo/form.hpp"
#include "roo/reader.hpp"
#include "roo/schema.hpp"

namespace roo {

/// What the expander knows about a function produced by an A/T form.
struct InteropSig {
  ClassName cls;
  std::string member;
  Keyword hint;
  MethodSchema schema;

  bool is_constructor() const { return member == "new"; }
  std::string label() const { return cls.value + "/" + member + " " + hint.str(); }

  /// Number of call-site arguments, receiver included.
  std::size_t arity() const {
    if (is_constructor()) return schema.args.size();
    return 1 + (schema.runtime_spec ? 1 : schema.args.size());
  }
};

/// Expansion state for one program. Fresh names come from a counter that
/// starts at zero for every program, so expansion is deterministic.
struct Env {
  std::optional<std::string> header;
  std::set<std::string> aliases;
  std::set<std::string> globals;
  std::set<std::string> prelude{"println", "str"};
  std::map<std::string, InteropSig> interop_globals;
  std::vector<std::vector<std::string>> locals;
  std::size_t fresh = 0;

  std::string fresh_name(char role) { return std::string("#") + role + std::to_string(fresh++); }

  bool is_local(std::string_view name) const {
    for (auto it = locals.rbegin(); it != locals.rend(); ++it)
      if (std::find(it->begin(), it->end(), name) != it->end()) return true;
    return false;
  }
};

struct ExpandResult {
  std::vector<CoreExpr> exprs;
  Registry registry;
  std::optional<std::string> header;
};

/// Bindings that extract every name of `pattern` from `value`. Vector
/// patterns read positions with Nth, recursively.
inline std::vector<LetBinding> destructure(const Pattern& pattern, const CoreExpr& value) {
  std::vector<LetBinding> out;
  if (auto* name = std::get_if<PName>(&pattern.node)) {
    out.push_back(LetBinding{name->name, value});
    return out;
  }
  const auto& seq = std::get<PSeq>(pattern.node);
  for (std::size_t i = 0; i < seq.items.size(); ++i) {
    auto sub = destructure(seq.items[i], core(Nth{value, i}, value.span));
    out.insert(out.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
  }
  return out;
}

namespace detail {

inline void pattern_names(const Pattern& p, std::vector<std::string>& out) {
  if (auto* n = std::get_if<PName>(&p.node)) {
    out.push_back(n->name);
    return;
  }
  for (const auto& sub : std::get<PSeq>(p.node).items) pattern_names(sub, out);
}

class Expander {
 public:
  Expander(Env& env, const Registry& reg) : env_(env), reg_(reg) {}

  CoreExpr expand(const Form& form) {
    return std::visit(
        [&](const auto& node) -> CoreExpr {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Symbol>) {
            return resolve(node.name, form.span);
          } else if constexpr (std::is_same_v<T, Keyword>) {
            return core(Lit{Value(node)}, form.span);
          } else if constexpr (std::is_same_v<T, Str>) {
            return core(Lit{Value(node.value)}, form.span);
          } else if constexpr (std::is_same_v<T, Int>) {
            return core(Lit{Value(node.value)}, form.span);
          } else if constexpr (std::is_same_v<T, Dbl>) {
            return core(Lit{Value(node.value)}, form.span);
          } else if constexpr (std::is_same_v<T, Bool>) {
            return core(Lit{Value(node.value)}, form.span);
          } else if constexpr (std::is_same_v<T, Nil>) {
            return core(Lit{}, form.span);
          } else if constexpr (std::is_same_v<T, VecF>) {
            return core(VecLit{expand_all(node.items)}, form.span);
          } else if constexpr (std::is_same_v<T, MapF>) {
            MapLit map;
            for (const auto& [k, v] : node.pairs) map.entries.push_back(MapLitEntry{expand(k), expand(v)});
            return core(std::move(map), form.span);
          } else {
            return expand_list(form, node);
          }
        },
        form.data);
  }

  /// Registers `name` as a global, then expands its value. Tracks whether
  /// the global is bound to an interop function.
  CoreExpr expand_def(const Form& form, const ListF& list) {
    if (list.items.size() != 3) malformed(form, "def expects a name and a value");
    std::string name = def_name(list.items[1]);
    env_.globals.insert(name);
    CoreExpr value = expand(list.items[2]);
    if (auto sig = interop_sig_of(list.items[2]))
      env_.interop_globals.insert_or_assign(name, *sig);
    else
      env_.interop_globals.erase(name);
    return core(Def{name, std::move(value)}, form.span);
  }

  CoreExpr expand_defn(const Form& form, const ListF& list) {
    if (list.items.size() < 3) malformed(form, "defn expects a name, a parameter vector and a body");
    std::string name = def_name(list.items[1]);
    env_.globals.insert(name);
    env_.interop_globals.erase(name);
    CoreExpr fn = expand_fn(form, list.items[2], std::span(list.items).subspan(3));
    return core(Def{name, std::move(fn)}, form.span);
  }

  std::optional<std::string> alias_member(const Form& head) const {
    auto* sym = head.get_if<Symbol>();
    if (sym == nullptr) return std::nullopt;
    auto slash = sym->name.find('/');
    if (slash == std::string::npos || slash == 0) return std::nullopt;
    if (!env_.aliases.contains(sym->name.substr(0, slash))) return std::nullopt;
    return sym->name.substr(slash + 1);
  }

 private:
  [[noreturn]] static void malformed(const Form& at, const std::string& what) {
    throw Error(ErrorCode::MalformedForm, what, at.span);
  }

  std::vector<CoreExpr> expand_all(std::span<const Form> forms) {
    std::vector<CoreExpr> out;
    out.reserve(forms.size());
    for (const auto& f : forms) out.push_back(expand(f));
    return out;
  }

  static std::string def_name(const Form& f) {
    auto* sym = f.get_if<Symbol>();
    if (sym == nullptr || sym->name.find('/') != std::string::npos)
      malformed(f, "expected an unqualified name, got " + print_form(f));
    return sym->name;
  }

  CoreExpr resolve(const std::string& name, const SourceSpan& span) {
    if (env_.is_local(name)) return core(VarRef{name, Scope::Local}, span);
    if (env_.globals.contains(name)) return core(VarRef{name, Scope::Global}, span);
    if (env_.prelude.contains(name)) return core(VarRef{name, Scope::Prelude}, span);
    if (builtin_op(name)) throw Error(ErrorCode::MalformedForm, "builtin " + name + " can only be called", span);
    auto slash = name.find('/');
    if (slash != std::string::npos && slash > 0 && env_.aliases.contains(name.substr(0, slash)))
      throw Error(ErrorCode::MalformedForm, "interop macro " + name + " must be used in call position", span);
    throw Error(ErrorCode::UnresolvedSymbol, "unable to resolve symbol " + name, span);
  }

  CoreExpr expand_list(const Form& form, const ListF& list) {
    if (list.items.empty()) malformed(form, "empty list");
    const Form& head = list.items.front();
    auto args = std::span(list.items).subspan(1);

    if (auto* sym = head.get_if<Symbol>()) {
      const std::string& s = sym->name;
      if (s == "def") {
        malformed(form, "def is only allowed at top level");
      } else if (s == "defn") {
        malformed(form, "defn is only allowed at top level");
      } else if (s == "native-header" || s == "require") {
        throw Error(ErrorCode::UnknownSpecialForm, s + " is only allowed at top level", form.span);
      } else if (s == "fn") {
        if (args.empty()) malformed(form, "fn expects a parameter vector");
        return expand_fn(form, args[0], args.subspan(1));
      } else if (s == "let") {
        return expand_let(form, args);
      } else if (s == "do") {
        return core(Do{expand_all(args)}, form.span);
      } else if (s == "if") {
        if (args.size() < 2 || args.size() > 3) malformed(form, "if expects a condition, a then branch and an optional else");
        CoreExpr otherwise = args.size() == 3 ? expand(args[2]) : core(Lit{}, form.span);
        return core(If{expand(args[0]), expand(args[1]), std::move(otherwise)}, form.span);
      } else if (s == "when") {
        if (args.empty()) malformed(form, "when expects a condition");
        CoreExpr cond = expand(args[0]);
        CoreExpr body = core(Do{expand_all(args.subspan(1))}, form.span);
        return core(If{std::move(cond), std::move(body), core(Lit{}, form.span)}, form.span);
      } else if (s == "doto") {
        return expand_doto(form, args);
      } else if (s == "quote") {
        if (args.size() != 1) malformed(form, "quote expects one form");
        return quote(args[0]);
      } else if (auto member = alias_member(head)) {
        if (*member == "T") return expand_interop(form, list);
        if (*member == "Ts")
          throw Error(ErrorCode::UnknownSpecialForm, s + " is only allowed at top level", form.span);
        throw Error(ErrorCode::UnknownSpecialForm, "unknown interop form " + s, form.span);
      } else if (auto op = builtin_op(s); op && !env_.is_local(s)) {
        return core(Builtin{*op, expand_all(args)}, form.span);
      }
    }
    return apply(head, expand_all(args), form.span);
  }

  /// Applies `head` to already expanded arguments. Used for ordinary call
  /// sites and for the threaded steps of doto.
  CoreExpr apply(const Form& head, std::vector<CoreExpr> args, const SourceSpan& span) {
    if (auto* kw = head.get_if<Keyword>()) {
      if (args.size() != 1)
        throw Error(ErrorCode::MalformedForm, "keyword lookup " + kw->str() + " expects one argument", span);
      return core(KeywordGet{*kw, std::move(args[0])}, span);
    }
    if (auto* sym = head.get_if<Symbol>()) {
      if (auto op = builtin_op(sym->name); op && !env_.is_local(sym->name))
        return core(Builtin{*op, std::move(args)}, span);
    }
    auto sig = interop_sig_of(head);
    CoreExpr callee = expand(head);
    if (sig) check_interop_call(*sig, args, span);
    return core(Call{std::move(callee), std::move(args)}, span);
  }

  std::optional<InteropSig> interop_sig_of(const Form& f) {
    if (auto* sym = f.get_if<Symbol>()) {
      if (env_.is_local(sym->name)) return std::nullopt;
      if (auto it = env_.interop_globals.find(sym->name); it != env_.interop_globals.end()) return it->second;
      return std::nullopt;
    }
    auto* list = f.get_if<ListF>();
    if (list == nullptr || list->items.empty()) return std::nullopt;
    auto member = alias_member(list->items.front());
    if (!member || *member != "T") return std::nullopt;
    return parse_interop(f, *list);
  }

  InteropSig parse_interop(const Form& form, const ListF& list) {
    if (list.items.size() != 3 && list.items.size() != 4)
      malformed(form, "interop form expects (T member Class :hint?)");
    auto* member = list.items[1].get_if<Symbol>();
    if (member == nullptr || member->name.find('/') != std::string::npos)
      malformed(list.items[1], "interop member must be a plain symbol, got " + print_form(list.items[1]));
    ClassName cls;
    if (auto* s = list.items[2].get_if<Symbol>()) {
      cls.value = s->name;
    } else if (auto* str = list.items[2].get_if<Str>(); str != nullptr && !str->value.empty()) {
      cls.value = str->value;
    } else {
      malformed(list.items[2], "interop class must be a symbol or a string, got " + print_form(list.items[2]));
    }
    Keyword hint{"default"};
    if (list.items.size() == 4) {
      auto* k = list.items[3].get_if<Keyword>();
      if (k == nullptr) malformed(list.items[3], "interop hint must be a keyword, got " + print_form(list.items[3]));
      hint = *k;
    }
    try {
      MethodSchema schema = lookup(reg_, cls, member->name, hint);
      return InteropSig{cls, member->name, hint, std::move(schema)};
    } catch (Error& e) {
      throw e.at(form.span);
    }
  }

  /// (A/T member Class hint?) => a fn whose parameters feed the native call.
  CoreExpr expand_interop(const Form& form, const ListF& list) {
    InteropSig sig = parse_interop(form, list);
    Fn fn;
    auto param = [&](char role) {
      std::string name = env_.fresh_name(role);
      fn.params.push_back(Pattern{PName{name}});
      return core(VarRef{name, Scope::Local}, form.span);
    };
    if (sig.is_constructor()) {
      std::vector<CoreExpr> args;
      for (std::size_t i = 0; i < sig.schema.args.size(); ++i) args.push_back(param('p'));
      fn.body.push_back(core(NativeNew{sig.cls, sig.hint, sig.schema, std::move(args)}, form.span));
    } else {
      CoreExpr receiver = param('p');
      std::vector<CoreExpr> args;
      std::size_t n = sig.schema.runtime_spec ? 1 : sig.schema.args.size();
      for (std::size_t i = 0; i < n; ++i) args.push_back(param('p'));
      fn.body.push_back(
          core(NativeCall{sig.cls, sig.member, sig.hint, sig.schema, std::move(receiver), std::move(args)}, form.span));
    }
    return core(std::move(fn), form.span);
  }

  static bool is_literal(const CoreExpr& e) {
    return e.is<Lit>() || e.is<VecLit>() || e.is<MapLit>() || e.is<Fn>();
  }

  static std::string describe(const CoreExpr& e) {
    if (auto* lit = e.get_if<Lit>()) return "literal " + print_value(lit->value);
    if (e.is<VecLit>()) return "vector literal";
    if (e.is<MapLit>()) return "map literal";
    if (e.is<Fn>()) return "fn literal";
    return "expression";
  }

  static void check_arg_type(const InteropSig& sig, std::size_t index, const TypeTag& tag, const CoreExpr& arg) {
    if (!is_literal(arg)) return;
    using K = TypeTag::Kind;
    bool ok = false;
    if (auto* lit = arg.get_if<Lit>()) {
      const Value& v = lit->value;
      switch (tag.kind) {
        case K::Double: ok = v.get_if<double>() || v.get_if<std::int64_t>(); break;
        case K::Int: ok = v.get_if<std::int64_t>() != nullptr; break;
        case K::Bool: ok = v.get_if<bool>() != nullptr; break;
        case K::String: ok = v.get_if<std::string>() != nullptr; break;
        default: break;
      }
    }
    if (!ok) {
      throw Error(ErrorCode::StaticTypeError,
                  sig.label() + " argument " + std::to_string(index) + " expects " + tag.str() + ", got " +
                      describe(arg),
                  arg.span);
    }
  }

  void check_interop_call(const InteropSig& sig, std::vector<CoreExpr>& args, const SourceSpan& span) {
    if (args.size() != sig.arity()) {
      std::string what = sig.is_constructor() ? "" : " (receiver included)";
      throw Error(ErrorCode::ArityError,
                  sig.label() + " expects " + std::to_string(sig.arity()) + " arguments" + what + ", got " +
                      std::to_string(args.size()),
                  span);
    }
    std::size_t first = 0;
    if (!sig.is_constructor()) {
      if (is_literal(args[0]))
        throw Error(ErrorCode::StaticTypeError, sig.label() + " receiver must be a handle, got " + describe(args[0]),
                    args[0].span);
      first = 1;
    }
    if (sig.schema.runtime_spec) {
      const CoreExpr& opts = args[first];
      if (is_literal(opts) && !opts.is<MapLit>())
        throw Error(ErrorCode::StaticTypeError, sig.label() + " expects an options map, got " + describe(opts),
                    opts.span);
      return;
    }
    for (std::size_t i = 0; i < sig.schema.args.size(); ++i) {
      const TypeTag& tag = sig.schema.args[i];
      CoreExpr& arg = args[first + i];
      if (tag.is_callback()) {
        arg = callback_ref(sig, i, tag, std::move(arg));
      } else {
        check_arg_type(sig, i, tag, arg);
      }
    }
  }

  static CoreExpr callback_ref(const InteropSig& sig, std::size_t index, const TypeTag& tag, CoreExpr arg) {
    SourceSpan span = arg.span;
    if (auto* ref = arg.get_if<VarRef>(); ref != nullptr && ref->scope == Scope::Global)
      return core(CallbackRef{tag.callback, ref->name, std::nullopt}, span);
    if (arg.is<Fn>()) return core(CallbackRef{tag.callback, "", Box<CoreExpr>(std::move(arg))}, span);
    throw Error(ErrorCode::NonStaticCallback,
                sig.label() + " argument " + std::to_string(index) + " (" + tag.callback.str() +
                    ") must be a def'd function or a fn literal",
                span);
  }

  Pattern parse_pattern(const Form& f) {
    if (auto* sym = f.get_if<Symbol>()) {
      if (sym->name.find('/') != std::string::npos || sym->name == "&")
        malformed(f, "unsupported parameter " + sym->name);
      return Pattern{PName{sym->name}};
    }
    if (auto* vec = f.get_if<VecF>()) {
      PSeq seq;
      for (const auto& item : vec->items) seq.items.push_back(parse_pattern(item));
      return Pattern{std::move(seq)};
    }
    malformed(f, "unsupported binding form " + print_form(f));
  }

  CoreExpr expand_fn(const Form& form, const Form& params_form, std::span<const Form> body) {
    auto* params = params_form.get_if<VecF>();
    if (params == nullptr) malformed(params_form, "fn parameters must be a vector");
    Fn fn;
    std::vector<std::string> names;
    for (const auto& p : params->items) {
      fn.params.push_back(parse_pattern(p));
      pattern_names(fn.params.back(), names);
    }
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
      malformed(params_form, "duplicate parameter " + *dup);
    env_.locals.push_back(std::move(names));
    try {
      fn.body = expand_all(body);
    } catch (...) {
      env_.locals.pop_back();
      throw;
    }
    env_.locals.pop_back();
    return core(std::move(fn), form.span);
  }

  CoreExpr expand_let(const Form& form, std::span<const Form> args) {
    if (args.empty()) malformed(form, "let expects a binding vector");
    auto* bindings = args[0].get_if<VecF>();
    if (bindings == nullptr || bindings->items.size() % 2 != 0)
      malformed(args[0], "let bindings must be a vector of name/value pairs");
    Let let;
    env_.locals.emplace_back();
    try {
      for (std::size_t i = 0; i < bindings->items.size(); i += 2) {
        const Form& target = bindings->items[i];
        CoreExpr value = expand(bindings->items[i + 1]);
        Pattern pattern = parse_pattern(target);
        if (auto* name = std::get_if<PName>(&pattern.node)) {
          let.bindings.push_back(LetBinding{name->name, std::move(value)});
          env_.locals.back().push_back(name->name);
          continue;
        }
        std::string tmp = env_.fresh_name('t');
        let.bindings.push_back(LetBinding{tmp, std::move(value)});
        env_.locals.back().push_back(tmp);
        for (auto& b : destructure(pattern, core(VarRef{tmp, Scope::Local}, target.span))) {
          env_.locals.back().push_back(b.name);
          let.bindings.push_back(std::move(b));
        }
      }
      let.body = expand_all(args.subspan(1));
    } catch (...) {
      env_.locals.pop_back();
      throw;
    }
    env_.locals.pop_back();
    return core(std::move(let), form.span);
  }

  /// (doto x f (g a)) => (let [t x] (do (f t) (g t a) t))
  CoreExpr expand_doto(const Form& form, std::span<const Form> args) {
    if (args.empty()) malformed(form, "doto expects a subject");
    CoreExpr subject = expand(args[0]);
    std::string tmp = env_.fresh_name('t');
    auto self = [&] { return core(VarRef{tmp, Scope::Local}, args[0].span); };
    env_.locals.push_back({tmp});
    Do body;
    try {
      for (const auto& step : args.subspan(1)) {
        std::vector<CoreExpr> call_args{self()};
        if (auto* list = step.get_if<ListF>(); list != nullptr && !list->items.empty()) {
          const Form& head = list->items.front();
          if (auto* sym = head.get_if<Symbol>(); sym != nullptr && is_special(sym->name))
            malformed(step, "special form " + sym->name + " cannot be a doto step");
          for (const auto& a : std::span(list->items).subspan(1)) call_args.push_back(expand(a));
          body.exprs.push_back(apply(head, std::move(call_args), step.span));
        } else {
          body.exprs.push_back(apply(step, std::move(call_args), step.span));
        }
      }
    } catch (...) {
      env_.locals.pop_back();
      throw;
    }
    env_.locals.pop_back();
    body.exprs.push_back(self());
    Let let;
    let.bindings.push_back(LetBinding{tmp, std::move(subject)});
    let.body.push_back(core(std::move(body), form.span));
    return core(std::move(let), form.span);
  }

  bool is_special(std::string_view s) const {
    static constexpr std::string_view kSpecial[] = {"native-header", "require", "def", "defn", "fn", "let",
                                                    "do", "if", "when", "doto", "quote"};
    return std::find(std::begin(kSpecial), std::end(kSpecial), s) != std::end(kSpecial);
  }

  CoreExpr quote(const Form& f) {
    if (f.is<Symbol>() || f.is<ListF>()) malformed(f, "quoted symbols and lists are not supported");
    if (auto* vec = f.get_if<VecF>()) {
      VecLit out;
      for (const auto& item : vec->items) out.items.push_back(quote(item));
      return core(std::move(out), f.span);
    }
    if (auto* map = f.get_if<MapF>()) {
      MapLit out;
      for (const auto& [k, v] : map->pairs) out.entries.push_back(MapLitEntry{quote(k), quote(v)});
      return core(std::move(out), f.span);
    }
    return expand(f);
  }

  Env& env_;
  const Registry& reg_;
};

}  // namespace detail

/// Expands one non-top-level form in `env` against `reg`.
inline CoreExpr expand_form(const Form& form, Env& env, const Registry& reg) {
  return detail::Expander(env, reg).expand(form);
}

/// Processes top-level forms in order. native-header, require and A/Ts are
/// executed at compile time and emit nothing; A/Ts extends the registry for
/// the rest of the program only.
inline ExpandResult expand_program(const std::vector<Form>& forms, Registry reg) {
  Env env;
  ExpandResult result;
  for (const auto& form : forms) {
    detail::Expander ex(env, reg);
    auto* list = form.get_if<ListF>();
    const Form* head = list != nullptr && !list->items.empty() ? &list->items.front() : nullptr;

    if (head != nullptr && head->is_symbol("native-header")) {
      if (list->items.size() != 2 || !list->items[1].is<Str>() || list->items[1].as<Str>().value.empty())
        throw Error(ErrorCode::MalformedForm, "native-header expects one non-empty string", form.span);
      if (list->items[1].as<Str>().value.find_first_of("\"\n\\") != std::string::npos)
        throw Error(ErrorCode::MalformedForm, "native-header name cannot contain quotes, backslashes or newlines",
                    list->items[1].span);
      if (env.header)
        throw Error(ErrorCode::DuplicateNativeHeader, "native-header already set to \"" + *env.header + "\"",
                    form.span);
      env.header = list->items[1].as<Str>().value;
      continue;
    }

    if (head != nullptr && head->is_symbol("require")) {
      // (require '[cxx :as ALIAS])
      const VecF* spec = nullptr;
      if (list->items.size() == 2) {
        if (auto* q = list->items[1].get_if<ListF>(); q && q->items.size() == 2 && q->items[0].is_symbol("quote"))
          spec = q->items[1].get_if<VecF>();
      }
      if (spec == nullptr || spec->items.size() != 3 || !spec->items[0].is<Symbol>() ||
          spec->items[1].get_if<Keyword>() == nullptr || *spec->items[1].get_if<Keyword>() != Keyword{"as"} ||
          !spec->items[2].is<Symbol>())
        throw Error(ErrorCode::MalformedForm, "require expects '[lib :as alias]", form.span);
      const std::string& target = spec->items[0].as<Symbol>().name;
      if (target != "cxx")
        throw Error(ErrorCode::BadRequireTarget, "cannot require " + target + "; only cxx is available",
                    spec->items[0].span);
      const std::string& alias = spec->items[2].as<Symbol>().name;
      if (alias.find('/') != std::string::npos)
        throw Error(ErrorCode::MalformedForm, "alias must be an unqualified symbol", spec->items[2].span);
      env.aliases.insert(alias);
      continue;
    }

    if (head != nullptr) {
      if (auto member = ex.alias_member(*head); member && *member == "Ts") {
        if (list->items.size() != 3 && list->items.size() != 4)
          throw Error(ErrorCode::MalformedForm, "schema registration expects [key] [args] and an optional spec",
                      form.span);
        const Form* spec = list->items.size() == 4 ? &list->items[3] : nullptr;
        reg = register_inline(std::move(reg), list->items[1], list->items[2], spec);
        continue;
      }
      if (head->is_symbol("def")) {
        result.exprs.push_back(ex.expand_def(form, *list));
        continue;
      }
      if (head->is_symbol("defn")) {
        result.exprs.push_back(ex.expand_defn(form, *list));
        continue;
      }
    }
    result.exprs.push_back(ex.expand(form));
  }
  result.registry = std::move(reg);
  result.header = env.header;
  return result;
}

}  // namespace roo
