// Runtime support for translation units generated by roocc.
//
// Header-only, standard library only, C++17. Generated programs are
// single-threaded; nothing here synchronizes.
//
// Value model: nil, boolean, integer, double, text, keyword, sequence, map
// (ordered pairs), handle (class tag + native address), array view
// (read-only double*), function, callback slot.

#ifndef ROO_SUPPORT_HPP
#define ROO_SUPPORT_HPP

#include <array>
#include <charconv>
#include <climits>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace roo_rt {

class Value;

/// Read-only view over call arguments.
struct Args {
  const Value* data = nullptr;
  std::size_t size = 0;
  const Value& operator[](std::size_t i) const;
};

using Captures = std::vector<Value>;
using NativeFn = Value (*)(const Captures&, Args);
using CallbackPtr = double (*)(double*, double*);

struct KeywordId {
  std::uint32_t id;
};

struct Handle {
  std::string tag;
  void* address;
};

/// Unbounded view of a native double array; indexed reads only.
struct ArrayView {
  const double* base;
};

/// Arity of functions that accept any number of arguments.
inline constexpr std::size_t kVariadic = SIZE_MAX;

struct Function {
  NativeFn fn;
  std::size_t arity;
  Captures captures;
};

struct CallbackSlot {
  std::size_t slot;
};

struct MapData;

class Value {
 public:
  using Data = std::variant<std::monostate, bool, long long, double, std::shared_ptr<const std::string>, KeywordId,
                            std::shared_ptr<const std::vector<Value>>, std::shared_ptr<const MapData>,
                            std::shared_ptr<const Handle>, ArrayView, std::shared_ptr<const Function>, CallbackSlot>;

  Value() = default;
  template <class T, class = std::enable_if_t<std::is_same_v<T, bool>>>
  explicit Value(T b) : data_(b) {}
  explicit Value(Data d) : data_(std::move(d)) {}

  const Data& data() const { return data_; }
  template <class T>
  const T* get_if() const { return std::get_if<T>(&data_); }
  bool is_nil() const { return std::holds_alternative<std::monostate>(data_); }

 private:
  Data data_;
};

struct MapData {
  std::vector<std::pair<Value, Value>> entries;
};

inline const Value& Args::operator[](std::size_t i) const { return data[i]; }

[[noreturn]] inline void abort(const std::string& message) {
  std::fflush(stdout);
  std::fprintf(stderr, "roo runtime error: %s\n", message.c_str());
  std::exit(1);
}

// ---------------------------------------------------------------------------
// construction

inline Value integer(long long i) { return Value(Value::Data(i)); }
inline Value number(double d) { return Value(Value::Data(d)); }
inline Value text(const char* s) { return Value(Value::Data(std::make_shared<const std::string>(s))); }
inline Value text(std::string s) { return Value(Value::Data(std::make_shared<const std::string>(std::move(s)))); }

namespace detail {

struct KeywordTable {
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::string> names;
};

inline KeywordTable& keywords() {
  static KeywordTable table;
  return table;
}

}  // namespace detail

/// Interned keyword; `name` is the qualified name without the leading colon.
inline Value kw(const char* name) {
  auto& t = detail::keywords();
  auto it = t.ids.find(name);
  if (it == t.ids.end()) {
    it = t.ids.emplace(name, static_cast<std::uint32_t>(t.names.size())).first;
    t.names.emplace_back(name);
  }
  return Value(Value::Data(KeywordId{it->second}));
}

inline const std::string& keyword_name(KeywordId k) { return detail::keywords().names[k.id]; }

inline Value vec(std::initializer_list<Value> items) {
  return Value(Value::Data(std::make_shared<const std::vector<Value>>(items)));
}

inline Value map(std::initializer_list<std::pair<Value, Value>> entries) {
  auto m = std::make_shared<MapData>();
  m->entries.assign(entries.begin(), entries.end());
  return Value(Value::Data(std::shared_ptr<const MapData>(std::move(m))));
}

inline Value make_fn(NativeFn fn, std::size_t arity, Captures captures) {
  return Value(Value::Data(std::make_shared<const Function>(Function{fn, arity, std::move(captures)})));
}

/// The handle's tag is fixed at construction. Native objects are never
/// deleted.
inline Value make_handle(const char* tag, void* address) {
  return Value(Value::Data(std::make_shared<const Handle>(Handle{tag, address})));
}

inline Value array_view(double* base) { return Value(Value::Data(ArrayView{base})); }

// ---------------------------------------------------------------------------
// formatting

/// Shortest decimal text that parses back to the same double ("6", "0.5").
inline std::string format_double(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

std::string to_display(const Value& v);

/// Readable rendering: strings quoted.
inline std::string to_repr(const Value& v) {
  if (auto s = v.get_if<std::shared_ptr<const std::string>>()) {
    std::string out = "\"";
    for (char c : **s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  }
  return to_display(v);
}

/// `str`-style rendering: strings raw.
inline std::string to_display(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "nil"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(const std::shared_ptr<const std::string>& s) const { return *s; }
    std::string operator()(KeywordId k) const { return ":" + keyword_name(k); }
    std::string operator()(const std::shared_ptr<const std::vector<Value>>& xs) const {
      std::string out = "[";
      for (std::size_t i = 0; i < xs->size(); ++i) out += (i ? " " : "") + to_repr((*xs)[i]);
      return out + "]";
    }
    std::string operator()(const std::shared_ptr<const MapData>& m) const {
      std::string out = "{";
      for (std::size_t i = 0; i < m->entries.size(); ++i)
        out += (i ? ", " : "") + to_repr(m->entries[i].first) + " " + to_repr(m->entries[i].second);
      return out + "}";
    }
    std::string operator()(const std::shared_ptr<const Handle>& h) const {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%p", h->address);
      return "(\"" + h->tag + "\" " + buf + ")";
    }
    std::string operator()(ArrayView) const { return "#array-view"; }
    std::string operator()(const std::shared_ptr<const Function>&) const { return "#function"; }
    std::string operator()(CallbackSlot c) const { return "#callback-" + std::to_string(c.slot); }
  };
  return std::visit(Visitor{}, v.data());
}

// ---------------------------------------------------------------------------
// predicates and access

/// nil and false are falsy; everything else is truthy.
inline bool truthy(const Value& v) {
  if (v.is_nil()) return false;
  if (auto b = v.get_if<bool>()) return *b;
  return true;
}

inline bool equal(const Value& a, const Value& b);

namespace detail {

inline bool same_keyword(const Value& a, const Value& b) {
  auto x = a.get_if<KeywordId>();
  auto y = b.get_if<KeywordId>();
  return x && y && x->id == y->id;
}

}  // namespace detail

/// Map lookup; nil for absent keys and for non-map values (including nil).
inline Value get(const Value& m, const Value& key) {
  auto map = m.get_if<std::shared_ptr<const MapData>>();
  if (map == nullptr) return Value();
  for (const auto& [k, v] : (*map)->entries)
    if (equal(k, key)) return v;
  return Value();
}

/// Positional read. Sequences yield nil past the end; array views carry no
/// length and are read unchecked.
inline Value nth(const Value& v, std::size_t i) {
  if (auto xs = v.get_if<std::shared_ptr<const std::vector<Value>>>()) return i < (*xs)->size() ? (**xs)[i] : Value();
  if (auto a = v.get_if<ArrayView>()) return number(a->base[i]);
  if (v.is_nil()) return Value();
  abort("nth on non-sequential value " + to_display(v));
}

inline bool equal(const Value& a, const Value& b) {
  if (a.data().index() != b.data().index()) return false;
  struct Visitor {
    const Value& other;
    bool operator()(std::monostate) const { return true; }
    bool operator()(bool x) const { return x == *other.get_if<bool>(); }
    bool operator()(long long x) const { return x == *other.get_if<long long>(); }
    bool operator()(double x) const { return x == *other.get_if<double>(); }
    bool operator()(const std::shared_ptr<const std::string>& x) const {
      return *x == **other.get_if<std::shared_ptr<const std::string>>();
    }
    bool operator()(KeywordId x) const { return x.id == other.get_if<KeywordId>()->id; }
    bool operator()(const std::shared_ptr<const std::vector<Value>>& x) const {
      const auto& y = **other.get_if<std::shared_ptr<const std::vector<Value>>>();
      if (x->size() != y.size()) return false;
      for (std::size_t i = 0; i < y.size(); ++i)
        if (!equal((*x)[i], y[i])) return false;
      return true;
    }
    bool operator()(const std::shared_ptr<const MapData>& x) const {
      const auto& y = **other.get_if<std::shared_ptr<const MapData>>();
      if (x->entries.size() != y.entries.size()) return false;
      for (const auto& [k, v] : x->entries) {
        bool found = false;
        for (const auto& [k2, v2] : y.entries)
          if (equal(k, k2)) {
            found = equal(v, v2);
            break;
          }
        if (!found) return false;
      }
      return true;
    }
    bool operator()(const std::shared_ptr<const Handle>& x) const {
      const auto& y = **other.get_if<std::shared_ptr<const Handle>>();
      return x->tag == y.tag && x->address == y.address;
    }
    bool operator()(ArrayView x) const { return x.base == other.get_if<ArrayView>()->base; }
    bool operator()(const std::shared_ptr<const Function>& x) const {
      return x == *other.get_if<std::shared_ptr<const Function>>();
    }
    bool operator()(CallbackSlot x) const { return x.slot == other.get_if<CallbackSlot>()->slot; }
  };
  return std::visit(Visitor{b}, a.data());
}

// ---------------------------------------------------------------------------
// conversions at the native boundary

inline double to_double(const Value& v) {
  if (auto d = v.get_if<double>()) return *d;
  if (auto i = v.get_if<long long>()) return static_cast<double>(*i);
  abort("expected a number, got " + to_repr(v));
}

inline int to_int(const Value& v) {
  auto i = v.get_if<long long>();
  if (i == nullptr) abort("expected an integer, got " + to_repr(v));
  if (*i < INT_MIN || *i > INT_MAX) abort("integer out of int range: " + std::to_string(*i));
  return static_cast<int>(*i);
}

inline bool to_bool(const Value& v) {
  auto b = v.get_if<bool>();
  if (b == nullptr) abort("expected a boolean, got " + to_repr(v));
  return *b;
}

/// NUL-terminated view valid while `v` is alive.
inline const char* to_cstr(const Value& v) {
  auto s = v.get_if<std::shared_ptr<const std::string>>();
  if (s == nullptr) abort("expected a string, got " + to_repr(v));
  return (*s)->c_str();
}

/// Native address of a handle created for class `tag`.
inline void* handle_ptr(const Value& v, const char* tag) {
  auto h = v.get_if<std::shared_ptr<const Handle>>();
  if (h == nullptr) abort(std::string("expected a ") + tag + " handle, got " + to_repr(v));
  if ((*h)->tag != tag) abort(std::string("expected a ") + tag + " handle, got a " + (*h)->tag + " handle");
  if ((*h)->address == nullptr) abort(std::string("null ") + tag + " handle");
  return (*h)->address;
}

// ---------------------------------------------------------------------------
// calls and callbacks

inline constexpr std::size_t kCallbackSlots = 16;

struct CallbackEntry {
  Value target;
  CallbackPtr trampoline = nullptr;
};

inline std::array<CallbackEntry, kCallbackSlots>& callback_table() {
  static std::array<CallbackEntry, kCallbackSlots> table;
  return table;
}

Value invoke(const Value& f, std::initializer_list<Value> args);

inline Value invoke_args(const Value& f, Args args) {
  if (auto fn = f.get_if<std::shared_ptr<const Function>>()) {
    if ((*fn)->arity != kVariadic && (*fn)->arity != args.size)
      abort("wrong number of arguments: expected " + std::to_string((*fn)->arity) + ", got " +
            std::to_string(args.size));
    return (*fn)->fn((*fn)->captures, args);
  }
  if (auto cb = f.get_if<CallbackSlot>()) return invoke_args(callback_table()[cb->slot].target, args);
  abort("cannot call " + to_repr(f));
}

inline Value invoke(const Value& f, std::initializer_list<Value> args) {
  return invoke_args(f, Args{args.begin(), args.size()});
}

/// Binds `target` to a slot before the native code that receives the
/// trampoline runs; the result stands for the slot.
inline Value cb_bind(std::size_t slot, const Value& target, CallbackPtr trampoline) {
  if (slot >= kCallbackSlots) abort("callback slot out of range");
  if (!target.get_if<std::shared_ptr<const Function>>() && !target.get_if<CallbackSlot>())
    abort("callback target is not a function: " + to_repr(target));
  callback_table()[slot] = CallbackEntry{target, trampoline};
  return Value(Value::Data(CallbackSlot{slot}));
}

inline const Value& cb_target(std::size_t slot) { return callback_table()[slot].target; }

inline CallbackPtr cb_pointer(const Value& v) {
  auto cb = v.get_if<CallbackSlot>();
  if (cb == nullptr) abort("expected a statically bound callback, got " + to_repr(v));
  return callback_table()[cb->slot].trampoline;
}

inline double cb_invoke(std::size_t slot, double* arr, double* par) {
  return to_double(invoke(cb_target(slot), {array_view(arr), array_view(par)}));
}

// ---------------------------------------------------------------------------
// arithmetic

namespace detail {

inline bool all_integers(std::initializer_list<Value> xs) {
  for (const auto& x : xs)
    if (!x.get_if<long long>()) return false;
  return true;
}

template <class IntOp, class DblOp>
Value fold(const char* name, std::initializer_list<Value> xs, IntOp iop, DblOp dop) {
  auto it = xs.begin();
  if (all_integers(xs)) {
    long long acc = *it->get_if<long long>();
    for (++it; it != xs.end(); ++it) acc = iop(acc, *it->get_if<long long>());
    return integer(acc);
  }
  for (const auto& x : xs)
    if (!x.get_if<long long>() && !x.get_if<double>()) abort(std::string(name) + " expects numbers, got " + to_repr(x));
  double acc = to_double(*it);
  for (++it; it != xs.end(); ++it) acc = dop(acc, to_double(*it));
  return number(acc);
}

}  // namespace detail

inline Value add(std::initializer_list<Value> xs) {
  if (xs.size() == 0) return integer(0);
  return detail::fold("+", xs, [](long long a, long long b) { return a + b; }, [](double a, double b) { return a + b; });
}

inline Value mul(std::initializer_list<Value> xs) {
  if (xs.size() == 0) return integer(1);
  return detail::fold("*", xs, [](long long a, long long b) { return a * b; }, [](double a, double b) { return a * b; });
}

inline Value sub(std::initializer_list<Value> xs) {
  if (xs.size() == 0) abort("- expects at least one argument");
  if (xs.size() == 1) return sub({integer(0), *xs.begin()});
  return detail::fold("-", xs, [](long long a, long long b) { return a - b; }, [](double a, double b) { return a - b; });
}

/// Division always yields a double.
inline Value div(std::initializer_list<Value> xs) {
  if (xs.size() == 0) abort("/ expects at least one argument");
  if (xs.size() == 1) return number(1.0 / to_double(*xs.begin()));
  auto it = xs.begin();
  double acc = to_double(*it);
  for (++it; it != xs.end(); ++it) acc /= to_double(*it);
  return number(acc);
}

inline Value eq(std::initializer_list<Value> xs) {
  if (xs.size() == 0) abort("= expects at least one argument");
  for (auto it = xs.begin() + 1; it != xs.end(); ++it)
    if (!equal(*xs.begin(), *it)) return Value(false);
  return Value(true);
}

// ---------------------------------------------------------------------------
// runtime validation

inline constexpr long long kNoMax = LLONG_MAX;

/// Text value whose length in Unicode scalar values lies in [min, max].
inline bool check_string_len(const Value& v, long long min, long long max) {
  auto s = v.get_if<std::shared_ptr<const std::string>>();
  if (s == nullptr) return false;
  long long n = 0;
  for (unsigned char c : **s)
    if ((c & 0xC0) != 0x80) ++n;
  return n >= min && n <= max;
}

inline Value make_mismatch(const Value& option) { return map({{kw("mismatch"), option}}); }

struct StringLenCheck {
  Value option;
  long long min;
  long long max;
};

/// nil when every option passes, otherwise {:mismatch <first failing option>}.
inline Value validate_options(const Value& options, std::initializer_list<StringLenCheck> checks) {
  for (const auto& c : checks)
    if (!check_string_len(get(options, c.option), c.min, c.max)) return make_mismatch(c.option);
  return Value();
}

// ---------------------------------------------------------------------------
// prelude functions

namespace detail {

inline Value str_fn(const Captures&, Args args) {
  std::string out;
  for (std::size_t i = 0; i < args.size; ++i)
    if (!args[i].is_nil()) out += to_display(args[i]);
  return text(std::move(out));
}

inline Value println_fn(const Captures&, Args args) {
  std::string out;
  for (std::size_t i = 0; i < args.size; ++i) out += (i ? " " : "") + to_display(args[i]);
  std::printf("%s\n", out.c_str());
  return Value();
}

inline Value variadic(NativeFn fn) { return make_fn(fn, kVariadic, {}); }

}  // namespace detail

inline Value prelude(const char* name) {
  static const std::unordered_map<std::string, NativeFn> fns{{"str", &detail::str_fn},
                                                             {"println", &detail::println_fn}};
  auto it = fns.find(name);
  if (it == fns.end()) abort(std::string("unknown prelude function ") + name);
  return detail::variadic(it->second);
}

}  // namespace roo_rt

#endif  // ROO_SUPPORT_HPP
