#pragma once

// Reader for the Lisp dialect and the EDN-style schema files.
//
// Grammar (subset of EDN/Clojure):
//   form    := list | vector | map | string | 'form | atom
//   atom    := nil | true | false | number | :keyword | ::keyword | symbol
//   number  := [+-]? digit+ ( '.' digit* )? ( [eE] [+-]? digit+ )?
// Whitespace and commas separate forms, `;` starts a line comment.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "roo/error.hpp"
#include "roo/form.hpp"

namespace roo {

namespace detail {

inline bool is_separator(char c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\r': case '\f': case '\v': case ',':
      return true;
    default:
      return false;
  }
}

inline bool is_terminator(char c) {
  switch (c) {
    case '(': case ')': case '[': case ']': case '{': case '}': case '"': case ';':
      return true;
    default:
      return is_separator(c);
  }
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

/// Characters allowed in symbol and keyword names (besides the single `/`).
inline bool is_name_char(char c) {
  if (is_alpha(c) || is_digit(c)) return true;
  switch (c) {
    case '*': case '+': case '!': case '-': case '_': case '?':
    case '<': case '>': case '=': case '.': case '$': case '%': case '&':
      return true;
    default:
      return false;
  }
}

inline bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_name_char(c)) return false;
  return true;
}

/// True when `tok` has the lexical shape of a number literal; `is_double`
/// reports whether it has a fraction part or exponent.
inline bool number_shape(std::string_view tok, bool& is_double) {
  std::size_t i = 0;
  is_double = false;
  if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < tok.size() && is_digit(tok[i])) ++i, ++digits;
  if (digits == 0) return false;
  if (i < tok.size() && tok[i] == '.') {
    is_double = true;
    ++i;
    while (i < tok.size() && is_digit(tok[i])) ++i;
  }
  if (i < tok.size() && (tok[i] == 'e' || tok[i] == 'E')) {
    is_double = true;
    ++i;
    if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < tok.size() && is_digit(tok[i])) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == tok.size();
}

inline bool looks_numeric(std::string_view tok) {
  if (tok.empty()) return false;
  if (is_digit(tok[0])) return true;
  return tok.size() > 1 && (tok[0] == '+' || tok[0] == '-') && is_digit(tok[1]);
}

class Reader {
 public:
  Reader(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Form> read_all() {
    std::vector<Form> out;
    for (;;) {
      skip_separators();
      if (eof()) break;
      char c = peek();
      if (c == ')' || c == ']' || c == '}') {
        auto m = mark();
        advance();
        throw Error(ErrorCode::UnbalancedDelimiter, std::string("unexpected '") + c + "'", span_from(m));
      }
      out.push_back(read_form());
    }
    return out;
  }

 private:
  struct Mark {
    std::size_t pos, line, col;
  };

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  Mark mark() const { return {pos_, line_, col_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  SourceSpan span_from(const Mark& m) const { return SourceSpan{file_, m.pos, pos_, m.line, m.col}; }
  SourceSpan point(const Mark& m) const { return SourceSpan{file_, m.pos, m.pos + 1, m.line, m.col}; }

  void skip_separators() {
    while (!eof()) {
      char c = peek();
      if (c == ';') {
        while (!eof() && peek() != '\n') advance();
      } else if (is_separator(c)) {
        advance();
      } else {
        break;
      }
    }
  }

  Form read_form() {
    auto m = mark();
    char c = peek();
    switch (c) {
      case '(': {
        advance();
        ListF list{read_seq(m, ')')};
        return make_form(std::move(list), span_from(m));
      }
      case '[': {
        advance();
        VecF vec{read_seq(m, ']')};
        return make_form(std::move(vec), span_from(m));
      }
      case '{': {
        advance();
        auto items = read_seq(m, '}');
        if (items.size() % 2 != 0)
          throw Error(ErrorCode::OddMapLiteral, "map literal has an odd number of forms", span_from(m));
        MapF map;
        map.pairs.reserve(items.size() / 2);
        for (std::size_t i = 0; i < items.size(); i += 2)
          map.pairs.push_back(MapEntry{std::move(items[i]), std::move(items[i + 1])});
        return make_form(std::move(map), span_from(m));
      }
      case ')': case ']': case '}': {
        advance();
        throw Error(ErrorCode::UnbalancedDelimiter, std::string("unexpected '") + c + "'", span_from(m));
      }
      case '"':
        return read_string(m);
      case '\'': {
        advance();
        skip_separators();
        if (eof()) throw Error(ErrorCode::InvalidToken, "quote at end of input", point(m));
        Form quoted = read_form();
        ListF list;
        list.items.push_back(make_form(Symbol{"quote"}, point(m)));
        list.items.push_back(std::move(quoted));
        return make_form(std::move(list), span_from(m));
      }
      default:
        return read_atom(m);
    }
  }

  std::vector<Form> read_seq(const Mark& opener, char closer) {
    std::vector<Form> items;
    for (;;) {
      skip_separators();
      if (eof()) {
        throw Error(ErrorCode::UnbalancedDelimiter,
                    std::string("unterminated '") + text_[opener.pos] + "'", point(opener));
      }
      char c = peek();
      if (c == closer) {
        advance();
        return items;
      }
      if (c == ')' || c == ']' || c == '}') {
        throw Error(ErrorCode::UnbalancedDelimiter,
                    std::string("'") + text_[opener.pos] + "' closed by '" + c + "'", point(opener));
      }
      items.push_back(read_form());
    }
  }

  Form read_string(const Mark& m) {
    advance();  // opening quote
    std::string value;
    for (;;) {
      if (eof()) throw Error(ErrorCode::UnbalancedDelimiter, "unterminated string", point(m));
      char c = peek();
      if (c == '"') {
        advance();
        return make_form(Str{std::move(value)}, span_from(m));
      }
      if (c == '\\') {
        auto esc = mark();
        advance();
        if (eof()) throw Error(ErrorCode::UnbalancedDelimiter, "unterminated string", point(m));
        char e = peek();
        advance();
        switch (e) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default:
            throw Error(ErrorCode::InvalidToken, std::string("unsupported escape '\\") + e + "'", span_from(esc));
        }
        continue;
      }
      value += c;
      advance();
    }
  }

  Form read_atom(const Mark& m) {
    while (!eof() && !is_terminator(peek())) advance();
    std::string_view tok = text_.substr(m.pos, pos_ - m.pos);
    SourceSpan span = span_from(m);
    auto invalid = [&](std::string_view why) {
      return Error(ErrorCode::InvalidToken, "invalid token '" + std::string(tok) + "': " + std::string(why), span);
    };

    if (tok == "nil") return make_form(Nil{}, span);
    if (tok == "true") return make_form(Bool{true}, span);
    if (tok == "false") return make_form(Bool{false}, span);
    if (tok == "##Inf") return make_form(Dbl{std::numeric_limits<double>::infinity()}, span);
    if (tok == "##-Inf") return make_form(Dbl{-std::numeric_limits<double>::infinity()}, span);
    if (tok == "##NaN") return make_form(Dbl{std::numeric_limits<double>::quiet_NaN()}, span);

    if (tok.starts_with("::")) {
      std::string_view name = tok.substr(2);
      if (!valid_name(name)) throw invalid("bad auto-namespaced keyword");
      return make_form(Keyword{"user", std::string(name)}, span);
    }
    if (tok.starts_with(':')) {
      std::string_view body = tok.substr(1);
      auto slash = body.find('/');
      if (slash == std::string_view::npos) {
        if (!valid_name(body)) throw invalid("bad keyword");
        return make_form(Keyword{std::string(body)}, span);
      }
      std::string_view ns = body.substr(0, slash);
      std::string_view name = body.substr(slash + 1);
      if (!valid_name(ns) || !valid_name(name)) throw invalid("bad keyword");
      return make_form(Keyword{std::string(ns), std::string(name)}, span);
    }

    if (looks_numeric(tok)) {
      bool is_double = false;
      if (!number_shape(tok, is_double)) throw invalid("malformed number");
      std::string_view digits = tok[0] == '+' ? tok.substr(1) : tok;
      const char* first = digits.data();
      const char* last = digits.data() + digits.size();
      if (is_double) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || !std::isfinite(v)) throw invalid("double out of range");
        return make_form(Dbl{v}, span);
      }
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr != last) throw invalid("integer out of range");
      return make_form(Int{v}, span);
    }

    if (tok == "/") return make_form(Symbol{"/"}, span);
    auto slash = tok.find('/');
    if (slash != std::string_view::npos) {
      std::string_view ns = tok.substr(0, slash);
      std::string_view name = tok.substr(slash + 1);
      if (!valid_name(ns) || !valid_name(name) || is_digit(ns[0]))
        throw invalid("bad qualified symbol");
      return make_form(Symbol{std::string(tok)}, span);
    }
    if (!valid_name(tok)) throw invalid("unexpected character");
    return make_form(Symbol{std::string(tok)}, span);
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline void print_string_literal(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c; break;
    }
  }
  out += '"';
}

inline void print_into(std::string& out, const Form& form);

template <class Items>
void print_items(std::string& out, const Items& items, char open, char close) {
  out += open;
  bool first = true;
  for (const auto& f : items) {
    if (!first) out += ' ';
    first = false;
    print_into(out, f);
  }
  out += close;
}

}  // namespace detail

/// Shortest decimal text that reads back as the same double. Always
/// contains a '.' or an exponent so the reader keeps it a double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "##NaN";
  if (std::isinf(v)) return v > 0 ? "##Inf" : "##-Inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

/// Parse every top-level form of `text`. Errors carry `file_label` spans.
inline std::vector<Form> read_all(std::string_view text, std::string_view file_label = "<input>") {
  return detail::Reader(text, std::string(file_label)).read_all();
}

namespace detail {

inline void print_into(std::string& out, const Form& form) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Symbol>) {
          out += node.name;
        } else if constexpr (std::is_same_v<T, Keyword>) {
          out += node.str();
        } else if constexpr (std::is_same_v<T, Str>) {
          print_string_literal(out, node.value);
        } else if constexpr (std::is_same_v<T, Int>) {
          out += std::to_string(node.value);
        } else if constexpr (std::is_same_v<T, Dbl>) {
          out += format_double(node.value);
        } else if constexpr (std::is_same_v<T, Bool>) {
          out += node.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, Nil>) {
          out += "nil";
        } else if constexpr (std::is_same_v<T, ListF>) {
          if (node.items.size() == 2 && node.items[0].is_symbol("quote")) {
            out += '\'';
            print_into(out, node.items[1]);
          } else {
            print_items(out, node.items, '(', ')');
          }
        } else if constexpr (std::is_same_v<T, VecF>) {
          print_items(out, node.items, '[', ']');
        } else if constexpr (std::is_same_v<T, MapF>) {
          out += '{';
          bool first = true;
          for (const auto& [k, v] : node.pairs) {
            if (!first) out += ' ';
            first = false;
            print_into(out, k);
            out += ' ';
            print_into(out, v);
          }
          out += '}';
        }
      },
      form.data);
}

}  // namespace detail

/// Canonical single-line rendering; `read_all(print_form(f))` yields `[f]`.
inline std::string print_form(const Form& form) {
  std::string out;
  detail::print_into(out, form);
  return out;
}

}  // namespace roo
