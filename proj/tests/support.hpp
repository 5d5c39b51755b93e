#pragma once

#include <gtest/gtest.h>

#include <functional>
#include <string>
#include <vector>

#include "roo/driver.hpp"

namespace roo::test {

inline std::string source_path(const std::string& rel) { return std::string(ROO_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& rel) { return read_file(source_path(rel)); }

inline const Registry& default_registry() {
  static const Registry reg = load_registry_text(slurp("schemas/malli_types.edn"), "malli_types.edn");
  return reg;
}

inline Registry registry_from(std::string_view text) { return load_registry_text(text, "schemas.edn"); }

inline ExpandResult expand_text(std::string_view program, const Registry& reg = default_registry()) {
  return expand_program(read_all(program, "test.clj"), reg);
}

inline std::string emit_text(std::string_view program, const Registry& reg = default_registry()) {
  auto r = expand_text(program, reg);
  EmitOptions opts;
  opts.header = r.header.value_or("");
  return emit_program(r.exprs, opts);
}

/// Runs `body` and returns the code of the roo::Error it throws.
inline std::optional<ErrorCode> error_code_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Error capture_error(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected a roo::Error";
  return Error(ErrorCode::MalformedForm, "none");
}

/// Every line of `text` containing `needle`.
inline std::vector<std::string> lines_containing(const std::string& text, const std::string& needle) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    if (line.find(needle) != std::string::npos) out.push_back(line);
    pos = eol + 1;
  }
  return out;
}

inline std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace roo::test
