#pragma once

// read -> load registry -> expand -> emit, with the exit-code contract of the
// command-line tool:
//   0 success, 1 usage, 2 read/parse, 3 schema, 4 expansion/static check, 5 I/O.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "roo/codegen.hpp"
#include "roo/core.hpp"
#include "roo/error.hpp"
#include "roo/expander.hpp"
#include "roo/reader.hpp"
#include "roo/schema.hpp"

namespace roo {

enum class EmitStage { Forms, Core, Cxx };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 5;

struct BuildConfig {
  std::string input_path;
  std::string schema_path;
  std::string output_path = "-";
  EmitStage stage = EmitStage::Cxx;
  std::string entry_name = "main";
};

class IoError : public std::runtime_error {
 public:
  IoError(std::string path, const std::string& what) : std::runtime_error(what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path, "read failed");
  return ss.str();
}

/// Writes to a sibling temporary and renames it into place, so a failed
/// build never leaves a partial output file.
inline void write_file_atomic(const std::string& path, std::string_view data) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open file for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError(path, "write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(path, "cannot rename temporary output: " + ec.message());
  }
}

/// Parses a schema file; it must contain exactly one map form.
inline Registry load_registry_text(std::string_view text, std::string_view label) {
  auto forms = read_all(text, label);
  if (forms.size() != 1) {
    SourceSpan at{std::string(label), 0, 0, 1, 1};
    if (forms.size() > 1) at = forms[1].span;
    throw Error(ErrorCode::MalformedSchemaFile, "schema file must contain exactly one map, found " +
                                                    std::to_string(forms.size()) + " forms",
                at);
  }
  return load_registry(forms.front());
}

struct Compilation {
  std::vector<Form> forms;
  ExpandResult expanded;
};

inline Compilation compile_to_core(std::string_view program, std::string_view label, const Registry& reg) {
  Compilation c;
  c.forms = read_all(program, label);
  c.expanded = expand_program(c.forms, reg);
  return c;
}

inline std::string render_forms(const std::vector<Form>& forms) {
  std::string out;
  for (const auto& f : forms) out += print_form(f) + "\n";
  return out;
}

inline std::string render_core(const std::vector<CoreExpr>& exprs) {
  std::string out;
  for (const auto& e : exprs) out += print_core(e) + "\n";
  return out;
}

inline std::string render_cxx(const Compilation& c, const std::string& entry_name) {
  EmitOptions opts;
  opts.header = c.expanded.header.value_or("");
  opts.entry_name = entry_name;
  return emit_program(c.expanded.exprs, opts);
}

namespace detail {

/// Runs `body`, translating the first error into a diagnostic and exit code.
template <class Body>
int run_guarded(const std::string& fallback_file, std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (Error& e) {
    e.at(SourceSpan{fallback_file, 0, 0, 1, 1});
    err << e.diagnostic() << "\n";
    return exit_code_for(e.code());
  } catch (const IoError& e) {
    err << e.path() << ":0:0: IoError: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace detail

/// `build <input> --schemas <file> -o <out> [--emit forms|core|cxx]`.
/// Output "-" goes to `out`.
inline int cmd_build(const BuildConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(cfg.input_path, err, [&] {
    std::string program = read_file(cfg.input_path);
    std::string schema_text = read_file(cfg.schema_path);
    std::string result;
    if (cfg.stage == EmitStage::Forms) {
      result = render_forms(read_all(program, cfg.input_path));
    } else {
      Registry reg = load_registry_text(schema_text, cfg.schema_path);
      Compilation c = compile_to_core(program, cfg.input_path, reg);
      result = cfg.stage == EmitStage::Core ? render_core(c.expanded.exprs) : render_cxx(c, cfg.entry_name);
    }
    if (cfg.output_path == "-") {
      out << result;
    } else {
      write_file_atomic(cfg.output_path, result);
    }
    return kExitOk;
  });
}

/// Runs every stage except emission; prints "OK: N top-level expressions, M schemas".
inline int cmd_check(const std::string& input_path, const std::string& schema_path, std::ostream& out,
                     std::ostream& err) {
  return detail::run_guarded(input_path, err, [&] {
    std::string program = read_file(input_path);
    Registry reg = load_registry_text(read_file(schema_path), schema_path);
    Compilation c = compile_to_core(program, input_path, reg);
    out << "OK: " << c.expanded.exprs.size() << " top-level expressions, " << c.expanded.registry.schemas.size()
        << " schemas\n";
    return kExitOk;
  });
}

}  // namespace roo
