// Acceptance suite: one PASS/FAIL line per primary criterion. Needs no C++
// compiler at run time; exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gen.hpp"
#include "roo/driver.hpp"

namespace {

namespace fs = std::filesystem;
using namespace roo;

/// Thrown by `require` to fail the current criterion with a reason.
struct Unmet {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Unmet{why};
}

std::string source(const std::string& rel) { return std::string(ROO_SOURCE_DIR) + "/" + rel; }

const Registry& shipped_registry() {
  static const Registry reg = load_registry_text(read_file(source("schemas/malli_types.edn")), "malli_types.edn");
  return reg;
}

std::string emit(std::string_view program, const Registry& reg) {
  ExpandResult r = expand_program(read_all(program, "input.clj"), reg);
  EmitOptions opts;
  opts.header = r.header.value_or("");
  return emit_program(r.exprs, opts);
}

std::vector<std::string> lines_with(const std::string& text, const std::string& needle) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.find(needle) != std::string::npos) out.push_back(line);
  return out;
}

std::vector<fs::path> program_files() {
  std::vector<fs::path> files;
  for (const char* dir : {"fixtures/listings", "fixtures/e2e"})
    for (const auto& e : fs::directory_iterator(source(dir)))
      if (e.path().extension() == ".clj") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

using Clock = std::chrono::steady_clock;

void within_one_second(Clock::time_point start) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  require(ms < 1000, "took " + std::to_string(ms) + " ms");
}

// ---------------------------------------------------------------------------

void tutorial_static_half() {
  auto start = Clock::now();
  std::string program = read_file(source("fixtures/e2e/tutorial.clj"));
  std::string first = emit(program, shipped_registry());
  std::string second = emit(program, shipped_registry());
  require(first == second, "two builds differ");
  require(first.find("int main() {") != std::string::npos, "no entry function");
  require(first.find("#include \"ROOT.h\"") != std::string::npos, "native header missing");
  require(first.find("new TCanvas()") != std::string::npos, "canvas construction missing");
  require(first.find("self->Draw()") != std::string::npos, "Draw call missing");
  require(first.find("roo_trampoline_0") != std::string::npos, "callback trampoline missing");
  within_one_second(start);
}

void interop_forms(const Form& f, const std::string& alias, std::vector<Form>& out) {
  if (auto* l = f.get_if<ListF>()) {
    if (!l->items.empty() && l->items[0].is_symbol(alias + "/T")) out.push_back(f);
    for (const auto& c : l->items) interop_forms(c, alias, out);
  } else if (auto* v = f.get_if<VecF>()) {
    for (const auto& c : v->items) interop_forms(c, alias, out);
  } else if (auto* m = f.get_if<MapF>()) {
    for (const auto& [k, x] : m->pairs) {
      interop_forms(k, alias, out);
      interop_forms(x, alias, out);
    }
  }
}

void interop_yields_function() {
  Registry reg = shipped_registry();
  auto files = program_files();
  for (const auto& path : files) {
    for (const auto& f : read_all(read_file(path.string()))) {
      auto* l = f.get_if<ListF>();
      if (l && l->items.size() >= 3 && l->items[0].get_if<Symbol>() && l->items[0].as<Symbol>().name.ends_with("/Ts"))
        reg = register_inline(reg, l->items[1], l->items[2], l->items.size() > 3 ? &l->items[3] : nullptr);
    }
  }
  std::size_t checked = 0;
  for (const auto& path : files) {
    for (const auto& f : read_all(read_file(path.string()))) {
      for (const char* alias : {"ROO", "S"}) {
        std::vector<Form> found;
        interop_forms(f, alias, found);
        for (const auto& form : found) {
          Env env;
          env.aliases.insert(alias);
          require(expand_form(form, env, reg).is<Fn>(), path.filename().string() + ": " + print_form(form));
          ++checked;
        }
      }
    }
  }
  require(checked >= 20, "only " + std::to_string(checked) + " interop forms found");
}

/// Code points counted by decoding each UTF-8 sequence's length from its lead byte.
std::size_t decoded_length(const std::string& s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++n) {
    auto lead = static_cast<unsigned char>(s[i]);
    i += lead < 0x80 ? 1 : lead < 0xE0 ? 2 : lead < 0xF0 ? 3 : 4;
  }
  return n;
}

void reference_validator() {
  auto start = Clock::now();
  Registry reg = load_registry_text(
      "{:schemas {[:TF1 :Draw :your-hint] {:args [:string] :spec [[:style :user/one-letter]]}}"
      " :validators {:user/one-letter [:string {:min 1 :max 1}]}}",
      "inline.edn");
  const MethodSchema& schema = lookup(reg, ClassName{"TF1"}, "Draw", Keyword{"your-hint"});
  auto options = [](Value v) { return make_map({{Keyword{"style"}, std::move(v)}}); };
  require(validate(schema, options("P")).ok(), "{:style \"P\"} rejected");
  ValidationResult bad = validate(schema, options("unknown"));
  require(bad.mismatch == Keyword{"style"}, "{:style \"unknown\"} not a :style mismatch");
  gen::Rng rng(1789);
  std::size_t accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string s = gen::text(rng, i % 3 == 0 ? 2 : 6);
    bool ok = validate(schema, options(s)).ok();
    require(ok == (decoded_length(s) == 1), "wrong verdict for \"" + s + "\"");
    accepted += ok ? 1 : 0;
  }
  require(accepted > 0, "no accepted samples generated");
  within_one_second(start);
}

std::string hinted_draw(const std::string& args, const std::string& spec) {
  return "(native-header \"ROOT.h\")\n(require '[cxx :as ROO])\n(ROO/Ts [:TF1 :Draw :your-hint] " + args + " " + spec +
         ")\n(def f nil)\n((ROO/T Draw TF1 :your-hint) f {:style \"P\"})\n";
}

void dual_use_separation() {
  Registry reg = load_registry_text(
      "{:validators {:user/one-letter [:string {:min 1 :max 1}] :user/short [:string {:max 3}]}}", "inline.edn");
  std::string base = emit(hinted_draw("[:string]", "[[:style :user/one-letter]]"), reg);
  std::string spec_edit = emit(hinted_draw("[:string]", "[[:style :user/short]]"), reg);
  std::string args_edit = emit(hinted_draw("[:int]", "[[:style :user/one-letter]]"), reg);
  auto native = [](const std::string& s) { return lines_with(s, "self->Draw("); };
  auto check = [](const std::string& s) { return lines_with(s, "roo_rt::validate_options("); };
  require(native(base).size() == 1 && check(base).size() == 1, "expected one native call and one validator");
  require(native(spec_edit) == native(base), "runtime-spec edit changed the native call");
  require(check(spec_edit) != check(base), "runtime-spec edit did not reach the validator");
  require(check(args_edit) == check(base), "args edit changed the validator");
  require(native(args_edit) != native(base), "args edit did not reach the native call");
}

void static_checks() {
  struct Case {
    const char* file;
    const char* code;
  };
  for (const Case& c : {Case{"draw_extra_arg.clj", "ArityError"}, Case{"string_for_double.clj", "StaticTypeError"},
                        Case{"unknown_class.clj", "UnknownSchema"}}) {
    BuildConfig cfg;
    cfg.input_path = source(std::string("fixtures/errors/") + c.file);
    cfg.schema_path = source("schemas/malli_types.edn");
    std::ostringstream out, err;
    int code = cmd_build(cfg, out, err);
    require(code == 4, std::string(c.file) + ": exit " + std::to_string(code));
    require(err.str().find(std::string(": ") + c.code + ":") != std::string::npos, c.file + (": " + err.str()));
    require(out.str().empty(), std::string(c.file) + ": produced output");
  }
}

void reader_round_trip() {
  gen::Rng rng(31337);
  for (int i = 0; i < 1500; ++i) {
    Form f = gen::form(rng);
    std::string text = print_form(f);
    auto back = read_all(text);
    require(back.size() == 1 && back[0] == f, "round trip failed for " + text);
  }
  std::size_t listings = 0;
  for (const auto& e : fs::directory_iterator(source("fixtures/listings"))) {
    read_all(read_file(e.path().string()), e.path().string());
    ++listings;
  }
  require(listings == 16, "expected 16 listings, found " + std::to_string(listings));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> criteria{
      {"tutorial pipeline (static half) is deterministic", tutorial_static_half},
      {"every interop expression expands to a function", interop_yields_function},
      {"reference validator accepts exactly one-letter strings", reference_validator},
      {"schema dual-use separation", dual_use_separation},
      {"static checks fail with exit code 4", static_checks},
      {"reader round-trip and listing corpus", reader_round_trip},
  };
  int failed = 0;
  for (const auto& [name, body] : criteria) {
    std::string why;
    try {
      body();
    } catch (const Unmet& u) {
      why = u.why;
    } catch (const Error& e) {
      why = e.diagnostic();
    } catch (const std::exception& e) {
      why = e.what();
    }
    if (why.empty()) {
      std::printf("PASS: %s\n", name);
    } else {
      std::printf("FAIL: %s: %s\n", name, why.c_str());
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
