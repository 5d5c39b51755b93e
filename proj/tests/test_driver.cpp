#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "support.hpp"

namespace roo {
namespace {

namespace fs = std::filesystem;

const std::string kSchemas = test::source_path("schemas/malli_types.edn");

std::string fixture(const std::string& rel) { return test::source_path("fixtures/" + rel); }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome build(const std::string& input, EmitStage stage = EmitStage::Cxx, const std::string& schemas = kSchemas,
              const std::string& output = "-") {
  BuildConfig cfg;
  cfg.input_path = input;
  cfg.schema_path = schemas;
  cfg.output_path = output;
  cfg.stage = stage;
  std::ostringstream out, err;
  int code = cmd_build(cfg, out, err);
  return {code, out.str(), err.str()};
}

Outcome check(const std::string& input, const std::string& schemas = kSchemas) {
  std::ostringstream out, err;
  int code = cmd_check(input, schemas, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("roocc-test-" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::size_t entries() const { return static_cast<std::size_t>(std::distance(fs::directory_iterator(path_), {})); }

 private:
  fs::path path_;
};

/// Runs the roocc binary; returns its exit status with stdout/stderr captured.
Outcome run_roocc(const std::string& args, const TempDir& tmp) {
  std::string out = tmp.file("stdout.txt"), err = tmp.file("stderr.txt");
  int status = std::system((std::string(ROOCC_PATH) + " " + args + " >" + out + " 2>" + err).c_str());
  Outcome o{WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(out), read_file(err)};
  fs::remove(out);
  fs::remove(err);
  return o;
}

TEST(Build, TutorialSucceedsWithOneTranslationUnit) {
  TempDir tmp;
  Outcome o = build(fixture("e2e/tutorial.clj"), EmitStage::Cxx, kSchemas, tmp.file("tutorial.cpp"));
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.err.empty());
  EXPECT_EQ(tmp.entries(), 1u);
  std::string unit = read_file(tmp.file("tutorial.cpp"));
  EXPECT_NE(unit.find("int main() {"), std::string::npos);
  EXPECT_EQ(unit, build(fixture("e2e/tutorial.clj")).out);
}

TEST(Build, UnbalancedInputExits2WithPosition) {
  Outcome o = build(fixture("errors/unbalanced.clj"));
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("unbalanced.clj:2:1: UnbalancedDelimiter:"), std::string::npos) << o.err;
  EXPECT_TRUE(o.out.empty());
}

TEST(Build, StaticCheckFailuresExit4) {
  Outcome arity = build(fixture("errors/draw_extra_arg.clj"));
  EXPECT_EQ(arity.code, 4);
  EXPECT_NE(arity.err.find("draw_extra_arg.clj:4:1: ArityError:"), std::string::npos) << arity.err;
  Outcome type = build(fixture("errors/string_for_double.clj"));
  EXPECT_EQ(type.code, 4);
  EXPECT_NE(type.err.find(": StaticTypeError:"), std::string::npos) << type.err;
  Outcome unknown = build(fixture("errors/unknown_class.clj"));
  EXPECT_EQ(unknown.code, 4);
  EXPECT_NE(unknown.err.find("unknown_class.clj:4:"), std::string::npos) << unknown.err;
  EXPECT_NE(unknown.err.find(": UnknownSchema:"), std::string::npos);
  EXPECT_NE(unknown.err.find("TF9"), std::string::npos);
}

TEST(Build, SchemaErrorsExit3) {
  Outcome o = build(fixture("e2e/tutorial.clj"), EmitStage::Cxx, fixture("errors/bad_type.edn"));
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("bad_type.edn:1:"), std::string::npos) << o.err;
}

TEST(Build, MissingFilesExit5) {
  EXPECT_EQ(build(fixture("e2e/nope.clj")).code, 5);
  Outcome o = build(fixture("e2e/tutorial.clj"), EmitStage::Cxx, fixture("nope.edn"));
  EXPECT_EQ(o.code, 5);
  EXPECT_NE(o.err.find("nope.edn"), std::string::npos);
  EXPECT_EQ(build(fixture("e2e/tutorial.clj"), EmitStage::Cxx, kSchemas, "/nonexistent-dir/x.cpp").code, 5);
}

TEST(Build, FailedBuildLeavesNoOutput) {
  TempDir tmp;
  std::string target = tmp.file("out.cpp");
  EXPECT_EQ(build(fixture("errors/draw_extra_arg.clj"), EmitStage::Cxx, kSchemas, target).code, 4);
  EXPECT_EQ(build(fixture("errors/unbalanced.clj"), EmitStage::Forms, kSchemas, target).code, 2);
  EXPECT_EQ(tmp.entries(), 0u);
}

TEST(Build, FailedBuildKeepsPreviousOutputIntact) {
  TempDir tmp;
  std::string target = tmp.file("out.cpp");
  ASSERT_EQ(build(fixture("e2e/tutorial.clj"), EmitStage::Cxx, kSchemas, target).code, 0);
  std::string before = read_file(target);
  EXPECT_EQ(build(fixture("errors/unknown_class.clj"), EmitStage::Cxx, kSchemas, target).code, 4);
  EXPECT_EQ(read_file(target), before);
  EXPECT_EQ(tmp.entries(), 1u);
}

TEST(Build, EmitFormsReparsesToTheSameForms) {
  for (const char* name : {"tutorial", "fallback", "stdstring", "empty"}) {
    std::string path = fixture(std::string("e2e/") + name + ".clj");
    Outcome o = build(path, EmitStage::Forms);
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(read_all(o.out), read_all(read_file(path))) << name;
  }
}

TEST(Build, EmitCorePrintsOneLinePerTopLevelExpression) {
  Outcome o = build(fixture("e2e/tutorial.clj"), EmitStage::Core);
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(test::count_occurrences(o.out, "\n"), 7u);
  EXPECT_EQ(o.out, build(fixture("e2e/tutorial.clj"), EmitStage::Core).out);
}

TEST(Build, EmptyProgramGivesEmptyEntry) {
  Outcome o = build(fixture("e2e/empty.clj"));
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("int main() {\n  return 0;\n}\n"), std::string::npos);
}

TEST(Check, TutorialPasses) {
  Outcome o = check(fixture("e2e/tutorial.clj"));
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "OK: 7 top-level expressions, 7 schemas\n");
}

TEST(Check, EmptyProgram) {
  Outcome o = check(fixture("e2e/empty.clj"));
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "OK: 0 top-level expressions, 7 schemas\n");
}

TEST(Check, InlineSchemasCount) {
  Outcome o = check(fixture("e2e/fallback.clj"));
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find(", 8 schemas"), std::string::npos) << o.out;
}

TEST(Check, DanglingValidatorExits3) {
  Outcome o = check(fixture("e2e/fallback.clj"), fixture("errors/no_validators.edn"));
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("fallback.clj:7:18:"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find(": DanglingValidatorRef:"), std::string::npos);
}

TEST(ExitCodes, TotalFunctionOfErrorCode) {
  EXPECT_EQ(exit_code_for(ErrorCode::UnbalancedDelimiter), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::InvalidToken), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::OddMapLiteral), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::MalformedSchemaFile), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::UnknownTypeTag), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::DanglingValidatorRef), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::ArityError), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::StaticTypeError), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::UnknownSchema), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::TooManyCallbacks), 4);
}

TEST(Binary, BuildAndCheck) {
  TempDir tmp;
  std::string out = tmp.file("t.cpp");
  Outcome o = run_roocc("build " + fixture("e2e/tutorial.clj") + " --schemas " + kSchemas + " -o " + out, tmp);
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(read_file(out), build(fixture("e2e/tutorial.clj")).out);
  o = run_roocc("check " + fixture("e2e/tutorial.clj") + " --schemas " + kSchemas, tmp);
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "OK: 7 top-level expressions, 7 schemas\n");
}

TEST(Binary, ExitCodes) {
  TempDir tmp;
  auto code = [&](const std::string& args) { return run_roocc(args, tmp).code; };
  EXPECT_EQ(code(""), 1);
  EXPECT_EQ(code("frobnicate"), 1);
  EXPECT_EQ(code("build " + fixture("e2e/tutorial.clj") + " -o -"), 1);
  EXPECT_EQ(code("build " + fixture("e2e/tutorial.clj") + " --schemas " + kSchemas + " -o - --emit asm"), 1);
  EXPECT_EQ(code("build " + fixture("errors/unbalanced.clj") + " --schemas " + kSchemas + " -o -"), 2);
  EXPECT_EQ(code("check " + fixture("e2e/tutorial.clj") + " --schemas " + fixture("errors/bad_type.edn")), 3);
  EXPECT_EQ(code("build " + fixture("errors/unknown_class.clj") + " --schemas " + kSchemas + " -o -"), 4);
  EXPECT_EQ(code("check " + fixture("missing.clj") + " --schemas " + kSchemas), 5);
  EXPECT_EQ(code("--help"), 0);
}

TEST(Binary, DiagnosticsGoToStderr) {
  TempDir tmp;
  Outcome o = run_roocc("build " + fixture("errors/unknown_class.clj") + " --schemas " + kSchemas + " -o -", tmp);
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(o.err.find("unknown_class.clj:4:2: UnknownSchema:"), std::string::npos) << o.err;
}

}  // namespace
}  // namespace roo
