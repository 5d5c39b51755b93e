// roocc: compiles the Lisp interop dialect plus a schema file into C++.
//
//   roocc build <input> --schemas <file> -o <out> [--emit forms|core|cxx] [--entry name]
//   roocc check <input> --schemas <file>

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "roo/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lisp-to-C++ interop compiler"};
  app.require_subcommand(1);

  roo::BuildConfig build;
  auto* build_cmd = app.add_subcommand("build", "Translate a program to C++ (or dump an intermediate stage)");
  build_cmd->add_option("input", build.input_path, "Lisp source file")->required();
  build_cmd->add_option("--schemas", build.schema_path, "Schema file (malli_types.edn)")->required();
  build_cmd->add_option("-o,--output", build.output_path, "Output file, '-' for stdout")->required();
  const std::map<std::string, roo::EmitStage> stages{
      {"forms", roo::EmitStage::Forms}, {"core", roo::EmitStage::Core}, {"cxx", roo::EmitStage::Cxx}};
  build_cmd->add_option("--emit", build.stage, "Output stage")->transform(CLI::CheckedTransformer(stages));
  build_cmd->add_option("--entry", build.entry_name, "Name of the generated entry function");

  std::string check_input, check_schemas;
  auto* check_cmd = app.add_subcommand("check", "Run every stage except emission");
  check_cmd->add_option("input", check_input, "Lisp source file")->required();
  check_cmd->add_option("--schemas", check_schemas, "Schema file (malli_types.edn)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return roo::kExitUsage;
  }

  if (*build_cmd) return roo::cmd_build(build, std::cout, std::cerr);
  return roo::cmd_check(check_input, check_schemas, std::cout, std::cerr);
}
