#include <gtest/gtest.h>

#include "roo/codegen.hpp"
#include "support.hpp"

namespace roo {
namespace {

using Kind = TypeTag::Kind;

constexpr const char* kPrologue = "(native-header \"ROOT.h\")\n(require '[cxx :as ROO])\n";

/// A Draw variant declared in the program; `spec` and `args` are the only
/// things that vary between builds.
std::string hinted_draw_program(const std::string& args, const std::string& spec) {
  return std::string(kPrologue) + "(ROO/Ts [:TF1 :Draw :your-hint] " + args + " " + spec +
         ")\n"
         "(def f nil)\n"
         "((ROO/T Draw TF1 :your-hint) f {:style \"P\"})\n";
}

Registry two_validators() {
  return test::registry_from(
      "{:validators {:user/one-letter [:string {:min 1 :max 1}] :user/short [:string {:max 3}]}}");
}

/// Text of the emitted function containing `needle`.
std::string function_containing(const std::string& unit, const std::string& needle) {
  std::size_t at = unit.find(needle);
  if (at == std::string::npos) return {};
  std::size_t begin = unit.rfind("\nstatic roo_rt::Value roo_fn_", at);
  std::size_t end = unit.find("\n}\n", at);
  return unit.substr(begin, end - begin);
}

TEST(MapType, FixedTable) {
  EXPECT_EQ(map_type(TypeTag::of(Kind::String)), "const char*");
  EXPECT_EQ(map_type(TypeTag::of(Kind::Void)), "void");
  EXPECT_EQ(map_type(TypeTag::of(Kind::Double)), "double");
  EXPECT_EQ(map_type(TypeTag::of(Kind::Int)), "int");
  EXPECT_EQ(map_type(TypeTag::of(Kind::Bool)), "bool");
  EXPECT_EQ(map_array_type(), "double*");
  EXPECT_THROW(map_type(TypeTag::callback_of(Keyword{"cb", "linear"})), std::logic_error);
}

TEST(Mangle, HexEscapesNonAlphanumerics) {
  EXPECT_EQ(mangle("fallbackDraw"), "lv_fallbackDraw");
  EXPECT_EQ(mangle("a-b"), "lv_a_2db");
  EXPECT_EQ(mangle("ok?"), "lv_ok_3f");
  EXPECT_EQ(mangle("a_b"), "lv_a_5fb");
  EXPECT_NE(mangle("a-b"), mangle("a_2db"));
}

TEST(CxxStringLiteral, EscapesEverythingUnsafe) {
  EXPECT_EQ(cxx_string_literal("pyf2"), "\"pyf2\"");
  EXPECT_EQ(cxx_string_literal("a\"b\\c\nd"), "\"a\\\"b\\\\c\\nd\"");
  EXPECT_EQ(cxx_string_literal("?" "?="), "\"\\?\\?=\"");
  EXPECT_EQ(cxx_string_literal(std::string("\x01", 1)), "\"\\001\"");
}

TEST(Trampoline, ExactText) {
  TrampolineSlot slot{3, CallbackSig{Keyword{"cb", "linear"}}, "l"};
  EXPECT_EQ(emit_trampoline(slot),
            "// :cb/linear -> l\n"
            "static double roo_trampoline_3(double* arr, double* par) {\n"
            "  return roo_rt::to_double(roo_rt::invoke(roo_rt::cb_target(3), "
            "{roo_rt::array_view(arr), roo_rt::array_view(par)}));\n"
            "}\n");
}

TEST(EmitProgram, EmptyProgram) {
  EmitOptions opts;
  EXPECT_EQ(emit_program({}, opts),
            "// Generated by roocc. Do not edit.\n"
            "#include \"roo_support.hpp\"\n"
            "\n"
            "int main() {\n"
            "  return 0;\n"
            "}\n");
  opts.entry_name = "roo_entry";
  EXPECT_NE(emit_program({}, opts).find("int roo_entry() {"), std::string::npos);
}

TEST(EmitProgram, IncludesOnlyTheTwoHeadersInOrder) {
  std::string unit = test::emit_text(test::slurp("fixtures/e2e/tutorial.clj"));
  EXPECT_EQ(test::count_occurrences(unit, "#include"), 2u);
  std::size_t target = unit.find("#include \"ROOT.h\"");
  std::size_t support = unit.find("#include \"roo_support.hpp\"");
  std::size_t tramp = unit.find("static double roo_trampoline_0");
  std::size_t fn = unit.find("static roo_rt::Value roo_fn_0");
  std::size_t entry = unit.find("int main() {");
  ASSERT_NE(target, std::string::npos);
  EXPECT_LT(target, support);
  EXPECT_LT(support, tramp);
  EXPECT_LT(tramp, fn);
  EXPECT_LT(fn, entry);
}

TEST(EmitProgram, ConstructorWrapsNewObjectInTaggedHandle) {
  std::string unit = test::emit_text(std::string(kPrologue) + "(def c ((ROO/T new TCanvas)))");
  EXPECT_NE(unit.find("roo_rt::make_handle(\"TCanvas\", new TCanvas())"), std::string::npos);
  EXPECT_EQ(unit.find("delete"), std::string::npos);
}

TEST(EmitProgram, MethodCastsReceiverByClassTag) {
  std::string unit = test::emit_text(std::string(kPrologue) + "(def f nil) ((ROO/T SetParameters TF1) f 5. 2)");
  EXPECT_NE(unit.find("static_cast<TF1*>(roo_rt::handle_ptr(lt_0, \"TF1\"))"), std::string::npos);
  EXPECT_NE(unit.find("self->SetParameters(roo_rt::to_double(arg0), roo_rt::to_double(arg1));"), std::string::npos);
  EXPECT_NE(unit.find("roo_rt::integer(2LL)"), std::string::npos);
}

TEST(EmitProgram, ReturnConversions) {
  Registry reg = test::registry_from(
      "{:schemas {[:T :new :default] {:args []} [:T :d :default] {:args [] :returns :double}"
      " [:T :i :default] {:args [] :returns :int} [:T :b :default] {:args [:bool] :returns :bool}}}");
  std::string unit = test::emit_text(
      "(native-header \"t.h\") (require '[cxx :as X]) (def t ((X/T new T)))"
      "((X/T d T) t) ((X/T i T) t) ((X/T b T) t true)",
      reg);
  EXPECT_NE(unit.find("return roo_rt::number(static_cast<double>(self->d()));"), std::string::npos);
  EXPECT_NE(unit.find("return roo_rt::integer(static_cast<long long>(self->i()));"), std::string::npos);
  EXPECT_NE(unit.find("return roo_rt::Value(static_cast<bool>(self->b(roo_rt::to_bool(arg0))));"), std::string::npos);
}

TEST(EmitProgram, ValidatorRunsBeforeTouchingTheObject) {
  std::string unit = test::emit_text(test::slurp("fixtures/e2e/fallback.clj"));
  std::string fn = function_containing(unit, "validate_options");
  ASSERT_FALSE(fn.empty());
  std::size_t check = fn.find("if (roo_rt::Value mismatch = roo_rt::validate_options(");
  std::size_t early = fn.find("return mismatch;");
  std::size_t recv = fn.find("roo_rt::handle_ptr(");
  std::size_t call = fn.find("self->Draw(");
  ASSERT_NE(check, std::string::npos);
  EXPECT_LT(check, early);
  EXPECT_LT(early, recv);
  EXPECT_LT(recv, call);
}

TEST(EmitProgram, ValidationOnlyForRuntimeSpecCalls) {
  std::string program = test::slurp("fixtures/e2e/fallback.clj") +
                        "((ROO/T Draw TF1 :your-hint) f {:style \"L\"})\n"
                        "(ROO/Ts [:TF1 :Draw :my-hint] [:string])\n"
                        "((ROO/T Draw TF1 :my-hint) f \"P\")\n";
  auto r = test::expand_text(program);
  std::size_t with_spec = 0, without_spec = 0;
  for (const auto& e : r.exprs) {
    walk(e, [&](const CoreExpr& c) {
      if (auto* n = c.get_if<NativeCall>()) (n->uses_options() ? with_spec : without_spec) += 1;
    });
  }
  std::string unit = test::emit_text(program);
  EXPECT_EQ(with_spec, 2u);
  EXPECT_EQ(test::count_occurrences(unit, "roo_rt::validate_options("), with_spec);
  EXPECT_EQ(test::count_occurrences(unit, "self->"), with_spec + without_spec);
  for (const auto& line : test::lines_containing(unit, "self->SetParameters"))
    EXPECT_EQ(function_containing(unit, line).find("validate_options"), std::string::npos);
}

TEST(EmitProgram, Deterministic) {
  for (const char* name : {"tutorial", "fallback", "stdstring", "empty"}) {
    std::string program = test::slurp(std::string("fixtures/e2e/") + name + ".clj");
    EXPECT_EQ(test::emit_text(program), test::emit_text(program)) << name;
  }
}

TEST(DualUse, RuntimeSpecEditLeavesNativeCallUnchanged) {
  Registry reg = two_validators();
  std::string a = test::emit_text(hinted_draw_program("[:string]", "[[:style :user/one-letter]]"), reg);
  std::string b = test::emit_text(hinted_draw_program("[:string]", "[[:style :user/short]]"), reg);
  EXPECT_NE(a, b);
  EXPECT_EQ(test::lines_containing(a, "self->Draw("), test::lines_containing(b, "self->Draw("));
  EXPECT_EQ(test::lines_containing(a, "self->Draw(").size(), 1u);
  EXPECT_NE(test::lines_containing(a, "validate_options("), test::lines_containing(b, "validate_options("));
}

TEST(DualUse, ArgsEditLeavesValidatorUnchanged) {
  Registry reg = two_validators();
  std::string a = test::emit_text(hinted_draw_program("[:string]", "[[:style :user/one-letter]]"), reg);
  std::string b = test::emit_text(hinted_draw_program("[:int]", "[[:style :user/one-letter]]"), reg);
  EXPECT_NE(a, b);
  EXPECT_EQ(test::lines_containing(a, "validate_options("), test::lines_containing(b, "validate_options("));
  EXPECT_EQ(test::lines_containing(a, "validate_options(").size(), 1u);
  EXPECT_NE(test::lines_containing(a, "self->Draw("), test::lines_containing(b, "self->Draw("));
}

TEST(Callbacks, OneSlotPerDistinctGlobalTarget) {
  std::string base = std::string(kPrologue) + "(def l (fn [a p] 1.)) (def m (fn [a p] 2.))\n";
  std::string unit = test::emit_text(base +
                                     "((ROO/T new TF1) \"a\" l -1. 1. 2)\n"
                                     "((ROO/T new TF1) \"b\" l -1. 1. 2)\n"
                                     "((ROO/T new TF1) \"c\" m -1. 1. 2)\n");
  EXPECT_EQ(test::count_occurrences(unit, "static double roo_trampoline_"), 2u);
  EXPECT_EQ(test::count_occurrences(unit, "roo_rt::cb_bind(0, lv_l, &roo_trampoline_0)"), 2u);
  EXPECT_EQ(test::count_occurrences(unit, "roo_rt::cb_bind(1, lv_m, &roo_trampoline_1)"), 1u);
  EXPECT_NE(unit.find("roo_rt::cb_pointer(arg1)"), std::string::npos);
}

TEST(Callbacks, SixteenSlotsFitSeventeenDoNot) {
  auto program = [](int n) {
    std::string p = kPrologue;
    for (int i = 0; i < n; ++i) p += "((ROO/T new TF1) \"f\" (fn [a p] " + std::to_string(i) + ".) -1. 1. 2)\n";
    return p;
  };
  std::string unit;
  EXPECT_NO_THROW(unit = test::emit_text(program(16)));
  EXPECT_EQ(test::count_occurrences(unit, "static double roo_trampoline_"), 16u);
  EXPECT_EQ(test::error_code_of([&] { test::emit_text(program(17)); }), ErrorCode::TooManyCallbacks);
}

TEST(Errors, NativeNodesNeedAHeader) {
  EXPECT_EQ(test::error_code_of([] { test::emit_text("(require '[cxx :as ROO]) ((ROO/T new TCanvas))"); }),
            ErrorCode::MissingNativeHeader);
}

TEST(Errors, NestedDefHasNoEmissionRule) {
  std::vector<CoreExpr> body;
  body.push_back(core(Def{"x", core(Lit{Value(1)})}));
  std::vector<CoreExpr> program;
  program.push_back(core(Fn{{}, std::move(body)}));
  EXPECT_EQ(test::error_code_of([&] { emit_program(program, EmitOptions{}); }), ErrorCode::UnsupportedConstruct);
}

TEST(Emission, ClosuresCaptureFreeLocals) {
  std::string unit = test::emit_text("(def add (fn [a] (fn [b] (+ a b))))");
  EXPECT_NE(unit.find("roo_rt::make_fn(&roo_fn_1, 1, {lv_a})"), std::string::npos);
  EXPECT_NE(unit.find("const roo_rt::Value& lv_a = cap[0];"), std::string::npos);
}

TEST(Emission, RebindingGetsFreshIdentifiers) {
  std::string unit = test::emit_text("(def v (let [a 1 a (+ a 1)] a))");
  EXPECT_NE(unit.find("const roo_rt::Value lv_a = roo_rt::integer(1LL);"), std::string::npos);
  EXPECT_NE(unit.find("const roo_rt::Value lv_a__1 = roo_rt::add({lv_a, roo_rt::integer(1LL)});"), std::string::npos);
}

TEST(Emission, Literals) {
  std::string unit = test::emit_text("[nil true 1.5 -9223372036854775808 \"q?\" :a/b {:k [1]}]");
  EXPECT_NE(unit.find("roo_rt::Value()"), std::string::npos);
  EXPECT_NE(unit.find("roo_rt::Value(true)"), std::string::npos);
  EXPECT_NE(unit.find("roo_rt::number(1.5)"), std::string::npos);
  EXPECT_NE(unit.find("roo_rt::text(\"q\\?\")"), std::string::npos);
  EXPECT_NE(unit.find("roo_rt::kw(\"a/b\")"), std::string::npos);
  EXPECT_NE(unit.find("roo_rt::map({{roo_rt::kw(\"k\"), roo_rt::vec({roo_rt::integer(1LL)})}})"), std::string::npos);
  EXPECT_EQ(unit.find("9223372036854775808LL"), std::string::npos);
}

}  // namespace
}  // namespace roo
