#include <gtest/gtest.h>

#include "gen.hpp"
#include "roo/schema.hpp"
#include "roo_support.hpp"

namespace {

namespace rt = roo_rt;

rt::Value linear(const rt::Captures&, rt::Args args) {
  rt::Value x = rt::nth(args[0], 0);
  rt::Value d = rt::nth(args[1], 0);
  rt::Value k = rt::nth(args[1], 1);
  return rt::add({rt::mul({k, x}), d});
}

rt::Value constant(const rt::Captures& cap, rt::Args) { return cap[0]; }

double no_trampoline(double*, double*) { return 0; }

TEST(Validation, StringLengthExamples) {
  EXPECT_TRUE(rt::check_string_len(rt::text("P"), 1, 1));
  EXPECT_FALSE(rt::check_string_len(rt::text("unknown"), 1, 1));
  EXPECT_TRUE(rt::check_string_len(rt::text(""), 0, 0));
  EXPECT_TRUE(rt::check_string_len(rt::text("\xC3\xA9"), 1, 1));
  EXPECT_FALSE(rt::check_string_len(rt::integer(1), 0, rt::kNoMax));
  EXPECT_FALSE(rt::check_string_len(rt::Value(), 0, rt::kNoMax));
}

TEST(Validation, MismatchNamesTheFailingOption) {
  rt::Value opts = rt::map({{rt::kw("style"), rt::text("unknown")}});
  rt::Value r = rt::validate_options(opts, {{rt::kw("style"), 1, 1}});
  EXPECT_TRUE(rt::equal(rt::get(r, rt::kw("mismatch")), rt::kw("style")));
  EXPECT_EQ(rt::to_display(r), "{:mismatch :style}");
  EXPECT_TRUE(rt::validate_options(rt::map({{rt::kw("style"), rt::text("P")}}), {{rt::kw("style"), 1, 1}}).is_nil());
}

TEST(Validation, FirstFailureWinsAndMissingKeysFail) {
  rt::Value opts = rt::map({{rt::kw("a"), rt::text("xx")}});
  rt::Value r = rt::validate_options(opts, {{rt::kw("b"), 0, rt::kNoMax}, {rt::kw("a"), 5, 5}});
  EXPECT_TRUE(rt::equal(rt::get(r, rt::kw("mismatch")), rt::kw("b")));
  EXPECT_FALSE(rt::validate_options(rt::Value(), {{rt::kw("a"), 0, 0}}).is_nil());
}

/// Generated runtime checks agree with the compile-time reference for every
/// bound combination, input text and value kind.
TEST(ValidationProperty, AgreesWithReferenceSemantics) {
  roo::gen::Rng rng(4242);
  const std::optional<std::int64_t> bounds[] = {std::nullopt, 0, 1, 2, 3};
  std::size_t cases = 0;
  for (auto lo : bounds) {
    for (auto hi : bounds) {
      roo::MethodSchema schema;
      schema.args = {roo::TypeTag::of(roo::TypeTag::Kind::String)};
      schema.runtime_spec = std::vector<roo::OptionSpec>{
          {roo::Keyword{"style"}, roo::Keyword{"user", "v"}, roo::ValidatorDef{roo::Keyword{"string"}, lo, hi}}};
      for (int i = 0; i < 60; ++i) {
        std::string s = roo::gen::text(rng, 5);
        int kind = static_cast<int>(roo::gen::below(rng, 5));
        roo::Value ref_opts;
        rt::Value rt_opts;
        switch (kind) {
          case 0:
            ref_opts = roo::make_map({{roo::Keyword{"other"}, roo::Value(s)}});
            rt_opts = rt::map({{rt::kw("other"), rt::text(s)}});
            break;
          case 1:
            ref_opts = roo::make_map({{roo::Keyword{"style"}, roo::Value(std::int64_t{7})}});
            rt_opts = rt::map({{rt::kw("style"), rt::integer(7)}});
            break;
          default:
            ref_opts = roo::make_map({{roo::Keyword{"style"}, roo::Value(s)}});
            rt_opts = rt::map({{rt::kw("style"), rt::text(s)}});
        }
        bool ref_ok = roo::validate(schema, ref_opts).ok();
        bool rt_ok = rt::validate_options(rt_opts, {{rt::kw("style"), lo.value_or(0), hi.value_or(rt::kNoMax)}}).is_nil();
        ASSERT_EQ(ref_ok, rt_ok) << "min=" << lo.value_or(-1) << " max=" << hi.value_or(-1) << " s=" << s;
        ++cases;
      }
    }
  }
  EXPECT_EQ(cases, 1500u);
}

TEST(Callbacks, LinearThroughSlot) {
  rt::cb_bind(0, rt::make_fn(&linear, 2, {}), &no_trampoline);
  double a1[] = {0.5}, p1[] = {5, 2};
  double a2[] = {2}, p2[] = {0, 3};
  EXPECT_DOUBLE_EQ(rt::cb_invoke(0, a1, p1), 6.0);
  EXPECT_DOUBLE_EQ(rt::cb_invoke(0, a2, p2), 6.0);
}

TEST(Callbacks, ConstantThroughSlot) {
  rt::cb_bind(1, rt::make_fn(&constant, 2, {rt::integer(42)}), &no_trampoline);
  double a[] = {123}, p[] = {0};
  EXPECT_DOUBLE_EQ(rt::cb_invoke(1, a, p), 42.0);
}

TEST(Callbacks, BoundSlotYieldsItsTrampoline) {
  rt::Value slot = rt::cb_bind(2, rt::make_fn(&constant, 2, {rt::integer(0)}), &no_trampoline);
  EXPECT_EQ(rt::cb_pointer(slot), &no_trampoline);
  EXPECT_EQ(rt::to_display(slot), "#callback-2");
}

TEST(Invoke, ArityIsChecked) {
  rt::Value f = rt::make_fn(&constant, 1, {rt::integer(1)});
  EXPECT_TRUE(rt::equal(rt::invoke(f, {rt::Value()}), rt::integer(1)));
  EXPECT_EXIT(rt::invoke(f, {}), ::testing::ExitedWithCode(1), "roo runtime error");
}

TEST(Handles, PrintAsTagAndAddress) {
  int object = 0;
  rt::Value h = rt::make_handle("TF1", &object);
  std::string shown = rt::to_display(h);
  EXPECT_EQ(shown.rfind("(\"TF1\" 0x", 0), 0u) << shown;
  EXPECT_EQ(shown.back(), ')');
  EXPECT_EQ(rt::handle_ptr(h, "TF1"), &object);
  EXPECT_EXIT(rt::handle_ptr(h, "TCanvas"), ::testing::ExitedWithCode(1), "roo runtime error");
  EXPECT_EXIT(rt::handle_ptr(rt::Value(), "TF1"), ::testing::ExitedWithCode(1), "roo runtime error");
}

TEST(Arithmetic, IntegersStayIntegersDivisionIsDouble) {
  EXPECT_TRUE(rt::equal(rt::add({rt::integer(1), rt::integer(2)}), rt::integer(3)));
  EXPECT_TRUE(rt::equal(rt::add({rt::integer(1), rt::number(2)}), rt::number(3)));
  EXPECT_TRUE(rt::equal(rt::sub({rt::integer(4)}), rt::integer(-4)));
  EXPECT_TRUE(rt::equal(rt::mul({}), rt::integer(1)));
  EXPECT_TRUE(rt::equal(rt::div({rt::integer(1), rt::integer(2)}), rt::number(0.5)));
  EXPECT_TRUE(rt::truthy(rt::eq({rt::integer(1), rt::integer(1)})));
  EXPECT_FALSE(rt::truthy(rt::eq({rt::integer(1), rt::number(1)})));
}

TEST(Display, Formatting) {
  EXPECT_EQ(rt::to_display(rt::number(6)), "6");
  EXPECT_EQ(rt::to_display(rt::number(0.5)), "0.5");
  EXPECT_EQ(rt::to_display(rt::vec({rt::text("a"), rt::kw("b"), rt::Value()})), "[\"a\" :b nil]");
  EXPECT_EQ(rt::to_display(rt::invoke(rt::prelude("str"), {rt::text("size="), rt::integer(7), rt::Value()})),
            "size=7");
  EXPECT_FALSE(rt::truthy(rt::Value(false)));
  EXPECT_TRUE(rt::truthy(rt::integer(0)));
}

TEST(Access, GetAndNth) {
  rt::Value m = rt::map({{rt::kw("k"), rt::integer(1)}});
  EXPECT_TRUE(rt::equal(rt::get(m, rt::kw("k")), rt::integer(1)));
  EXPECT_TRUE(rt::get(m, rt::kw("z")).is_nil());
  EXPECT_TRUE(rt::get(rt::Value(), rt::kw("k")).is_nil());
  EXPECT_TRUE(rt::nth(rt::vec({rt::integer(1)}), 3).is_nil());
}

}  // namespace
