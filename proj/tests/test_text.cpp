#include <gtest/gtest.h>

#include "twosig/lang_std.hpp"
#include "twosig/text.hpp"

using namespace twosig;

namespace {

const Sort kNat("Nat");
const Sort kBool("Bool");
Sort arrow(Sort a, Sort b) { return Sort("~>", {std::move(a), std::move(b)}); }

}  // namespace

TEST(Text, Sorts) {
  EXPECT_EQ(parse_sort("(~> Nat (~> Bool Nat))"), arrow(kNat, arrow(kBool, kNat)));
  EXPECT_EQ(format_sort(arrow(kNat, kBool)), "(~> Nat Bool)");
  EXPECT_EQ(parse_context("Nat, (~> Nat Bool)"), (Context{kNat, arrow(kNat, kBool)}));
  EXPECT_EQ(parse_context(format_context({kBool, kNat})), (Context{kBool, kNat}));
}

TEST(Text, PaperNotation) {
  TwoSignature ulc = ulc_signature();
  EXPECT_EQ(parse_term(ulc, "Abs (Abs 2)"), ulc::true_term());
  EXPECT_EQ(format_term(ulc::church(1), Notation::Paper), "Abs (Abs (2 @ (Abs (Abs 1) @ 2 @ 1)))");
  EXPECT_EQ(format_term(ulc::false_term()), "(con abs [] (con abs [] #0))");
  EXPECT_EQ(parse_term(ulc, "(con abs [] (con abs [] #0))"), ulc::false_term());
}

TEST(Text, RoundTripsInBothNotations) {
  TwoSignature pcf = pcf_signature();
  Rng rng(21);
  int recovered = 0;
  for (int i = 0; i < 200; ++i) {
    Context ctx{gen_sort(pcf.sorts, 2, rng), kNat};
    Sort s = gen_sort(pcf.sorts, 2, rng);
    auto t = gen_term(pcf, ctx, s, 4, rng);
    ASSERT_TRUE(t);
    EXPECT_EQ(parse_term(pcf, format_term(*t), ctx), *t);
    // Paper form drops sort arguments. When they can be recovered by
    // unification they must come back unchanged.
    try {
      EXPECT_EQ(parse_term(pcf, format_term(*t, Notation::Paper), ctx, s), *t);
      ++recovered;
    } catch (const TypeError&) {
    }
  }
  EXPECT_GT(recovered, 100);
}

TEST(Text, CallSyntaxAndExplicitSorts) {
  TwoSignature pcf = pcf_signature();
  Term a = parse_term(pcf, "zero · Nats(0)");
  Term b = parse_term(pcf, "zero @ Nats 0");
  EXPECT_EQ(a, b);
  EXPECT_EQ(typecheck(pcf, {}, a), kBool);
  EXPECT_EQ(typecheck(pcf, {}, parse_term(pcf, "bottom[Nat]")), kNat);
  EXPECT_EQ(typecheck(pcf, {kNat}, parse_term(pcf, "succ @ 1", {kNat})), kNat);
}

TEST(Text, Errors) {
  TwoSignature pcf = pcf_signature();
  EXPECT_THROW(parse_term(pcf, "(con app [Nat Nat]"), ParseError);
  EXPECT_THROW(parse_term(pcf, "succ @ ttt"), TypeError);
  EXPECT_THROW(parse_term(pcf, "#0"), TypeError);
  try {
    parse_term(pcf, "succ @\n  )");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
}
