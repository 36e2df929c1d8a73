#include <gtest/gtest.h>

#include "oracles.hpp"
#include "twosig/lang_std.hpp"
#include "twosig/laws.hpp"
#include "twosig/reduction.hpp"
#include "twosig/text.hpp"

using namespace twosig;
using ulc::abs;
using ulc::app;

namespace {

const Sort kStar("*");
Term id() { return abs(Term::var(0)); }

}  // namespace

TEST(Reduction, BetaAgainstOracle) {
  TwoSignature sig = ulc_signature();
  Term t = app(abs(app(Term::var(0), Term::var(0))), id());
  auto steps = step_all(sig, t);
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(steps[0].rule, "beta");
  EXPECT_EQ(format_position(steps[0].position), "root");
  using oracle::Named;
  Named expected = oracle::subst(Named::app(Named::var("x"), Named::var("x")),
                                 {{"x", Named::lam("y", Named::var("y"))}});
  EXPECT_EQ(steps[0].result, oracle::to_de_bruijn(expected, {}));
}

TEST(Reduction, StepsAreOrderedOutermostFirst) {
  TwoSignature sig = ulc_signature();
  Term inner = app(id(), id());
  Term t = app(id(), inner);
  auto steps = step_all(sig, t);
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(format_position(steps[0].position), "root");
  EXPECT_EQ(steps[0].result, inner);
  EXPECT_EQ(format_position(steps[1].position), "1");
  // Same result as the root step, still a separate step.
  EXPECT_EQ(steps[1].result, inner);
  EXPECT_EQ(successors(sig, t), (std::vector<Term>{inner}));
}

TEST(Reduction, RandomBetaStepsAgainstOracle) {
  // Every root redex of a random named term, contracted by the oracle.
  TwoSignature sig = ulc_signature();
  Rng rng(5);
  std::vector<std::string> pool{"x", "y", "z"};
  int contracted = 0;
  for (int i = 0; i < 300; ++i) {
    oracle::Named body = oracle::gen_named({"x", "a"}, pool, 4, rng);
    oracle::Named arg = oracle::gen_named({"a"}, pool, 3, rng);
    Term t = app(oracle::to_de_bruijn(oracle::Named::lam("x", body), {"a"}), oracle::to_de_bruijn(arg, {"a"}));
    auto root = root_steps(sig, t);
    ASSERT_EQ(root.size(), 1u);
    EXPECT_EQ(root[0].result, oracle::to_de_bruijn(oracle::subst(body, {{"x", arg}}), {"a"}));
    ++contracted;
  }
  EXPECT_EQ(contracted, 300);
}

TEST(Reduction, PcfRules) {
  TwoSignature pcf = pcf_signature();
  auto one_step = [&](std::string_view text) {
    auto s = step_all(pcf, parse_term(pcf, text));
    return s.size() == 1 ? std::pair{s[0].rule, format_term(s[0].result, Notation::Paper)}
                         : std::pair{std::string("?"), std::string()};
  };
  EXPECT_EQ(one_step("succ @ Nats 4"), (std::pair<std::string, std::string>{"succ_red", "Nats 5"}));
  auto ps = step_all(pcf, parse_term(pcf, "pred @ (succ @ Nats 3)"));
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].rule, "pred_succ");
  EXPECT_EQ(format_term(ps[0].result, Notation::Paper), "Nats 3");
  EXPECT_EQ(ps[1].rule, "succ_red");
  EXPECT_EQ(format_position(ps[1].position), "1");
  // pred only undoes succ, so a bare literal is stuck.
  EXPECT_TRUE(step_all(pcf, parse_term(pcf, "pred @ Nats 4")).empty());
  EXPECT_EQ(one_step("pred @ Nats 0").first, "pred_z");
  EXPECT_EQ(one_step("zero @ Nats 2").second, "fff");
  EXPECT_EQ(one_step("condN @ ttt @ Nats 1 @ Nats 2").second, "Nats 1");
  EXPECT_EQ(one_step("condB @ fff @ ttt @ fff").second, "fff");
  EXPECT_TRUE(step_all(pcf, parse_term(pcf, "bottom[Nat]")).empty());
}

TEST(Reduction, NormalizeExhausts) {
  TwoSignature pcf = pcf_signature();
  Term loop = parse_term(pcf, "Rec (Abs 1)", {}, Sort("Nat"));
  Normalization n = normalize(pcf, loop, 3);
  EXPECT_TRUE(n.exhausted);
  EXPECT_EQ(n.trace.steps.size(), 3u);
  EXPECT_TRUE(trace_is_valid(pcf, n.trace));

  Normalization done = normalize(pcf, parse_term(pcf, "condN @ (zero @ Nats 0) @ (succ @ Nats 1) @ Nats 7"), 10);
  EXPECT_FALSE(done.exhausted);
  EXPECT_EQ(format_term(done.result, Notation::Paper), "Nats 2");
  EXPECT_EQ(done.trace.steps.size(), 3u);
}

TEST(Reduction, Reachability) {
  TwoSignature sig = ulc_signature();
  Reachability r = reduces_to(sig, {}, app(ulc::succ(), ulc::church(0)), ulc::church(1), {8, 4096});
  ASSERT_EQ(r.verdict, Verdict::Yes);
  ASSERT_TRUE(r.trace);
  EXPECT_EQ(r.trace->end(), ulc::church(1));
  EXPECT_TRUE(trace_is_valid(sig, *r.trace));

  EXPECT_EQ(reduces_to(sig, {}, ulc::omega(), ulc::omega(), {0, 16}).verdict, Verdict::Yes);
  // Omega only reaches itself.
  EXPECT_EQ(reduces_to(sig, {}, ulc::omega(), id(), {5, 16}).verdict, Verdict::No);
  // True and false are distinct normal forms.
  EXPECT_EQ(reduces_to(sig, {}, ulc::true_term(), ulc::false_term(), {5, 16}).verdict, Verdict::No);
  // Growing terms leave the question open.
  Term w3 = abs(app(app(Term::var(0), Term::var(0)), Term::var(0)));
  EXPECT_EQ(reduces_to(sig, {}, app(w3, w3), id(), {4, 4096}).verdict, Verdict::Unknown);
}

TEST(Reduction, ReachabilityRejectsSortMismatch) {
  TwoSignature pcf = pcf_signature();
  EXPECT_THROW(reduces_to(pcf, {}, parse_term(pcf, "ttt"), parse_term(pcf, "Nats 0"), {2, 16}), TypeError);
}

TEST(Reduction, RenderTrace) {
  TwoSignature pcf = pcf_signature();
  Normalization n = normalize(pcf, parse_term(pcf, "zero @ (succ @ Nats 0)"), 10);
  EXPECT_EQ(render_trace(n.trace, [](const Term& t) { return format_term(t, Notation::Paper); }),
            "1. [succ_red@1] zero @ Nats 1\n2. [zero_f@root] fff\n");
}

TEST(Reduction, LawSuitesOnPcf) {
  LawConfig cfg;
  cfg.samples = 60;
  cfg.depth = 4;
  EXPECT_TRUE(check_monad_laws(pcf_signature(), cfg).ok());
  LawReport r = check_reduction_laws(pcf_signature(), cfg);
  EXPECT_TRUE(r.ok());
  for (const auto& l : r.laws) EXPECT_GE(l.checked, cfg.samples) << l.law;
}
