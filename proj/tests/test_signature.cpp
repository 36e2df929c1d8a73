#include <gtest/gtest.h>

#include "twosig/lang_std.hpp"
#include "twosig/signature.hpp"

using namespace twosig;

namespace {

SortExpr V(unsigned i) { return SortExpr::degvar(i); }
SortExpr arrow(SortExpr a, SortExpr b) { return SortExpr::con("~>", {std::move(a), std::move(b)}); }

// PCF without resolution, so rules can be broken before validation.
TwoSignature raw_pcf() {
  TwoSignature sig = pcf_signature();
  for (auto& r : sig.rules) {
    std::function<void(TemplateTerm&)> strip = [&](TemplateTerm& t) {
      t.sort_args.clear();
      for (auto& c : t.children) strip(c);
    };
    strip(r.lhs);
    strip(r.rhs);
  }
  return sig;
}

RuleTemplate& rule(TwoSignature& sig, const char* name) {
  for (auto& r : sig.rules) {
    if (r.name == name) return r;
  }
  throw std::logic_error(name);
}

}  // namespace

TEST(Signature, BuiltinsValidate) {
  EXPECT_TRUE(validate_signature(pcf_signature()).ok());
  EXPECT_TRUE(validate_signature(ulc_signature()).ok());
  EXPECT_TRUE(validate_signature(stlc_signature()).ok());
  EXPECT_TRUE(validate_signature(raw_pcf()).ok());
}

TEST(Signature, PcfShape) {
  TwoSignature pcf = pcf_signature();
  EXPECT_EQ(pcf.rules.size(), 11u);
  EXPECT_EQ(pcf.sorts.constructors.at("~>"), 2u);
  const TermAritySpec* cond = pcf.find_arity("condN");
  ASSERT_NE(cond, nullptr);
  EXPECT_EQ(format_sort_expr(cond->result), "~>(Bool, ~>(Nat, ~>(Nat, Nat)))");
  EXPECT_EQ(pcf.find_arity("abs")->degree, 2u);
  EXPECT_EQ(pcf.find_arity("rec")->degree, 1u);
  EXPECT_TRUE(pcf.find_arity("nats")->nat_indexed);
}

TEST(Signature, UnboundMetavar) {
  TwoSignature sig = raw_pcf();
  rule(sig, "condN_t").rhs = TemplateTerm::meta("k");
  rule(sig, "condN_t").metavars["k"] = MetaDecl{{}, SortExpr::con("Nat")};
  ValidationReport r = validate_signature(sig);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.mentions("unbound metavar"));
}

TEST(Signature, DegreeVariableOutOfRange) {
  TwoSignature sig = raw_pcf();
  for (auto& ar : sig.arities) {
    if (ar.name == "abs") ar.result = arrow(V(1), V(3));
  }
  EXPECT_TRUE(validate_signature(sig).mentions("degree variable out of range"));
}

TEST(Signature, NonLinearLhs) {
  TwoSignature sig = raw_pcf();
  auto& r = rule(sig, "condB_t");
  r.lhs = TemplateTerm::con("app", {TemplateTerm::con("app", {TemplateTerm::con("app", {TemplateTerm::con("condB"),
                                                                                      TemplateTerm::con("ttt")}),
                                                              TemplateTerm::meta("u")}),
                                    TemplateTerm::meta("u")});
  EXPECT_TRUE(validate_signature(sig).mentions("not linear"));
}

TEST(Signature, SidesMustAgree) {
  TwoSignature sig = raw_pcf();
  rule(sig, "zero_t").rhs = TemplateTerm::con("nats", {TemplateTerm::nat_lit(NatPattern::zero())});
  EXPECT_TRUE(validate_signature(sig).mentions("sides have different sorts"));
}

TEST(Signature, LhsShape) {
  TwoSignature sig = raw_pcf();
  auto& beta = rule(sig, "beta");
  beta.lhs = TemplateTerm::subst1(TemplateTerm::meta("M"), TemplateTerm::meta("N"));
  ValidationReport r = validate_signature(sig);
  EXPECT_TRUE(r.mentions("lhs head must be a constructor"));
  EXPECT_TRUE(r.mentions("substitution not allowed in lhs"));
}

TEST(Signature, SubstitutionNeedsOneBinder) {
  TwoSignature sig = raw_pcf();
  rule(sig, "condN_t").rhs = TemplateTerm::subst1(TemplateTerm::meta("n"), TemplateTerm::meta("m"));
  EXPECT_TRUE(validate_signature(sig).mentions("substitution binder count != 1"));
}

TEST(Signature, ValidationIsDeterministic) {
  TwoSignature sig = raw_pcf();
  rule(sig, "zero_t").rhs = TemplateTerm::meta("nope");
  EXPECT_EQ(validate_signature(sig).diagnostics, validate_signature(sig).diagnostics);
}

TEST(Signature, ResolveRejectsInvalid) {
  TwoSignature sig = raw_pcf();
  rule(sig, "zero_t").rhs = TemplateTerm::meta("nope");
  EXPECT_THROW(resolve_signature(sig), SignatureError);
}

TEST(Signature, InferredRuleSorts) {
  TwoSignature pcf = pcf_signature();
  EXPECT_EQ(infer_template_sort(pcf, *pcf.find_rule("beta"), RuleSide::Lhs), V(2));
  EXPECT_EQ(infer_template_sort(pcf, *pcf.find_rule("rec_a"), RuleSide::Lhs), V(1));
  EXPECT_EQ(infer_template_sort(pcf, *pcf.find_rule("succ_red"), RuleSide::Lhs), SortExpr::con("Nat"));
  EXPECT_EQ(infer_template_sort(pcf, *pcf.find_rule("succ_red"), RuleSide::Rhs), SortExpr::con("Nat"));
  for (const TwoSignature* sig : {static_cast<const TwoSignature*>(&pcf), BuiltinCatalog::instance().signature("ulc"), BuiltinCatalog::instance().signature("stlc")}) {
    for (const auto& r : sig->rules) {
      EXPECT_EQ(infer_template_sort(*sig, r, RuleSide::Lhs), infer_template_sort(*sig, r, RuleSide::Rhs)) << r.name;
    }
  }
}

TEST(Signature, ResolutionFillsSortArguments) {
  TwoSignature pcf = pcf_signature();
  const RuleTemplate& beta = *pcf.find_rule("beta");
  ASSERT_EQ(beta.lhs.sort_args.size(), 2u);
  EXPECT_EQ(beta.lhs.sort_args[0], V(1));
  EXPECT_EQ(beta.lhs.sort_args[1], V(2));
  EXPECT_EQ(beta.lhs.children[0].sort_args, (std::vector<SortExpr>{V(1), V(2)}));
}
