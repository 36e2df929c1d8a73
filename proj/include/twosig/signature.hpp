#pragma once

// 2-signatures: sort signatures, sort expressions of degree n, term arities
// and reduction rules written as term templates with metavariables.

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace twosig {

/// Sort constructors and their argument counts.
struct SortSignature {
  std::map<std::string, unsigned> constructors;

  bool operator==(const SortSignature&) const = default;
};

/// A sort with degree variables. Degree variables are 1-based.
struct SortExpr {
  enum class Kind { DegVar, Con };

  Kind kind = Kind::Con;
  unsigned var = 0;
  std::string name;
  std::vector<SortExpr> args;

  static SortExpr degvar(unsigned index) { return SortExpr{Kind::DegVar, index, {}, {}}; }
  static SortExpr con(std::string name, std::vector<SortExpr> args = {}) {
    return SortExpr{Kind::Con, 0, std::move(name), std::move(args)};
  }

  bool is_var() const { return kind == Kind::DegVar; }
  /// Largest degree variable mentioned, 0 if closed.
  unsigned max_var() const;

  bool operator==(const SortExpr&) const = default;
};

struct ArgSpec {
  std::vector<SortExpr> binders;  // outermost first; the last one is de Bruijn index 0
  SortExpr body;

  bool operator==(const ArgSpec&) const = default;
};

struct TermAritySpec {
  std::string name;
  unsigned degree = 0;
  std::vector<ArgSpec> args;
  SortExpr result;
  bool nat_indexed = false;

  bool operator==(const TermAritySpec&) const = default;
};

struct NatPattern {
  enum class Kind { Zero, Succ, Var, Plus1, Const };

  Kind kind = Kind::Zero;
  std::string var;
  std::uint64_t value = 0;

  static NatPattern zero() { return {Kind::Zero, {}, 0}; }
  static NatPattern succ(std::string v) { return {Kind::Succ, std::move(v), 0}; }
  static NatPattern variable(std::string v) { return {Kind::Var, std::move(v), 0}; }
  static NatPattern plus1(std::string v) { return {Kind::Plus1, std::move(v), 0}; }
  static NatPattern constant(std::uint64_t k) { return {Kind::Const, {}, k}; }

  bool has_var() const { return kind == Kind::Succ || kind == Kind::Var || kind == Kind::Plus1; }

  bool operator==(const NatPattern&) const = default;
};

/// Left- or right-hand side of a rule.
///
/// Con nodes carry one SortExpr per degree variable of the arity; they may be
/// left empty when written and are filled in by resolve_signature. A NatLit
/// is only legal as the single child of a nat-indexed constructor. Subst1
/// holds {body, arg} and substitutes arg for the innermost binder of body.
struct TemplateTerm {
  enum class Kind { Meta, Con, Subst1, NatLit };

  Kind kind = Kind::Meta;
  std::string name;
  std::vector<SortExpr> sort_args;
  std::vector<TemplateTerm> children;
  NatPattern nat;

  static TemplateTerm meta(std::string name) { return {Kind::Meta, std::move(name), {}, {}, {}}; }
  static TemplateTerm con(std::string arity, std::vector<TemplateTerm> children = {},
                          std::vector<SortExpr> sort_args = {}) {
    return {Kind::Con, std::move(arity), std::move(sort_args), std::move(children), {}};
  }
  static TemplateTerm subst1(TemplateTerm body, TemplateTerm arg) {
    return {Kind::Subst1, {}, {}, {std::move(body), std::move(arg)}, {}};
  }
  static TemplateTerm nat_lit(NatPattern p) { return {Kind::NatLit, {}, {}, {}, std::move(p)}; }

  bool operator==(const TemplateTerm&) const = default;
};

struct MetaDecl {
  std::vector<SortExpr> binders;
  SortExpr body;

  bool operator==(const MetaDecl&) const = default;
};

struct RuleTemplate {
  std::string name;
  unsigned degree = 0;
  std::map<std::string, MetaDecl> metavars;
  std::set<std::string> natvars;
  TemplateTerm lhs;
  TemplateTerm rhs;

  bool operator==(const RuleTemplate&) const = default;
};

struct TwoSignature {
  SortSignature sorts;
  std::vector<TermAritySpec> arities;
  std::vector<RuleTemplate> rules;

  const TermAritySpec* find_arity(std::string_view name) const;
  const RuleTemplate* find_rule(std::string_view name) const;

  bool operator==(const TwoSignature&) const = default;
};

struct Diagnostic {
  std::string location;
  std::string reason;

  bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
  /// True if some diagnostic's reason contains `needle`.
  bool mentions(std::string_view needle) const;
};

std::string to_string(const Diagnostic& d);

class SignatureError : public std::runtime_error {
 public:
  explicit SignatureError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

enum class RuleSide { Lhs, Rhs };

ValidationReport validate_signature(const TwoSignature& sig);

/// Validates and fills in every template constructor's sort arguments.
/// Throws SignatureError when validation fails.
TwoSignature resolve_signature(TwoSignature sig);

/// Sort of one side of a rule, over the rule's degree variables.
/// Throws SignatureError on a sort mismatch or a malformed substitution.
SortExpr infer_template_sort(const TwoSignature& sig, const RuleTemplate& rule, RuleSide side);

/// Functional notation used by signature files: `~>(1, Nat)`.
std::string format_sort_expr(const SortExpr& e);

}  // namespace twosig
