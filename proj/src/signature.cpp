#include "twosig/signature.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "unify.hpp"

namespace twosig {

using detail::Unifier;
using detail::UType;

unsigned SortExpr::max_var() const {
  if (kind == Kind::DegVar) return var;
  unsigned m = 0;
  for (const auto& a : args) m = std::max(m, a.max_var());
  return m;
}

const TermAritySpec* TwoSignature::find_arity(std::string_view name) const {
  for (const auto& a : arities) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const RuleTemplate* TwoSignature::find_rule(std::string_view name) const {
  for (const auto& r : rules) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

bool ValidationReport::mentions(std::string_view needle) const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const Diagnostic& d) { return d.reason.find(needle) != std::string::npos; });
}

std::string to_string(const Diagnostic& d) { return d.location + ": " + d.reason; }

namespace {

std::string join_report(const ValidationReport& r) {
  std::string out;
  for (const auto& d : r.diagnostics) {
    if (!out.empty()) out += "; ";
    out += to_string(d);
  }
  return out;
}

}  // namespace

SignatureError::SignatureError(ValidationReport report)
    : std::runtime_error(join_report(report)), report_(std::move(report)) {}

std::string format_sort_expr(const SortExpr& e) {
  if (e.is_var()) return std::to_string(e.var);
  if (e.args.empty()) return e.name;
  std::string out = e.name + "(";
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (i) out += ", ";
    out += format_sort_expr(e.args[i]);
  }
  return out + ")";
}

namespace {

class Checker {
 public:
  Checker(const TwoSignature& sig, ValidationReport& report) : sig_(sig), report_(report) {}

  void sort_expr(const SortExpr& e, unsigned degree, const std::string& loc) {
    if (e.is_var()) {
      if (e.var < 1 || e.var > degree) {
        error(loc, "degree variable out of range: " + std::to_string(e.var) + " at degree " +
                       std::to_string(degree));
      }
      return;
    }
    auto it = sig_.sorts.constructors.find(e.name);
    if (it == sig_.sorts.constructors.end()) {
      error(loc, "unknown sort constructor '" + e.name + "'");
    } else if (it->second != e.args.size()) {
      error(loc, "sort constructor '" + e.name + "' expects " + std::to_string(it->second) +
                     " arguments, got " + std::to_string(e.args.size()));
    }
    for (const auto& a : e.args) sort_expr(a, degree, loc);
  }

  void error(const std::string& loc, std::string reason) {
    report_.diagnostics.push_back({loc, std::move(reason)});
  }

 private:
  const TwoSignature& sig_;
  ValidationReport& report_;
};

struct InferenceFailure {
  std::string location;
  std::string reason;
};

UType to_utype(const SortExpr& e) {
  if (e.is_var()) return UType::rigid(e.var);
  std::vector<UType> args;
  args.reserve(e.args.size());
  for (const auto& a : e.args) args.push_back(to_utype(a));
  return UType::con(e.name, std::move(args));
}

UType instantiate(const SortExpr& e, const std::vector<UType>& holes) {
  if (e.is_var()) return holes.at(e.var - 1);
  std::vector<UType> args;
  args.reserve(e.args.size());
  for (const auto& a : e.args) args.push_back(instantiate(a, holes));
  return UType::con(e.name, std::move(args));
}

std::optional<SortExpr> from_utype(const UType& t) {
  switch (t.kind) {
    case UType::Kind::Hole:
      return std::nullopt;
    case UType::Kind::Rigid:
      return SortExpr::degvar(static_cast<unsigned>(t.id));
    case UType::Kind::Con: {
      std::vector<SortExpr> args;
      for (const auto& a : t.args) {
        auto e = from_utype(a);
        if (!e) return std::nullopt;
        args.push_back(std::move(*e));
      }
      return SortExpr::con(t.name, std::move(args));
    }
  }
  return std::nullopt;
}

// Symbolic sort inference for one rule. Runs on a mutable copy of the
// templates so that the inferred constructor sort arguments can be written
// back.
class TemplateInference {
 public:
  TemplateInference(const TwoSignature& sig, const RuleTemplate& rule) : sig_(sig), rule_(rule) {}

  UType infer(TemplateTerm& t, const std::vector<UType>& ext, const std::string& loc) {
    switch (t.kind) {
      case TemplateTerm::Kind::Meta:
        return meta(t, ext, loc, false);
      case TemplateTerm::Kind::NatLit:
        throw InferenceFailure{loc, "nat literal outside a nat-indexed constructor"};
      case TemplateTerm::Kind::Subst1: {
        if (t.children.size() != 2) throw InferenceFailure{loc, "malformed substitution"};
        UType arg_sort = infer(t.children[1], ext, loc + ".arg");
        std::vector<UType> inner = ext;
        inner.push_back(arg_sort);
        TemplateTerm& body = t.children[0];
        if (body.kind == TemplateTerm::Kind::Meta) return meta(body, inner, loc + ".body", true);
        return infer(body, inner, loc + ".body");
      }
      case TemplateTerm::Kind::Con:
        return con(t, ext, loc);
    }
    throw InferenceFailure{loc, "unreachable"};
  }

  bool unify(const UType& a, const UType& b) { return unifier_.unify(a, b); }

  // Writes inferred sort arguments into every constructor node.
  void write_back(const std::string& loc_prefix) {
    for (auto& [node, holes] : cons_) {
      node->sort_args.clear();
      for (const auto& h : holes) {
        auto e = from_utype(unifier_.zonk(h));
        if (!e) {
          throw InferenceFailure{loc_prefix, "ambiguous sort argument of '" + node->name + "'"};
        }
        node->sort_args.push_back(std::move(*e));
      }
    }
  }

  UType zonk(const UType& t) const { return unifier_.zonk(t); }

 private:
  UType meta(const TemplateTerm& t, const std::vector<UType>& ext, const std::string& loc,
             bool under_subst) {
    auto it = rule_.metavars.find(t.name);
    if (it == rule_.metavars.end()) throw InferenceFailure{loc, "undeclared metavar '" + t.name + "'"};
    const MetaDecl& decl = it->second;
    if (decl.binders.size() != ext.size()) {
      if (under_subst) {
        throw InferenceFailure{loc, "substitution binder count != 1 for metavar '" + t.name + "'"};
      }
      throw InferenceFailure{loc, "metavar '" + t.name + "' declared with " +
                                      std::to_string(decl.binders.size()) + " binders used under " +
                                      std::to_string(ext.size())};
    }
    for (std::size_t i = 0; i < ext.size(); ++i) {
      if (!unifier_.unify(to_utype(decl.binders[i]), ext[i])) {
        throw InferenceFailure{loc, "binder sort mismatch for metavar '" + t.name + "'"};
      }
    }
    return to_utype(decl.body);
  }

  UType con(TemplateTerm& t, const std::vector<UType>& ext, const std::string& loc) {
    const TermAritySpec* ar = sig_.find_arity(t.name);
    if (!ar) throw InferenceFailure{loc, "unknown arity '" + t.name + "'"};
    std::vector<UType> holes;
    for (unsigned i = 0; i < ar->degree; ++i) holes.push_back(unifier_.fresh());
    if (!t.sort_args.empty()) {
      if (t.sort_args.size() != ar->degree) {
        throw InferenceFailure{loc, "wrong number of sort arguments for '" + t.name + "'"};
      }
      for (unsigned i = 0; i < ar->degree; ++i) {
        if (!unifier_.unify(holes[i], to_utype(t.sort_args[i]))) {
          throw InferenceFailure{loc, "sort argument mismatch for '" + t.name + "'"};
        }
      }
    }
    cons_.emplace_back(&t, holes);
    if (ar->nat_indexed) {
      if (t.children.size() != 1 || t.children[0].kind != TemplateTerm::Kind::NatLit) {
        throw InferenceFailure{loc, "nat-indexed constructor '" + t.name + "' needs one nat literal"};
      }
      return instantiate(ar->result, holes);
    }
    if (t.children.size() != ar->args.size()) {
      throw InferenceFailure{loc, "child count mismatch for '" + t.name + "': expected " +
                                      std::to_string(ar->args.size()) + ", got " +
                                      std::to_string(t.children.size())};
    }
    for (std::size_t i = 0; i < ar->args.size(); ++i) {
      std::vector<UType> inner = ext;
      for (const auto& b : ar->args[i].binders) inner.push_back(instantiate(b, holes));
      std::string child_loc = loc + "." + std::to_string(i);
      UType got = infer(t.children[i], inner, child_loc);
      if (!unifier_.unify(got, instantiate(ar->args[i].body, holes))) {
        throw InferenceFailure{child_loc, "sort mismatch at argument " + std::to_string(i) +
                                              " of '" + t.name + "'"};
      }
    }
    return instantiate(ar->result, holes);
  }

  const TwoSignature& sig_;
  const RuleTemplate& rule_;
  Unifier unifier_;
  std::vector<std::pair<TemplateTerm*, std::vector<UType>>> cons_;
};

void collect_metas(const TemplateTerm& t, std::map<std::string, int>& metas,
                   std::map<std::string, int>& nats) {
  switch (t.kind) {
    case TemplateTerm::Kind::Meta:
      ++metas[t.name];
      break;
    case TemplateTerm::Kind::NatLit:
      if (t.nat.has_var()) ++nats[t.nat.var];
      break;
    default:
      for (const auto& c : t.children) collect_metas(c, metas, nats);
  }
}

bool contains_subst(const TemplateTerm& t) {
  if (t.kind == TemplateTerm::Kind::Subst1) return true;
  return std::any_of(t.children.begin(), t.children.end(), contains_subst);
}

void collect_degvars(const SortExpr& e, std::set<unsigned>& out) {
  if (e.is_var()) {
    out.insert(e.var);
    return;
  }
  for (const auto& a : e.args) collect_degvars(a, out);
}

void collect_con_degvars(const TemplateTerm& t, std::set<unsigned>& out) {
  if (t.kind == TemplateTerm::Kind::Con) {
    for (const auto& e : t.sort_args) collect_degvars(e, out);
  }
  for (const auto& c : t.children) collect_con_degvars(c, out);
}

// Nat literals and metavariable names, checked independently of sorts.
void check_rule_structure(const RuleTemplate& rule, Checker& chk, const std::string& loc) {
  std::map<std::string, int> lhs_metas, lhs_nats, rhs_metas, rhs_nats;
  collect_metas(rule.lhs, lhs_metas, lhs_nats);
  collect_metas(rule.rhs, rhs_metas, rhs_nats);
  if (rule.lhs.kind != TemplateTerm::Kind::Con) chk.error(loc + ": lhs", "lhs head must be a constructor");
  if (contains_subst(rule.lhs)) chk.error(loc + ": lhs", "substitution not allowed in lhs");
  for (const auto& [name, count] : lhs_metas) {
    if (count > 1) chk.error(loc + ": lhs", "lhs is not linear: metavar '" + name + "' repeated");
  }
  for (const auto& [name, count] : lhs_nats) {
    if (count > 1) chk.error(loc + ": lhs", "lhs is not linear: nat variable '" + name + "' repeated");
  }
  for (const auto& [name, count] : rhs_metas) {
    if (!lhs_metas.count(name)) chk.error(loc + ": rhs", "unbound metavar '" + name + "'");
  }
  for (const auto& [name, count] : rhs_nats) {
    if (!lhs_nats.count(name)) chk.error(loc + ": rhs", "unbound metavar '" + name + "' (nat)");
  }
  for (const auto* side : {&lhs_nats, &rhs_nats}) {
    for (const auto& [name, count] : *side) {
      if (!rule.natvars.count(name)) chk.error(loc, "undeclared nat variable '" + name + "'");
    }
  }
  for (const auto& n : rule.natvars) {
    if (rule.metavars.count(n)) chk.error(loc, "name '" + n + "' declared both as metavar and nat variable");
  }
}

struct RuleResolution {
  std::optional<SortExpr> lhs_sort;
  std::optional<SortExpr> rhs_sort;
};

// Infers both sides, unifies them and writes the constructor sort arguments
// back into `rule`. Appends diagnostics on failure.
void resolve_rule(const TwoSignature& sig, RuleTemplate& rule, Checker& chk, const std::string& loc) {
  TemplateInference inf(sig, rule);
  try {
    UType l = inf.infer(rule.lhs, {}, loc + ": lhs");
    UType r = inf.infer(rule.rhs, {}, loc + ": rhs");
    if (!inf.unify(l, r)) throw InferenceFailure{loc, "sides have different sorts"};
    if (Unifier::has_holes(inf.zonk(l))) throw InferenceFailure{loc, "ambiguous rule sort"};
    inf.write_back(loc);
  } catch (const InferenceFailure& f) {
    chk.error(f.location, f.reason);
    return;
  }
  std::set<unsigned> determined;
  collect_con_degvars(rule.lhs, determined);
  for (unsigned v = 1; v <= rule.degree; ++v) {
    if (!determined.count(v)) {
      chk.error(loc, "degree variable " + std::to_string(v) + " not determined by lhs");
    }
  }
}

ValidationReport validate_into(TwoSignature& sig) {
  ValidationReport report;
  Checker chk(sig, report);

  for (const auto& [name, n] : sig.sorts.constructors) {
    if (name.empty()) chk.error("sorts", "empty sort constructor name");
  }

  std::set<std::string> seen;
  for (const auto& ar : sig.arities) {
    std::string loc = "arity " + ar.name;
    if (ar.name.empty()) chk.error(loc, "empty arity name");
    if (!seen.insert(ar.name).second) chk.error(loc, "duplicate arity name");
    if (ar.nat_indexed && !ar.args.empty()) chk.error(loc, "nat-indexed arity must not have arguments");
    for (const auto& arg : ar.args) {
      for (const auto& b : arg.binders) chk.sort_expr(b, ar.degree, loc);
      chk.sort_expr(arg.body, ar.degree, loc);
    }
    chk.sort_expr(ar.result, ar.degree, loc);
  }
  // Rule inference instantiates arities, so it needs them well formed.
  bool arities_ok = report.diagnostics.empty();

  std::set<std::string> rule_names;
  for (auto& rule : sig.rules) {
    std::string loc = "rule " + rule.name;
    if (rule.name.empty()) chk.error(loc, "empty rule name");
    if (!rule_names.insert(rule.name).second) chk.error(loc, "duplicate rule name");
    std::size_t before = report.diagnostics.size();
    for (const auto& [name, decl] : rule.metavars) {
      for (const auto& b : decl.binders) chk.sort_expr(b, rule.degree, loc + ": metavar " + name);
      chk.sort_expr(decl.body, rule.degree, loc + ": metavar " + name);
    }
    check_rule_structure(rule, chk, loc);
    if (arities_ok && report.diagnostics.size() == before) resolve_rule(sig, rule, chk, loc);
  }
  return report;
}

}  // namespace

ValidationReport validate_signature(const TwoSignature& sig) {
  TwoSignature copy = sig;
  return validate_into(copy);
}

TwoSignature resolve_signature(TwoSignature sig) {
  ValidationReport report = validate_into(sig);
  if (!report.ok()) throw SignatureError(std::move(report));
  return sig;
}

SortExpr infer_template_sort(const TwoSignature& sig, const RuleTemplate& rule, RuleSide side) {
  RuleTemplate copy = rule;
  TemplateInference inf(sig, copy);
  std::string loc = "rule " + rule.name + (side == RuleSide::Lhs ? ": lhs" : ": rhs");
  try {
    UType t = inf.infer(side == RuleSide::Lhs ? copy.lhs : copy.rhs, {}, loc);
    auto e = from_utype(inf.zonk(t));
    if (!e) throw InferenceFailure{loc, "ambiguous sort"};
    return *e;
  } catch (const InferenceFailure& f) {
    throw SignatureError(ValidationReport{{Diagnostic{f.location, f.reason}}});
  }
}

}  // namespace twosig
