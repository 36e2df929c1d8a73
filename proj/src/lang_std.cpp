#include "twosig/lang_std.hpp"

namespace twosig {

namespace {

SortExpr V(unsigned i) { return SortExpr::degvar(i); }
SortExpr S(std::string name) { return SortExpr::con(std::move(name)); }
SortExpr arrow(SortExpr a, SortExpr b) { return SortExpr::con("~>", {std::move(a), std::move(b)}); }

ArgSpec plain(SortExpr s) { return ArgSpec{{}, std::move(s)}; }

TermAritySpec constant(std::string name, SortExpr result) {
  return TermAritySpec{std::move(name), 0, {}, std::move(result), false};
}

TemplateTerm M(std::string name) { return TemplateTerm::meta(std::move(name)); }
TemplateTerm C(std::string name, std::vector<TemplateTerm> kids = {}) {
  return TemplateTerm::con(std::move(name), std::move(kids));
}
TemplateTerm ap(TemplateTerm f, TemplateTerm a) { return C("app", {std::move(f), std::move(a)}); }
TemplateTerm nats(NatPattern p) { return C("nats", {TemplateTerm::nat_lit(std::move(p))}); }

RuleTemplate rule(std::string name, unsigned degree, std::map<std::string, MetaDecl> metas,
                  std::set<std::string> natvars, TemplateTerm lhs, TemplateTerm rhs) {
  return RuleTemplate{std::move(name), degree, std::move(metas), std::move(natvars), std::move(lhs), std::move(rhs)};
}

MetaDecl of(SortExpr s) { return MetaDecl{{}, std::move(s)}; }

// abs/app of degree 2 and beta, shared by PCF and STLC.
void add_lambda(TwoSignature& sig) {
  sig.arities.push_back(TermAritySpec{"abs", 2, {ArgSpec{{V(1)}, V(2)}}, arrow(V(1), V(2)), false});
  sig.arities.push_back(TermAritySpec{"app", 2, {plain(arrow(V(1), V(2))), plain(V(1))}, V(2), false});
  sig.rules.push_back(rule("beta", 2, {{"M", MetaDecl{{V(1)}, V(2)}}, {"N", of(V(1))}}, {},
                           ap(C("abs", {M("M")}), M("N")), TemplateTerm::subst1(M("M"), M("N"))));
}

}  // namespace

TwoSignature pcf_signature() {
  TwoSignature sig;
  sig.sorts.constructors = {{"Nat", 0}, {"Bool", 0}, {"~>", 2}};
  add_lambda(sig);
  sig.arities.push_back(TermAritySpec{"rec", 1, {plain(arrow(V(1), V(1)))}, V(1), false});
  sig.arities.push_back(TermAritySpec{"bottom", 1, {}, V(1), false});
  sig.arities.push_back(constant("ttt", S("Bool")));
  sig.arities.push_back(constant("fff", S("Bool")));
  sig.arities.push_back(constant("succ", arrow(S("Nat"), S("Nat"))));
  sig.arities.push_back(constant("pred", arrow(S("Nat"), S("Nat"))));
  sig.arities.push_back(constant("zero", arrow(S("Nat"), S("Bool"))));
  sig.arities.push_back(constant("condN", arrow(S("Bool"), arrow(S("Nat"), arrow(S("Nat"), S("Nat"))))));
  sig.arities.push_back(constant("condB", arrow(S("Bool"), arrow(S("Bool"), arrow(S("Bool"), S("Bool"))))));
  sig.arities.push_back(TermAritySpec{"nats", 0, {}, S("Nat"), true});

  auto cond = [](const char* c, const char* b, const char* x, const char* y) {
    return ap(ap(ap(C(c), C(b)), M(x)), M(y));
  };
  sig.rules.push_back(rule("condN_t", 0, {{"n", of(S("Nat"))}, {"m", of(S("Nat"))}}, {},
                           cond("condN", "ttt", "n", "m"), M("n")));
  sig.rules.push_back(rule("condN_f", 0, {{"n", of(S("Nat"))}, {"m", of(S("Nat"))}}, {},
                           cond("condN", "fff", "n", "m"), M("m")));
  sig.rules.push_back(rule("condB_t", 0, {{"u", of(S("Bool"))}, {"v", of(S("Bool"))}}, {},
                           cond("condB", "ttt", "u", "v"), M("u")));
  sig.rules.push_back(rule("condB_f", 0, {{"u", of(S("Bool"))}, {"v", of(S("Bool"))}}, {},
                           cond("condB", "fff", "u", "v"), M("v")));
  sig.rules.push_back(rule("succ_red", 0, {}, {"n"}, ap(C("succ"), nats(NatPattern::variable("n"))),
                           nats(NatPattern::succ("n"))));
  sig.rules.push_back(rule("zero_t", 0, {}, {}, ap(C("zero"), nats(NatPattern::zero())), C("ttt")));
  sig.rules.push_back(rule("zero_f", 0, {}, {"n"}, ap(C("zero"), nats(NatPattern::succ("n"))), C("fff")));
  sig.rules.push_back(rule("pred_succ", 0, {}, {"n"},
                           ap(C("pred"), ap(C("succ"), nats(NatPattern::variable("n")))),
                           nats(NatPattern::variable("n"))));
  sig.rules.push_back(rule("pred_z", 0, {}, {}, ap(C("pred"), nats(NatPattern::zero())), nats(NatPattern::zero())));
  sig.rules.push_back(rule("rec_a", 1, {{"g", of(arrow(V(1), V(1)))}}, {}, C("rec", {M("g")}),
                           ap(M("g"), C("rec", {M("g")}))));
  return resolve_signature(std::move(sig));
}

TwoSignature ulc_signature() {
  TwoSignature sig;
  sig.sorts.constructors = {{"*", 0}};
  sig.arities.push_back(TermAritySpec{"abs", 0, {ArgSpec{{S("*")}, S("*")}}, S("*"), false});
  sig.arities.push_back(TermAritySpec{"app", 0, {plain(S("*")), plain(S("*"))}, S("*"), false});
  sig.rules.push_back(rule("beta", 0, {{"M", MetaDecl{{S("*")}, S("*")}}, {"N", of(S("*"))}}, {},
                           ap(C("abs", {M("M")}), M("N")), TemplateTerm::subst1(M("M"), M("N"))));
  return resolve_signature(std::move(sig));
}

TwoSignature stlc_signature() {
  TwoSignature sig;
  sig.sorts.constructors = {{"*", 0}, {"~>", 2}};
  add_lambda(sig);
  return resolve_signature(std::move(sig));
}

namespace ulc {

Term var(std::size_t n) { return Term::var(n - 1); }
Term abs(Term body) { return Term::con("abs", {}, std::nullopt, {std::move(body)}, {1}); }
Term app(Term f, Term a) { return Term::con("app", {}, std::nullopt, {std::move(f), std::move(a)}, {0, 0}); }

namespace {
Term abs3(Term body) { return abs(abs(abs(std::move(body)))); }
}  // namespace

Term true_term() { return abs(abs(var(2))); }
Term false_term() { return abs(abs(var(1))); }

Term church(std::uint64_t n) {
  Term t = abs(abs(var(1)));
  for (std::uint64_t i = 0; i < n; ++i) t = abs(abs(app(var(2), app(app(t, var(2)), var(1)))));
  return t;
}

Term succ() { return abs3(app(var(2), app(app(var(3), var(2)), var(1)))); }

// λnfx. n (λgh. h (g f)) (λu. x) (λu. u)
Term pred() {
  return abs3(app(app(app(var(3), abs(abs(app(var(1), app(var(2), var(4)))))), abs(var(2))), abs(var(1))));
}

// λn. n (λx. F) T
Term zero() { return abs(app(app(var(1), abs(false_term())), true_term())); }

Term cond() { return abs3(app(app(var(3), var(2)), var(1))); }

Term omega() {
  Term w = abs(app(var(1), var(1)));
  return app(w, w);
}

Term theta() {
  Term a = abs(abs(app(var(1), app(app(var(2), var(2)), var(1)))));
  return app(a, a);
}

Term y() {
  Term half = abs(app(var(2), app(var(1), var(1))));
  return abs(app(half, half));
}

}  // namespace ulc

namespace {

Builder fixed(Term t) {
  return [t = std::move(t)](const BuilderInput&) { return t; };
}

Representation pcf_to_ulc(std::string name, Term fix) {
  Representation rep;
  rep.name = std::move(name);
  rep.source = pcf_signature();
  rep.target = ulc_signature();
  for (const auto& [sort, arity] : rep.source.sorts.constructors) rep.sort_map[sort] = SortExpr::con("*");
  rep.builders["abs"] = [](const BuilderInput& in) { return ulc::abs(in.children[0]); };
  rep.builders["app"] = [](const BuilderInput& in) { return ulc::app(in.children[0], in.children[1]); };
  rep.builders["rec"] = [fix = std::move(fix)](const BuilderInput& in) { return ulc::app(fix, in.children[0]); };
  rep.builders["bottom"] = fixed(ulc::omega());
  rep.builders["ttt"] = fixed(ulc::true_term());
  rep.builders["fff"] = fixed(ulc::false_term());
  rep.builders["succ"] = fixed(ulc::succ());
  rep.builders["pred"] = fixed(ulc::pred());
  rep.builders["zero"] = fixed(ulc::zero());
  rep.builders["condN"] = fixed(ulc::cond());
  rep.builders["condB"] = fixed(ulc::cond());
  rep.builders["nats"] = [](const BuilderInput& in) { return ulc::church(in.nat.value_or(0)); };
  return rep;
}

}  // namespace

Representation pcf_to_ulc_representation() { return pcf_to_ulc("pcf2ulc", ulc::theta()); }

Representation pcf_to_ulc_y_representation() { return pcf_to_ulc("pcf2ulc-y", ulc::y()); }

Representation identity_representation(const TwoSignature& sig, std::string name) {
  Representation rep;
  rep.name = std::move(name);
  rep.source = sig;
  rep.target = sig;
  for (const auto& [sort, arity] : sig.sorts.constructors) {
    std::vector<SortExpr> args;
    for (unsigned i = 1; i <= arity; ++i) args.push_back(V(i));
    rep.sort_map[sort] = SortExpr::con(sort, std::move(args));
  }
  for (const auto& ar : sig.arities) {
    rep.builders[ar.name] = [target = sig, name = ar.name](const BuilderInput& in) {
      return make_con(target, name, {in.sort_args.begin(), in.sort_args.end()},
                      {in.children.begin(), in.children.end()}, in.nat);
    };
  }
  return rep;
}

BuiltinCatalog::BuiltinCatalog() {
  signatures_.emplace("pcf", pcf_signature());
  signatures_.emplace("ulc", ulc_signature());
  signatures_.emplace("stlc", stlc_signature());
}

const BuiltinCatalog& BuiltinCatalog::instance() {
  static const BuiltinCatalog catalog;
  return catalog;
}

const TwoSignature* BuiltinCatalog::signature(std::string_view name) const {
  auto it = signatures_.find(name);
  return it == signatures_.end() ? nullptr : &it->second;
}

std::optional<Representation> BuiltinCatalog::representation(std::string_view name) const {
  if (name == "pcf2ulc") return pcf_to_ulc_representation();
  if (name == "pcf2ulc-y") return pcf_to_ulc_y_representation();
  constexpr std::string_view prefix = "identity:";
  if (name.starts_with(prefix)) {
    if (const TwoSignature* sig = signature(name.substr(prefix.size()))) {
      return identity_representation(*sig, std::string(name));
    }
  }
  return std::nullopt;
}

std::vector<std::string> BuiltinCatalog::signature_names() const {
  std::vector<std::string> out;
  for (const auto& [name, sig] : signatures_) out.push_back(name);
  return out;
}

std::vector<std::string> BuiltinCatalog::representation_names() const {
  std::vector<std::string> out{"pcf2ulc", "pcf2ulc-y"};
  for (const auto& [name, sig] : signatures_) out.push_back("identity:" + name);
  return out;
}

}  // namespace twosig
