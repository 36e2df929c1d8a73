// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "twosig/lang_std.hpp"
#include "twosig/laws.hpp"
#include "twosig/reduction.hpp"
#include "twosig/representation.hpp"
#include "twosig/text.hpp"

using namespace twosig;

namespace {

constexpr std::uint64_t kSeed = 0xC0FFEE;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    if (pass) detail << " first problem: " << what << ";";
    pass = false;
  }
};

std::string paper(const Term& t) { return format_term(t, Notation::Paper); }

// Strings copied verbatim from the printed Coq output.
void golden_translations(Outcome& o) {
  Representation rep = pcf_to_ulc_representation();
  Representation rep_y = pcf_to_ulc_y_representation();
  const TwoSignature& ulc = rep.target;
  auto tr = [&](const Representation& r, const char* text, const Context& ctx = {}) {
    return translate(r, ctx, parse_term(r.source, text, ctx));
  };
  Context fn{Sort("~>", {Sort("Nat"), Sort("Nat")})};
  auto rec_head = [&](const Representation& r) { return tr(r, "Rec 1", fn).children()[0]; };

  struct Golden {
    const char* name;
    Term got;
    const char* want;
  };
  std::vector<Golden> goldens{
      {"ULC_True", tr(rep, "ttt"), "Abs (Abs 2)"},
      {"ULC_False", tr(rep, "fff"), "Abs (Abs 1)"},
      {"ULC_Nat 0", tr(rep, "Nats 0"), "Abs (Abs 1)"},
      {"ULC_Nat 2", tr(rep, "Nats 2"), "Abs (Abs (2 @ (Abs (Abs (2 @ (Abs (Abs 1) @ 2 @ 1))) @ 2 @ 1)))"},
      {"ULC_succ", tr(rep, "succ"), "Abs (Abs (Abs (2 @ (3 @ 2 @ 1))))"},
      {"ULC_pred", tr(rep, "pred"), "Abs (Abs (Abs (3 @ Abs (Abs (1 @ (2 @ 4))) @ Abs 2 @ Abs 1)))"},
      {"ULC_zero", tr(rep, "zero"), "Abs (1 @ Abs (Abs (Abs 1)) @ Abs (Abs 2))"},
      {"ULC_cond (condN)", tr(rep, "condN"), "Abs (Abs (Abs (3 @ 2 @ 1)))"},
      {"ULC_cond (condB)", tr(rep, "condB"), "Abs (Abs (Abs (3 @ 2 @ 1)))"},
      {"ULC_omega", tr(rep, "bottom[Nat]"), "Abs (1 @ 1) @ Abs (1 @ 1)"},
      {"ULC_theta", rec_head(rep), "Abs (Abs (1 @ (2 @ 2 @ 1))) @ Abs (Abs (1 @ (2 @ 2 @ 1)))"},
      {"ULC_Y", rec_head(rep_y), "Abs (Abs (2 @ (1 @ 1)) @ Abs (2 @ (1 @ 1)))"},
      {"negation", tr(rep, "Abs (condB @ 1 @ fff @ ttt)"),
       "Abs (Abs (Abs (Abs (3 @ 2 @ 1))) @ 1 @ Abs (Abs 1) @ Abs (Abs 2))"},
  };
  for (const auto& g : goldens) {
    std::string got = paper(g.got);
    o.require(got == g.want, std::string(g.name) + " printed " + got);
    o.require(paper(parse_term(ulc, g.want)) == g.want, std::string(g.name) + " does not round-trip");
  }
  o.require(paper(tr(rep, "Rec 1", fn)) == std::string(paper(rec_head(rep))) + " @ 1", "rec is not Θ applied");
  o.detail << " " << goldens.size() << " golden strings compared;";
}

void base_rules(Outcome& o) {
  TwoSignature pcf = pcf_signature();
  Context fn{Sort("~>", {Sort("Nat"), Sort("Nat")})};
  struct Instance {
    const char* rule;
    const char* lhs;
    const char* rhs;
    Context ctx;
  };
  std::vector<Instance> cases{
      {"beta", "Abs (succ @ 1) @ Nats 3", "succ @ Nats 3", {}},
      {"condN_t", "condN @ ttt @ Nats 1 @ Nats 2", "Nats 1", {}},
      {"condN_f", "condN @ fff @ Nats 1 @ Nats 2", "Nats 2", {}},
      {"condB_t", "condB @ ttt @ fff @ ttt", "fff", {}},
      {"condB_f", "condB @ fff @ fff @ ttt", "ttt", {}},
      {"succ_red", "succ @ Nats 4", "Nats 5", {}},
      {"zero_t", "zero · Nats(0)", "ttt", {}},
      {"zero_f", "zero @ Nats 3", "fff", {}},
      {"pred_succ", "pred·(succ·Nats(7))", "Nats(7)", {}},
      {"pred_z", "pred @ Nats 0", "Nats 0", {}},
      {"rec_a", "Rec 1", "1 @ Rec 1", fn},
  };
  std::set<std::string> fired;
  for (const auto& c : cases) {
    Term lhs = parse_term(pcf, c.lhs, c.ctx);
    Term rhs = parse_term(pcf, c.rhs, c.ctx);
    bool at_root = false;
    for (const auto& s : root_steps(pcf, lhs)) at_root = at_root || (s.rule == c.rule && s.result == rhs);
    o.require(at_root, std::string(c.rule) + " did not fire at the root");
    Reachability r = reduces_to(pcf, c.ctx, lhs, rhs, SearchBounds{1, 64});
    o.require(lhs != rhs && r.verdict == Verdict::Yes && r.trace->steps.size() == 1,
              std::string(c.rule) + " is not exactly one step");
    if (at_root) fired.insert(c.rule);
  }
  o.require(fired.size() == pcf.rules.size(), "not every rule covered");
  o.detail << " " << fired.size() << "/" << pcf.rules.size() << " rules fire in exactly 1 root step;";
}

void turing_vs_y(Outcome& o) {
  TwoSignature ulc = ulc_signature();
  Context ctx{Sort("*")};
  Term g = Term::var(0);
  Term tg = ulc::app(ulc::theta(), g);
  Reachability t = reduces_to(ulc, ctx, tg, ulc::app(g, tg), SearchBounds{2, 64});
  o.require(t.verdict == Verdict::Yes && t.trace->steps.size() == 2, "Θg does not reach g(Θg) in 2 steps");
  Term yg = ulc::app(ulc::y(), g);
  Reachability y = reduces_to(ulc, ctx, yg, ulc::app(g, yg), SearchBounds{8, 4096});
  o.require(y.verdict != Verdict::Yes, "Yg reached g(Yg)");
  o.detail << " theta: " << to_string(t.verdict) << " in " << (t.trace ? t.trace->steps.size() : 0)
           << " steps; Y: " << to_string(y.verdict) << " after " << y.explored << " terms;";
}

void monad_laws(Outcome& o) {
  const char* wanted[] = {"monad law 1: subst(Var(i), m) = m[i]", "monad law 2: subst(t, identity) = t",
                          "monad law 3: subst(subst(t,f),g) = subst(t, f;g)",
                          "rename/subst coherence: rename(t,f) = subst(t, Var.f)"};
  for (const char* name : {"pcf", "ulc", "stlc"}) {
    LawReport r = check_monad_laws(*BuiltinCatalog::instance().signature(name), LawConfig{500, 5, kSeed, {}});
    std::size_t least = SIZE_MAX;
    for (const char* law : wanted) {
      const LawCheck* l = r.find(law);
      o.require(l && l->checked >= 500 && l->failures == 0, std::string(name) + ": " + law);
      if (l) least = std::min(least, l->checked);
    }
    o.detail << " " << name << " >= " << least << " samples;";
  }
}

void oracle_equivalence(Outcome& o) {
  Rng rng(kSeed);
  std::vector<std::string> pool{"x", "y", "a", "b"};
  std::size_t ulc_checked = 0;
  for (std::size_t n = 0; n < 300; ++n) {
    std::vector<std::string> from{"a", "b", "c"}, to{"b", "a", "d"};
    oracle::Named t = oracle::gen_named(from, pool, 1 + rng.below(4), rng);
    std::vector<std::pair<std::string, oracle::Named>> sigma;
    std::vector<Term> images;
    for (const auto& x : from) {
      oracle::Named img = oracle::gen_named(to, pool, 1 + rng.below(3), rng);
      images.push_back(oracle::to_de_bruijn(img, to));
      sigma.emplace_back(x, std::move(img));
    }
    Term expected = oracle::to_de_bruijn(oracle::subst(t, sigma), to);
    o.require(subst(oracle::to_de_bruijn(t, from), images) == expected, "subst disagrees with the named oracle");

    std::vector<std::string> inner{"y", "a", "b", "c"};
    oracle::Named body = oracle::gen_named(inner, pool, 1 + rng.below(4), rng);
    oracle::Named arg = oracle::gen_named(from, pool, 1 + rng.below(3), rng);
    Term one = oracle::to_de_bruijn(oracle::subst(body, {{"y", arg}}), from);
    o.require(subst_one(oracle::to_de_bruijn(body, inner), oracle::to_de_bruijn(arg, from)) == one,
              "subst_one disagrees with the named oracle");
    ++ulc_checked;
  }

  TwoSignature pcf = pcf_signature();
  Rng prng(kSeed + 1);
  std::size_t compared = 0, drawn = 0;
  for (; drawn < 20000 && compared < 150; ++drawn) {
    Sort sort(prng.coin() ? "Nat" : "Bool");
    auto t = gen_term(pcf, {}, sort, 1 + prng.below(5), prng);
    if (!t) continue;
    auto v = oracle::eval_pcf(*t, 200);
    if (!v) continue;
    ++compared;
    Normalization n = normalize(pcf, *t, 100000);
    Term want = v->kind == oracle::PcfValue::Kind::Nat
                    ? make_con(pcf, "nats", {}, {}, v->nat)
                    : make_con(pcf, v->boolean ? "ttt" : "fff", {}, {});
    o.require(!n.exhausted && n.result == want, "normalize disagrees with the PCF evaluator on " + format_term(*t));
  }
  o.require(compared >= 100, "fewer than 100 terminating PCF programs");
  o.detail << " ulc " << ulc_checked << " terms (subst and subst_one); pcf " << compared << " programs of "
           << drawn << " drawn;";
}

void satisfaction(Outcome& o) {
  Representation rep = pcf_to_ulc_representation();
  SatisfactionReport r = check_satisfaction(rep, SamplingConfig{200, 4, {16, 4096}, kSeed});
  o.require(r.rules.size() == 11, "expected eleven rules");
  for (const auto& rule : r.rules) {
    if (rule.no > 0) {
      o.require(false, rule.rule + " has " + std::to_string(rule.no) + " No");
      o.detail << " " << rule.rule << ": yes=" << rule.yes << " unknown=" << rule.unknown << " no=" << rule.no << ";";
    }
  }
  const RuleSatisfaction* beta = r.find("beta");
  const RuleSatisfaction* rec = r.find("rec_a");
  o.require(beta && beta->yes == beta->attempted && beta->attempted > 0 && beta->max_yes_steps <= 1,
            "beta not all-Yes within 1 step");
  o.require(rec && rec->yes == rec->attempted && rec->attempted > 0 && rec->max_yes_steps <= 2,
            "rec not all-Yes within 2 steps");
  if (beta && rec) {
    o.detail << " beta " << beta->yes << "/" << beta->attempted << " max " << beta->max_yes_steps << "; rec "
             << rec->yes << "/" << rec->attempted << " max " << rec->max_yes_steps << ";";
  }
  SatisfactionReport y = check_satisfaction(pcf_to_ulc_y_representation(), SamplingConfig{200, 4, {16, 4096}, kSeed});
  const RuleSatisfaction* yrec = y.find("rec_a");
  o.require(yrec && yrec->yes == 0, "Y variant proves rec");
  if (yrec) o.detail << " Y variant rec yes=" << yrec->yes << "/" << yrec->attempted << ";";
}

void faithfulness(Outcome& o) {
  Representation rep = pcf_to_ulc_representation();
  SamplingConfig cfg{200, 4, {32, 4096}, kSeed};
  FaithfulnessReport f = check_faithfulness(rep, cfg);
  o.require(f.terms >= 200, "fewer than 200 terms");
  o.require(f.no == 0 && f.unknown == 0, "unreachable reducts");
  o.detail << " " << f.terms << " terms, " << f.steps_checked << " steps, yes=" << f.yes << " unknown=" << f.unknown
           << " no=" << f.no << " max " << f.max_yes_steps << ";";
}

void translation_laws(Outcome& o) {
  LawReport r = check_translation_laws(pcf_to_ulc_representation(), 300, 4, kSeed);
  for (const auto& l : r.laws) {
    o.require(l.checked >= 300 && l.failures == 0, l.law);
    o.detail << " " << l.checked << "/" << l.failures;
  }
  o.detail << " (checked/failures per law);";
}

void reduction_laws(Outcome& o) {
  for (const char* name : {"pcf", "ulc"}) {
    LawReport r = check_reduction_laws(*BuiltinCatalog::instance().signature(name), LawConfig{300, 5, kSeed, {16, 20000}});
    for (const auto& l : r.laws) {
      o.require(l.checked >= 300 && l.failures == 0, std::string(name) + ": " + l.law);
      o.detail << " " << name << ":" << l.checked << "/" << l.failures;
    }
  }
  o.detail << " (checked/failures);";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<void(Outcome&)> run;
  };
  std::vector<Criterion> criteria{
      {1, "golden translations", golden_translations},
      {2, "PCF base rules", base_rules},
      {3, "Turing vs Y separation", turing_vs_y},
      {4, "monad-law suite", monad_laws},
      {5, "oracle equivalence", oracle_equivalence},
      {6, "satisfaction of pcf2ulc", satisfaction},
      {7, "faithfulness", faithfulness},
      {8, "translation laws", translation_laws},
      {9, "reduction congruence and monotonicity", reduction_laws},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("criterion %d %s: %s (%.2fs)%s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
