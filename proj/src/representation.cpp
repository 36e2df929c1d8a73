#include "twosig/representation.hpp"

#include <algorithm>

#include "twosig/text.hpp"

namespace twosig {

Sort map_sort(const Representation& rep, const Sort& s) {
  auto it = rep.sort_map.find(s.name);
  if (it == rep.sort_map.end()) throw TranslationError("no sort case for '" + s.name + "' in " + rep.name);
  std::vector<Sort> images;
  images.reserve(s.args.size());
  for (const auto& a : s.args) images.push_back(map_sort(rep, a));
  return eval_sort_expr(it->second, images);
}

Context retype_context(const Representation& rep, const Context& ctx) {
  Context out;
  out.reserve(ctx.size());
  for (const auto& s : ctx) out.push_back(map_sort(rep, s));
  return out;
}

namespace {

Term run_builder(const Representation& rep, const TermAritySpec& arity, std::span<const Sort> source_sort_args,
                 std::optional<std::uint64_t> nat, std::span<const Term> children, const Context* target_ctx) {
  auto it = rep.builders.find(arity.name);
  if (it == rep.builders.end()) throw TranslationError("no builder for arity '" + arity.name + "' in " + rep.name);
  std::vector<Sort> mapped;
  mapped.reserve(source_sort_args.size());
  for (const auto& s : source_sort_args) mapped.push_back(map_sort(rep, s));
  Term out = it->second(BuilderInput{mapped, nat, children});
  if (target_ctx) {
    Sort want = map_sort(rep, eval_sort_expr(arity.result, source_sort_args));
    Sort got;
    try {
      got = typecheck(rep.target, *target_ctx, out);
    } catch (const TypeError& e) {
      throw TranslationError("builder for '" + arity.name + "' in " + rep.name + " is ill-typed: " + e.what());
    }
    if (!(got == want)) {
      throw TranslationError("builder for '" + arity.name + "' in " + rep.name + " yields sort " + format_sort(got) +
                             ", expected " + format_sort(want));
    }
  }
  return out;
}

Term translate_in(const Representation& rep, const Context& src_ctx, const Context& tgt_ctx, const Term& t) {
  if (t.is_var()) return t;
  const TermAritySpec* ar = rep.source.find_arity(t.arity());
  if (!ar) throw TranslationError("unknown source arity '" + t.arity() + "'");
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  for (std::size_t i = 0; i < ar->args.size(); ++i) {
    std::vector<Sort> binders, mapped;
    for (const auto& b : ar->args[i].binders) {
      binders.push_back(eval_sort_expr(b, t.sort_args()));
      mapped.push_back(map_sort(rep, binders.back()));
    }
    kids.push_back(translate_in(rep, extend(src_ctx, binders), extend(tgt_ctx, mapped), t.children()[i]));
  }
  return run_builder(rep, *ar, t.sort_args(), t.nat(), kids, &tgt_ctx);
}

}  // namespace

Term apply_builder(const Representation& rep, const TermAritySpec& arity, std::span<const Sort> source_sort_args,
                   std::optional<std::uint64_t> nat, std::span<const Term> children, const Context& target_ctx) {
  return run_builder(rep, arity, source_sort_args, nat, children, &target_ctx);
}

Term translate(const Representation& rep, const Context& ctx, const Term& term) {
  return translate_in(rep, ctx, retype_context(rep, ctx), term);
}

std::size_t SatisfactionReport::total_no() const {
  std::size_t n = 0;
  for (const auto& r : rules) n += r.no;
  return n;
}

std::size_t SatisfactionReport::total_unknown() const {
  std::size_t n = 0;
  for (const auto& r : rules) n += r.unknown;
  return n;
}

bool SatisfactionReport::all_yes() const { return total_no() == 0 && total_unknown() == 0; }

const RuleSatisfaction* SatisfactionReport::find(std::string_view rule) const {
  for (const auto& r : rules) {
    if (r.rule == rule) return &r;
  }
  return nullptr;
}

namespace {

constexpr std::size_t kSortDepth = 2;
constexpr std::size_t kMaxUnknownExamples = 3;
constexpr std::uint64_t kNatRange = 4;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
}

Context random_context(const SortSignature& sorts, std::size_t max_len, Rng& rng) {
  Context ctx;
  std::size_t n = rng.below(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) ctx.push_back(gen_sort(sorts, kSortDepth, rng));
  return ctx;
}

}  // namespace

SatisfactionReport check_satisfaction(const Representation& rep, const SamplingConfig& config) {
  SatisfactionReport report;
  for (std::size_t r = 0; r < rep.source.rules.size(); ++r) {
    const RuleTemplate& rule = rep.source.rules[r];
    RuleSatisfaction out;
    out.rule = rule.name;
    Rng rng(stream_seed(config.seed, r));
    for (std::size_t sample = 0; sample < config.samples; ++sample) {
      Match m;
      for (unsigned d = 0; d < rule.degree; ++d) m.sort_assignment.push_back(gen_sort(rep.source.sorts, kSortDepth, rng));
      Context tctx = retype_context(rep, random_context(rep.source.sorts, 2, rng));
      bool complete = true;
      for (const auto& [name, decl] : rule.metavars) {
        std::vector<Sort> binders;
        for (const auto& b : decl.binders) binders.push_back(map_sort(rep, eval_sort_expr(b, m.sort_assignment)));
        Sort want = map_sort(rep, eval_sort_expr(decl.body, m.sort_assignment));
        auto t = gen_term(rep.target, extend(tctx, binders), want, config.depth, rng);
        if (!t) {
          complete = false;
          break;
        }
        m.metas.emplace(name, std::move(*t));
      }
      if (!complete) continue;
      for (const auto& n : rule.natvars) m.nats[n] = rng.below(kNatRange);

      ConBuilder via_rep = [&rep](const TermAritySpec& ar, std::vector<Sort> sort_args,
                                  std::optional<std::uint64_t> nat, std::vector<Term> kids) {
        return run_builder(rep, ar, sort_args, nat, kids, nullptr);
      };
      Term lhs = evaluate_template(rep.source, rule.lhs, m, via_rep);
      Term rhs = evaluate_template(rep.source, rule.rhs, m, via_rep);

      ++out.attempted;
      Reachability reach = reduces_to(rep.target, tctx, lhs, rhs, config.bounds);
      switch (reach.verdict) {
        case Verdict::Yes:
          ++out.yes;
          out.max_yes_steps = std::max(out.max_yes_steps, reach.trace->steps.size());
          break;
        case Verdict::No:
          ++out.no;
          out.counterexamples.push_back({rule.name, tctx, lhs, rhs, Verdict::No});
          break;
        case Verdict::Unknown:
          ++out.unknown;
          if (out.unknown <= kMaxUnknownExamples) out.counterexamples.push_back({rule.name, tctx, lhs, rhs, Verdict::Unknown});
          break;
      }
    }
    report.rules.push_back(std::move(out));
  }
  return report;
}

FaithfulnessReport check_faithfulness(const Representation& rep, const SamplingConfig& config,
                                      const SatisfactionReport* satisfaction) {
  FaithfulnessReport report;
  report.precondition_established = satisfaction && satisfaction->total_no() == 0;
  Rng rng(stream_seed(config.seed, 0xFA17));
  for (std::size_t sample = 0; sample < config.samples; ++sample) {
    Context ctx = random_context(rep.source.sorts, 2, rng);
    Sort sort = gen_sort(rep.source.sorts, kSortDepth, rng);
    auto t = gen_term(rep.source, ctx, sort, config.depth, rng);
    if (!t) continue;
    ++report.terms;
    Context tctx = retype_context(rep, ctx);
    Term image = translate(rep, ctx, *t);
    for (const auto& step : step_all(rep.source, *t)) {
      ++report.steps_checked;
      Term reduct_image = translate(rep, ctx, step.result);
      Reachability reach = reduces_to(rep.target, tctx, image, reduct_image, config.bounds);
      switch (reach.verdict) {
        case Verdict::Yes:
          ++report.yes;
          report.max_yes_steps = std::max(report.max_yes_steps, reach.trace->steps.size());
          continue;
        case Verdict::No:
          ++report.no;
          break;
        case Verdict::Unknown:
          ++report.unknown;
          break;
      }
      report.violations.push_back({ctx, *t, step.result, step.rule, reach.verdict});
    }
  }
  return report;
}

namespace {

void record(LawCheck& law, bool holds, const std::function<std::string()>& describe) {
  ++law.checked;
  if (holds) return;
  if (law.failures++ == 0) law.first_failure = describe();
}

}  // namespace

TranslationLawReport check_translation_laws(const Representation& rep, std::size_t samples, std::size_t depth,
                                            std::uint64_t seed) {
  LawCheck unit{"unit: Var(i) translates to Var(i)"};
  LawCheck typing{"typing: translation preserves sorts"};
  LawCheck lift{"init_lift: translate(rename(t,f)) = rename(translate(t),f)"};
  LawCheck subst_law{"init_subst: translate(subst(t,m)) = subst(translate(t),translate.m)"};
  LawCheck subst1{"init_subst: translate(M[N]) = translate(M)[translate(N)]"};
  Rng rng(stream_seed(seed, 0x1A75));
  const auto& sorts = rep.source.sorts;
  std::size_t child_depth = depth > 1 ? depth - 1 : 1;

  for (std::size_t sample = 0; sample < samples; ++sample) {
    Context ctx = random_context(sorts, 3, rng);
    if (ctx.empty()) ctx.push_back(gen_sort(sorts, kSortDepth, rng));
    Sort sort = gen_sort(sorts, kSortDepth, rng);
    auto t = gen_term(rep.source, ctx, sort, depth, rng);
    if (!t) continue;
    Term image = translate(rep, ctx, *t);

    std::size_t vi = rng.below(ctx.size());
    record(unit, translate(rep, ctx, Term::var(vi)) == Term::var(vi), [&] { return "index " + std::to_string(vi); });
    record(typing, typecheck(rep.target, retype_context(rep, ctx), image) == map_sort(rep, typecheck(rep.source, ctx, *t)),
           [&] { return format_term(*t); });

    // Renaming into a context that contains ctx's entries, permuted, among extra ones.
    Context wider = random_context(sorts, 2, rng);
    Renaming f;
    for (const auto& s : ctx) {
      std::size_t at = rng.below(wider.size() + 1);
      for (auto& j : f) {
        if (j >= at) ++j;
      }
      wider.insert(wider.begin() + static_cast<std::ptrdiff_t>(at), s);
      f.push_back(at);
    }
    Term renamed = rename(*t, f);
    record(lift, translate(rep, wider, renamed) == rename(image, f), [&] { return format_term(*t); });

    Context target = random_context(sorts, 2, rng);
    std::vector<Term> images, translated_images;
    bool complete = true;
    for (const auto& s : ctx) {
      auto u = gen_term(rep.source, target, s, child_depth, rng);
      if (!u) {
        complete = false;
        break;
      }
      translated_images.push_back(translate(rep, target, *u));
      images.push_back(std::move(*u));
    }
    if (complete) {
      record(subst_law, translate(rep, target, subst(*t, images)) == subst(image, translated_images),
             [&] { return format_term(*t); });
    }

    Sort bound = gen_sort(sorts, kSortDepth, rng);
    Context inner = extend(ctx, bound);
    auto body = gen_term(rep.source, inner, sort, depth, rng);
    auto arg = gen_term(rep.source, ctx, bound, child_depth, rng);
    if (body && arg) {
      record(subst1,
             translate(rep, ctx, subst_one(*body, *arg)) ==
                 subst_one(translate(rep, inner, *body), translate(rep, ctx, *arg)),
             [&] { return format_term(*body) + " [" + format_term(*arg) + "]"; });
    }
  }
  return TranslationLawReport{{unit, typing, lift, subst_law, subst1}};
}

}  // namespace twosig
