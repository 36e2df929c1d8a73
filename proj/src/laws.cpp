#include "twosig/laws.hpp"

#include <algorithm>
#include <functional>

#include "twosig/text.hpp"

namespace twosig {

bool LawReport::ok() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawCheck& l) { return l.failures == 0; });
}

const LawCheck* LawReport::find(std::string_view law) const {
  for (const auto& l : laws) {
    if (l.law == law) return &l;
  }
  return nullptr;
}

bool trace_is_valid(const TwoSignature& sig, const Trace& trace) {
  Term cur = trace.start;
  for (const auto& s : trace.steps) {
    auto next = successors(sig, cur);
    if (std::find(next.begin(), next.end(), s.result) == next.end()) return false;
    cur = s.result;
  }
  return true;
}

namespace {

constexpr std::size_t kSortDepth = 2;
constexpr std::size_t kAttemptsPerSample = 50;

void record(LawCheck& law, bool holds, const std::function<std::string()>& describe) {
  ++law.checked;
  if (holds) return;
  if (law.failures++ == 0) law.first_failure = describe();
}

void record(LawCheck& law, const Reachability& r, const std::function<std::string()>& describe) {
  if (r.verdict == Verdict::Unknown) {
    ++law.inconclusive;
    return;
  }
  record(law, r.verdict == Verdict::Yes, describe);
}

struct Sample {
  Context ctx;
  Sort sort;
  Term term;
};

class Sampler {
 public:
  Sampler(const TwoSignature& sig, std::uint64_t seed) : sig_(sig), rng_(seed) {}

  Rng& rng() { return rng_; }

  Context context(std::size_t min_len, std::size_t max_len) {
    Context ctx;
    std::size_t n = min_len + rng_.below(max_len - min_len + 1);
    for (std::size_t i = 0; i < n; ++i) ctx.push_back(gen_sort(sig_.sorts, kSortDepth, rng_));
    return ctx;
  }

  std::optional<Sample> term(std::size_t depth, std::size_t min_ctx = 0) {
    for (std::size_t attempt = 0; attempt < kAttemptsPerSample; ++attempt) {
      Context ctx = context(min_ctx, std::max<std::size_t>(min_ctx, 3));
      Sort sort = gen_sort(sig_.sorts, kSortDepth, rng_);
      if (auto t = gen_term(sig_, ctx, sort, depth, rng_)) return Sample{std::move(ctx), std::move(sort), std::move(*t)};
    }
    return std::nullopt;
  }

  /// A context containing every entry of `ctx`, and where each one landed.
  std::pair<Context, Renaming> superset(const Context& ctx) {
    Context wider = context(0, 2);
    Renaming f;
    for (const auto& s : ctx) {
      std::size_t at = rng_.below(wider.size() + 1);
      for (auto& j : f) {
        if (j >= at) ++j;
      }
      wider.insert(wider.begin() + static_cast<std::ptrdiff_t>(at), s);
      f.push_back(at);
    }
    return {std::move(wider), std::move(f)};
  }

  /// A random sort-preserving renaming out of `ctx`, not necessarily injective.
  std::pair<Context, Renaming> renaming(const Context& ctx) {
    auto [wider, f] = superset(ctx);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      std::vector<std::size_t> same;
      for (std::size_t j = 0; j < wider.size(); ++j) {
        if (wider[j] == ctx[i]) same.push_back(j);
      }
      f[i] = same[rng_.below(same.size())];
    }
    return {std::move(wider), std::move(f)};
  }

  /// A random substitution out of `ctx`; images fall back to variables.
  SubstMap substitution(const Context& ctx, std::size_t depth) {
    auto [wider, f] = superset(ctx);
    SubstMap m{ctx, wider, {}};
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      auto u = rng_.coin() ? gen_term(sig_, wider, ctx[i], depth, rng_) : std::nullopt;
      m.images.push_back(u ? std::move(*u) : Term::var(f[i]));
    }
    return m;
  }

  /// 1 to 3 random steps from t; nullopt when t is normal.
  std::optional<std::pair<Term, std::size_t>> walk(const Term& t) {
    Term cur = t;
    std::size_t steps = 0, want = 1 + rng_.below(3);
    while (steps < want) {
      auto next = successors(sig_, cur);
      if (next.empty()) break;
      cur = next[rng_.below(next.size())];
      ++steps;
    }
    if (steps == 0) return std::nullopt;
    return std::pair{std::move(cur), steps};
  }

 private:
  const TwoSignature& sig_;
  Rng rng_;
};

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
}

std::size_t child_depth(std::size_t depth) { return depth > 2 ? depth - 2 : 1; }

std::vector<Term> compose(const std::vector<Term>& f, const std::vector<Term>& g) {
  std::vector<Term> out;
  out.reserve(f.size());
  for (const auto& t : f) out.push_back(subst(t, g));
  return out;
}

/// The map used under `binders` fresh variables.
std::vector<Term> lifted(const std::vector<Term>& f, std::size_t binders) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < binders; ++i) out.push_back(Term::var(i));
  for (const auto& t : f) out.push_back(shift(t, binders));
  return out;
}

void positions(const Term& t, Position& at, std::vector<Position>& out) {
  out.push_back(at);
  if (t.is_var()) return;
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    at.push_back(i);
    positions(t.children()[i], at, out);
    at.pop_back();
  }
}

const Term& subterm(const Term& t, const Position& p, std::size_t from = 0) {
  return from == p.size() ? t : subterm(t.children()[p[from]], p, from + 1);
}

Term replace(const Term& t, const Position& p, const Term& with, std::size_t from = 0) {
  if (from == p.size()) return with;
  return t.with_child(p[from], replace(t.children()[p[from]], p, with, from + 1));
}

std::size_t occurrences(const Term& t, std::size_t index, std::size_t binders = 0) {
  if (t.is_var()) return t.index() == index + binders ? 1 : 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    n += occurrences(t.children()[i], index, binders + t.child_binders()[i]);
  }
  return n;
}

std::string show(const Term& t) { return format_term(t); }

}  // namespace

LawReport check_monad_laws(const TwoSignature& sig, const LawConfig& config) {
  LawCheck law1{"monad law 1: subst(Var(i), m) = m[i]"};
  LawCheck law2{"monad law 2: subst(t, identity) = t"};
  LawCheck law3{"monad law 3: subst(subst(t,f),g) = subst(t, f;g)"};
  LawCheck sorts{"sort preservation: subst keeps the sort"};
  LawCheck rename_id{"rename identity: rename(t, id) = t"};
  LawCheck rename_comp{"rename composition: rename(rename(t,f),g) = rename(t, g.f)"};
  LawCheck coherence{"rename/subst coherence: rename(t,f) = subst(t, Var.f)"};
  LawCheck commute{"constructor commutation: subst(K(ts), m) = K(subst(ts, lifted m))"};
  Sampler s(sig, stream_seed(config.seed, 0x3AD));
  std::size_t cd = child_depth(config.depth);

  for (std::size_t n = 0; n < config.samples; ++n) {
    auto sample = s.term(config.depth, 1);
    if (!sample) continue;
    const auto& [ctx, sort, t] = *sample;

    SubstMap f = s.substitution(ctx, cd);
    bool law1_holds = true;
    for (std::size_t i = 0; i < ctx.size(); ++i) law1_holds = law1_holds && subst(Term::var(i), f) == f.images[i];
    record(law1, law1_holds, [&] { return "context " + format_context(ctx); });

    record(law2, subst(t, SubstMap::identity(ctx)) == t, [&] { return show(t); });

    SubstMap g = s.substitution(f.target, cd);
    record(law3, subst(subst(t, f), g) == subst(t, compose(f.images, g.images)), [&] { return show(t); });

    record(sorts, typecheck(sig, f.target, subst(t, f)) == sort, [&] { return show(t); });

    Renaming id(ctx.size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
    record(rename_id, rename(t, id) == t, [&] { return show(t); });

    auto [mid, r1] = s.renaming(ctx);
    auto [outer, r2] = s.renaming(mid);
    Renaming both(r1.size());
    for (std::size_t i = 0; i < r1.size(); ++i) both[i] = r2[r1[i]];
    record(rename_comp, rename(rename(t, r1), r2) == rename(t, both), [&] { return show(t); });

    std::vector<Term> as_vars;
    for (auto j : r1) as_vars.push_back(Term::var(j));
    record(coherence, rename(t, r1) == subst(t, as_vars), [&] { return show(t); });

    if (!t.is_var()) {
      std::vector<Term> kids;
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        kids.push_back(subst(t.children()[i], lifted(f.images, t.child_binders()[i])));
      }
      Term expected = Term::con(t.arity(), t.sort_args(), t.nat(), std::move(kids), t.child_binders());
      record(commute, subst(t, f) == expected, [&] { return show(t); });
    }
  }
  return LawReport{{law1, law2, law3, sorts, rename_id, rename_comp, coherence, commute}};
}

LawReport check_reduction_laws(const TwoSignature& sig, const LawConfig& config) {
  LawCheck subject{"subject reduction: every step keeps the sort"};
  LawCheck congruence{"constructor monotonicity: c ~>* c' implies K[c] ~>* K[c']"};
  LawCheck subst_left{"substitution monotonicity: s ~>* s' implies subst(s,m) ~>* subst(s',m)"};
  LawCheck subst_right{"substitution monotonicity: m ~>* m' implies subst(t,m) ~>* subst(t,m')"};
  Sampler s(sig, stream_seed(config.seed, 0x4ED));
  std::size_t cd = child_depth(config.depth);
  std::size_t max_draws = config.samples * 200;
  auto done = [&](const LawCheck& l) { return l.checked >= config.samples; };

  for (std::size_t draw = 0; draw < max_draws; ++draw) {
    if (done(subject) && done(congruence) && done(subst_left) && done(subst_right)) break;
    auto sample = s.term(config.depth);
    if (!sample) continue;
    const auto& [ctx, sort, t] = *sample;

    if (!done(subject)) {
      auto steps = step_all(sig, t);
      if (!steps.empty()) {
        bool holds = true;
        for (const auto& st : steps) {
          try {
            holds = holds && typecheck(sig, ctx, st.result) == sort;
          } catch (const TypeError&) {
            holds = false;
          }
        }
        record(subject, holds, [&] { return show(t); });
      }
    }

    if (!done(congruence) && !t.is_var() && !t.children().empty()) {
      std::vector<Position> all;
      Position at;
      positions(t, at, all);
      const Position& p = all[1 + s.rng().below(all.size() - 1)];
      if (auto w = s.walk(subterm(t, p))) {
        Term after = replace(t, p, w->first);
        SearchBounds b = config.bounds;
        b.max_steps = w->second;
        Reachability r = reduces_to(sig, ctx, t, after, b);
        bool valid = r.verdict != Verdict::Yes || (trace_is_valid(sig, *r.trace) && r.trace->end() == after);
        if (!valid) r.verdict = Verdict::No;
        record(congruence, r, [&] { return show(t) + " at " + format_position(p); });
      }
    }

    if (!done(subst_left)) {
      if (auto w = s.walk(t)) {
        SubstMap m = s.substitution(ctx, cd);
        SearchBounds b = config.bounds;
        b.max_steps = w->second;
        record(subst_left, reduces_to(sig, m.target, subst(t, m), subst(w->first, m), b), [&] { return show(t); });
      }
    }

    if (!done(subst_right) && !ctx.empty()) {
      SubstMap m = s.substitution(ctx, cd);
      SubstMap m2 = m;
      std::size_t budget = 0;
      for (std::size_t i = 0; i < ctx.size(); ++i) {
        if (!s.rng().coin()) continue;
        if (auto w = s.walk(m.images[i])) {
          m2.images[i] = w->first;
          budget += w->second * occurrences(t, i);
        }
      }
      if (budget > 0 && budget <= config.bounds.max_steps) {
        SearchBounds b = config.bounds;
        b.max_steps = budget;
        record(subst_right, reduces_to(sig, m.target, subst(t, m), subst(t, m2), b), [&] { return show(t); });
      }
    }
  }
  return LawReport{{subject, congruence, subst_left, subst_right}};
}

}  // namespace twosig
