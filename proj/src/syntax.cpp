#include "twosig/syntax.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>

namespace twosig {

namespace {

inline std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::size_t Sort::hash() const {
  std::size_t h = std::hash<std::string>{}(name);
  for (const auto& a : args) h = mix(h, a.hash());
  return h;
}

bool operator<(const Sort& a, const Sort& b) {
  if (a.name != b.name) return a.name < b.name;
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

Context extend(const Context& ctx, std::span<const Sort> binders) {
  Context out;
  out.reserve(ctx.size() + binders.size());
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) out.push_back(*it);
  out.insert(out.end(), ctx.begin(), ctx.end());
  return out;
}

Context extend(const Context& ctx, const Sort& binder) { return extend(ctx, std::span<const Sort>(&binder, 1)); }

namespace detail {

struct TermNode {
  bool is_var = false;
  std::size_t index = 0;
  std::string arity;
  std::vector<Sort> sort_args;
  std::optional<std::uint64_t> nat;
  std::vector<Term> children;
  std::vector<std::uint32_t> binders;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t depth = 1;
  std::size_t free_bound = 0;
};

}  // namespace detail

Term Term::var(std::size_t index) {
  auto n = std::make_shared<detail::TermNode>();
  n->is_var = true;
  n->index = index;
  n->hash = mix(0x51ed270b27a3b1ULL, index);
  n->free_bound = index + 1;
  return Term(std::move(n));
}

Term Term::con(std::string arity, std::vector<Sort> sort_args, std::optional<std::uint64_t> nat,
               std::vector<Term> children, std::vector<std::uint32_t> child_binders) {
  if (child_binders.size() != children.size()) {
    throw std::invalid_argument("Term::con: binder counts do not match children for '" + arity + "'");
  }
  auto n = std::make_shared<detail::TermNode>();
  std::size_t h = std::hash<std::string>{}(arity);
  for (const auto& s : sort_args) h = mix(h, s.hash());
  if (nat) h = mix(h, static_cast<std::size_t>(*nat) * 31 + 7);
  for (std::size_t i = 0; i < children.size(); ++i) {
    const Term& c = children[i];
    h = mix(h, c.hash());
    n->size += c.size();
    n->depth = std::max(n->depth, c.depth() + 1);
    std::size_t fb = c.free_bound();
    if (fb > child_binders[i]) n->free_bound = std::max(n->free_bound, fb - child_binders[i]);
  }
  n->hash = h;
  n->arity = std::move(arity);
  n->sort_args = std::move(sort_args);
  n->nat = nat;
  n->children = std::move(children);
  n->binders = std::move(child_binders);
  return Term(std::move(n));
}

bool Term::is_var() const { return node_->is_var; }
std::size_t Term::index() const { return node_->index; }
const std::string& Term::arity() const { return node_->arity; }
const std::vector<Sort>& Term::sort_args() const { return node_->sort_args; }
std::optional<std::uint64_t> Term::nat() const { return node_->nat; }
const std::vector<Term>& Term::children() const { return node_->children; }
const std::vector<std::uint32_t>& Term::child_binders() const { return node_->binders; }
std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::depth() const { return node_->depth; }
std::size_t Term::free_bound() const { return node_->free_bound; }

Term Term::with_child(std::size_t i, Term child) const {
  std::vector<Term> kids = node_->children;
  kids.at(i) = std::move(child);
  return con(node_->arity, node_->sort_args, node_->nat, std::move(kids), node_->binders);
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.is_var != y.is_var || x.size != y.size) return false;
  if (x.is_var) return x.index == y.index;
  return x.arity == y.arity && x.nat == y.nat && x.sort_args == y.sort_args &&
         x.binders == y.binders && x.children == y.children;
}

Term make_con(const TwoSignature& sig, std::string_view arity, std::vector<Sort> sort_args,
              std::vector<Term> children, std::optional<std::uint64_t> nat) {
  const TermAritySpec* ar = sig.find_arity(arity);
  if (!ar) throw TypeError("unknown arity '" + std::string(arity) + "'");
  std::vector<std::uint32_t> binders;
  binders.reserve(ar->args.size());
  for (const auto& a : ar->args) binders.push_back(static_cast<std::uint32_t>(a.binders.size()));
  if (binders.size() != children.size()) {
    throw TypeError("arity '" + std::string(arity) + "' expects " + std::to_string(binders.size()) +
                    " children, got " + std::to_string(children.size()));
  }
  return Term::con(std::string(arity), std::move(sort_args), nat, std::move(children), std::move(binders));
}

Sort eval_sort_expr(const SortExpr& expr, std::span<const Sort> assignment) {
  if (expr.is_var()) {
    if (expr.var < 1 || expr.var > assignment.size()) {
      throw std::out_of_range("degree variable " + std::to_string(expr.var) +
                              " outside an assignment of length " + std::to_string(assignment.size()));
    }
    return assignment[expr.var - 1];
  }
  std::vector<Sort> args;
  args.reserve(expr.args.size());
  for (const auto& a : expr.args) args.push_back(eval_sort_expr(a, assignment));
  return Sort(expr.name, std::move(args));
}

namespace {

void check_sort(const SortSignature& sorts, const Sort& s) {
  auto it = sorts.constructors.find(s.name);
  if (it == sorts.constructors.end()) throw TypeError("unknown sort constructor '" + s.name + "'");
  if (it->second != s.args.size()) throw TypeError("sort constructor arity mismatch for '" + s.name + "'");
  for (const auto& a : s.args) check_sort(sorts, a);
}

Sort typecheck_in(const TwoSignature& sig, Context& ctx, const Term& t) {
  if (t.is_var()) {
    if (t.index() >= ctx.size()) throw TypeError("unbound index #" + std::to_string(t.index()));
    return ctx[t.index()];
  }
  const TermAritySpec* ar = sig.find_arity(t.arity());
  if (!ar) throw TypeError("unknown arity '" + t.arity() + "'");
  if (t.sort_args().size() != ar->degree) {
    throw TypeError("arity '" + ar->name + "' expects " + std::to_string(ar->degree) + " sort arguments");
  }
  for (const auto& s : t.sort_args()) check_sort(sig.sorts, s);
  if (ar->nat_indexed && !t.nat()) throw TypeError("missing nat payload on '" + ar->name + "'");
  if (!ar->nat_indexed && t.nat()) throw TypeError("unexpected nat payload on '" + ar->name + "'");
  if (t.children().size() != ar->args.size()) {
    throw TypeError("arity '" + ar->name + "' expects " + std::to_string(ar->args.size()) + " children");
  }
  for (std::size_t i = 0; i < ar->args.size(); ++i) {
    const ArgSpec& spec = ar->args[i];
    if (t.child_binders()[i] != spec.binders.size()) throw TypeError("binder count mismatch in '" + ar->name + "'");
    std::vector<Sort> binders;
    for (const auto& b : spec.binders) binders.push_back(eval_sort_expr(b, t.sort_args()));
    Context inner = extend(ctx, binders);
    Sort got = typecheck_in(sig, inner, t.children()[i]);
    Sort want = eval_sort_expr(spec.body, t.sort_args());
    if (!(got == want)) {
      throw TypeError("child sort mismatch at argument " + std::to_string(i) + " of '" + ar->name + "'");
    }
  }
  return eval_sort_expr(ar->result, t.sort_args());
}

Term rename_rec(const Term& t, std::span<const std::size_t> map, std::size_t cutoff) {
  if (t.free_bound() <= cutoff) return t;
  if (t.is_var()) {
    std::size_t i = t.index() - cutoff;
    if (i >= map.size()) throw std::out_of_range("renaming undefined on index " + std::to_string(i));
    return Term::var(map[i] + cutoff);
  }
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    kids.push_back(rename_rec(t.children()[i], map, cutoff + t.child_binders()[i]));
  }
  return Term::con(t.arity(), t.sort_args(), t.nat(), std::move(kids), t.child_binders());
}

Term shift_rec(const Term& t, std::size_t amount, std::size_t cutoff) {
  if (t.free_bound() <= cutoff) return t;
  if (t.is_var()) return Term::var(t.index() + amount);
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    kids.push_back(shift_rec(t.children()[i], amount, cutoff + t.child_binders()[i]));
  }
  return Term::con(t.arity(), t.sort_args(), t.nat(), std::move(kids), t.child_binders());
}

Term subst_rec(const Term& t, std::span<const Term> images, std::size_t depth) {
  if (t.free_bound() <= depth) return t;
  if (t.is_var()) {
    std::size_t i = t.index() - depth;
    if (i >= images.size()) throw std::out_of_range("substitution undefined on index " + std::to_string(i));
    return depth == 0 ? images[i] : shift_rec(images[i], depth, 0);
  }
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    kids.push_back(subst_rec(t.children()[i], images, depth + t.child_binders()[i]));
  }
  return Term::con(t.arity(), t.sort_args(), t.nat(), std::move(kids), t.child_binders());
}

Term subst_one_rec(const Term& t, const Term& arg, std::size_t depth) {
  if (t.free_bound() <= depth) return t;
  if (t.is_var()) {
    if (t.index() == depth) return depth == 0 ? arg : shift_rec(arg, depth, 0);
    return Term::var(t.index() - 1);
  }
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    kids.push_back(subst_one_rec(t.children()[i], arg, depth + t.child_binders()[i]));
  }
  return Term::con(t.arity(), t.sort_args(), t.nat(), std::move(kids), t.child_binders());
}

}  // namespace

Sort typecheck(const TwoSignature& sig, const Context& ctx, const Term& term) {
  Context copy = ctx;
  return typecheck_in(sig, copy, term);
}

Term rename(const Term& term, std::span<const std::size_t> map) { return rename_rec(term, map, 0); }

Term shift(const Term& term, std::size_t amount) {
  if (amount == 0) return term;
  return shift_rec(term, amount, 0);
}

SubstMap SubstMap::identity(const Context& ctx) {
  SubstMap m{ctx, ctx, {}};
  for (std::size_t i = 0; i < ctx.size(); ++i) m.images.push_back(Term::var(i));
  return m;
}

Term subst(const Term& term, std::span<const Term> images) { return subst_rec(term, images, 0); }

Term subst(const Term& term, const SubstMap& map) { return subst_rec(term, map.images, 0); }

Term subst_one(const Term& body, const Term& arg) { return subst_one_rec(body, arg, 0); }

Sort gen_sort(const SortSignature& sorts, std::size_t depth, Rng& rng) {
  std::vector<const std::string*> nullary, all;
  for (const auto& [name, n] : sorts.constructors) {
    all.push_back(&name);
    if (n == 0) nullary.push_back(&name);
  }
  if (nullary.empty()) throw std::invalid_argument("sort signature has no nullary constructor");
  if (depth <= 1 || rng.below(3) == 0) return Sort(*nullary[rng.below(nullary.size())]);
  const std::string& name = *all[rng.below(all.size())];
  std::vector<Sort> args;
  for (unsigned i = 0; i < sorts.constructors.at(name); ++i) args.push_back(gen_sort(sorts, depth - 1, rng));
  return Sort(name, std::move(args));
}

namespace {

bool match_sort(const SortExpr& pat, const Sort& s, std::vector<std::optional<Sort>>& assign) {
  if (pat.is_var()) {
    auto& slot = assign[pat.var - 1];
    if (slot) return *slot == s;
    slot = s;
    return true;
  }
  if (pat.name != s.name || pat.args.size() != s.args.size()) return false;
  for (std::size_t i = 0; i < pat.args.size(); ++i) {
    if (!match_sort(pat.args[i], s.args[i], assign)) return false;
  }
  return true;
}

void collect_subsorts(const Sort& s, std::vector<Sort>& out) {
  if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  for (const auto& a : s.args) collect_subsorts(a, out);
}

class TermGenerator {
 public:
  TermGenerator(const TwoSignature& sig, Rng& rng) : sig_(sig), rng_(rng) {}

  std::optional<Term> gen(const Context& ctx, const Sort& sort, std::size_t depth) {
    if (depth == 0 || budget_ == 0) return std::nullopt;
    --budget_;

    struct Candidate {
      const TermAritySpec* arity;  // null for a variable
      std::size_t var;
    };
    std::vector<Candidate> leaves, nodes;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (ctx[i] == sort) leaves.push_back({nullptr, i});
    }
    for (const auto& ar : sig_.arities) {
      std::vector<std::optional<Sort>> assign(ar.degree);
      if (!match_sort(ar.result, sort, assign)) continue;
      if (ar.args.empty()) {
        leaves.push_back({&ar, 0});
      } else if (depth > 1) {
        nodes.push_back({&ar, 0});
      }
    }
    shuffle(leaves);
    shuffle(nodes);
    std::vector<Candidate> order;
    bool nodes_first = depth > 1 && rng_.below(10) < 7;
    for (auto* group : nodes_first ? std::array{&nodes, &leaves} : std::array{&leaves, &nodes}) {
      order.insert(order.end(), group->begin(), group->end());
    }

    for (const auto& c : order) {
      if (!c.arity) return Term::var(c.var);
      if (auto t = build(ctx, sort, *c.arity, depth)) return t;
      if (budget_ == 0) break;
    }
    return std::nullopt;
  }

 private:
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_.below(i)]);
  }

  Sort pick_sort(const Context& ctx, const Sort& target) {
    std::vector<Sort> pool;
    collect_subsorts(target, pool);
    for (const auto& s : ctx) collect_subsorts(s, pool);
    if (rng_.below(4) == 0) return gen_sort(sig_.sorts, 2, rng_);
    return pool[rng_.below(pool.size())];
  }

  std::optional<Term> build(const Context& ctx, const Sort& sort, const TermAritySpec& ar,
                            std::size_t depth) {
    std::vector<std::optional<Sort>> assign(ar.degree);
    match_sort(ar.result, sort, assign);
    std::vector<Sort> sort_args;
    for (auto& a : assign) sort_args.push_back(a ? *a : pick_sort(ctx, sort));
    std::optional<std::uint64_t> nat;
    if (ar.nat_indexed) nat = rng_.below(4);

    std::vector<Term> kids;
    std::vector<std::uint32_t> binders;
    for (const auto& spec : ar.args) {
      std::vector<Sort> bs;
      for (const auto& b : spec.binders) bs.push_back(eval_sort_expr(b, sort_args));
      Context inner = extend(ctx, bs);
      Sort want = eval_sort_expr(spec.body, sort_args);
      std::size_t child_depth = 1 + rng_.below(depth - 1);
      auto child = gen(inner, want, child_depth);
      if (!child && child_depth < depth - 1) child = gen(inner, want, depth - 1);
      if (!child) return std::nullopt;
      kids.push_back(std::move(*child));
      binders.push_back(static_cast<std::uint32_t>(spec.binders.size()));
    }
    return Term::con(ar.name, std::move(sort_args), nat, std::move(kids), std::move(binders));
  }

  const TwoSignature& sig_;
  Rng& rng_;
  std::size_t budget_ = 20000;
};

}  // namespace

std::optional<Term> gen_term(const TwoSignature& sig, const Context& ctx, const Sort& sort,
                             std::size_t depth, Rng& rng) {
  TermGenerator g(sig, rng);
  return g.gen(ctx, sort, depth);
}

std::optional<Term> gen_term(const TwoSignature& sig, const Context& ctx, const Sort& sort,
                             std::size_t depth, std::uint64_t seed) {
  Rng rng(seed);
  return gen_term(sig, ctx, sort, depth, rng);
}

}  // namespace twosig
