#include "twosig/reduction.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace twosig {

std::string format_position(const Position& p) {
  if (p.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "Yes";
    case Verdict::No:
      return "No";
    case Verdict::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

bool match_sort(const SortExpr& pat, const Sort& s, std::vector<std::optional<Sort>>& assign) {
  if (pat.is_var()) {
    if (pat.var < 1 || pat.var > assign.size()) return false;
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

bool match_nat(const NatPattern& p, std::uint64_t k, std::map<std::string, std::uint64_t>& nats) {
  auto bind = [&](std::uint64_t v) {
    auto [it, fresh] = nats.emplace(p.var, v);
    return fresh || it->second == v;
  };
  switch (p.kind) {
    case NatPattern::Kind::Zero:
      return k == 0;
    case NatPattern::Kind::Const:
      return k == p.value;
    case NatPattern::Kind::Var:
      return bind(k);
    case NatPattern::Kind::Succ:
    case NatPattern::Kind::Plus1:
      return k >= 1 && bind(k - 1);
  }
  return false;
}

std::uint64_t eval_nat(const NatPattern& p, const std::map<std::string, std::uint64_t>& nats) {
  switch (p.kind) {
    case NatPattern::Kind::Zero:
      return 0;
    case NatPattern::Kind::Const:
      return p.value;
    case NatPattern::Kind::Var:
      return nats.at(p.var);
    case NatPattern::Kind::Succ:
    case NatPattern::Kind::Plus1:
      return nats.at(p.var) + 1;
  }
  return 0;
}

bool match_template(const TemplateTerm& tmpl, const Term& term, std::vector<std::optional<Sort>>& assign,
                    Match& m) {
  switch (tmpl.kind) {
    case TemplateTerm::Kind::Meta: {
      auto [it, fresh] = m.metas.emplace(tmpl.name, term);
      return fresh || it->second == term;
    }
    case TemplateTerm::Kind::Con: {
      if (term.is_var() || term.arity() != tmpl.name) return false;
      if (tmpl.sort_args.size() != term.sort_args().size()) return false;
      for (std::size_t i = 0; i < tmpl.sort_args.size(); ++i) {
        if (!match_sort(tmpl.sort_args[i], term.sort_args()[i], assign)) return false;
      }
      if (tmpl.children.size() == 1 && tmpl.children[0].kind == TemplateTerm::Kind::NatLit) {
        return term.nat() && term.children().empty() && match_nat(tmpl.children[0].nat, *term.nat(), m.nats);
      }
      if (tmpl.children.size() != term.children().size()) return false;
      for (std::size_t i = 0; i < tmpl.children.size(); ++i) {
        if (!match_template(tmpl.children[i], term.children()[i], assign, m)) return false;
      }
      return true;
    }
    case TemplateTerm::Kind::Subst1:
    case TemplateTerm::Kind::NatLit:
      return false;
  }
  return false;
}

}  // namespace

std::optional<Match> match_root(const RuleTemplate& rule, const Term& term) {
  std::vector<std::optional<Sort>> assign(rule.degree);
  Match m;
  if (!match_template(rule.lhs, term, assign, m)) return std::nullopt;
  for (auto& a : assign) {
    if (!a) throw std::logic_error("rule '" + rule.name + "' leaves a degree variable undetermined");
    m.sort_assignment.push_back(std::move(*a));
  }
  return m;
}

Term evaluate_template(const TwoSignature& sig, const TemplateTerm& tmpl, const Match& m,
                       const ConBuilder& build) {
  switch (tmpl.kind) {
    case TemplateTerm::Kind::Meta:
      return m.metas.at(tmpl.name);
    case TemplateTerm::Kind::Subst1:
      return subst_one(evaluate_template(sig, tmpl.children[0], m, build),
                       evaluate_template(sig, tmpl.children[1], m, build));
    case TemplateTerm::Kind::NatLit:
      throw std::logic_error("nat literal evaluated outside its constructor");
    case TemplateTerm::Kind::Con: {
      const TermAritySpec* ar = sig.find_arity(tmpl.name);
      if (!ar) throw TypeError("unknown arity '" + tmpl.name + "'");
      std::vector<Sort> sort_args;
      for (const auto& e : tmpl.sort_args) sort_args.push_back(eval_sort_expr(e, m.sort_assignment));
      std::optional<std::uint64_t> nat;
      std::vector<Term> kids;
      for (const auto& c : tmpl.children) {
        if (c.kind == TemplateTerm::Kind::NatLit) {
          nat = eval_nat(c.nat, m.nats);
        } else {
          kids.push_back(evaluate_template(sig, c, m, build));
        }
      }
      return build(*ar, std::move(sort_args), nat, std::move(kids));
    }
  }
  throw std::logic_error("unreachable");
}

Term instantiate(const TwoSignature& sig, const RuleTemplate& rule, RuleSide side, const Match& m) {
  ConBuilder syntactic = [&sig](const TermAritySpec& ar, std::vector<Sort> sort_args,
                                std::optional<std::uint64_t> nat, std::vector<Term> kids) {
    return make_con(sig, ar.name, std::move(sort_args), std::move(kids), nat);
  };
  return evaluate_template(sig, side == RuleSide::Lhs ? rule.lhs : rule.rhs, m, syntactic);
}

std::vector<ReductionStep> root_steps(const TwoSignature& sig, const Term& term) {
  std::vector<ReductionStep> out;
  if (term.is_var()) return out;
  for (const auto& rule : sig.rules) {
    auto m = match_root(rule, term);
    if (!m) continue;
    Term result = instantiate(sig, rule, RuleSide::Rhs, *m);
    out.push_back({rule.name, {}, std::move(*m), std::move(result)});
  }
  return out;
}

namespace {

void collect_steps(const TwoSignature& sig, const Term& term, std::vector<ReductionStep>& out) {
  auto roots = root_steps(sig, term);
  std::stable_sort(roots.begin(), roots.end(),
                   [](const ReductionStep& a, const ReductionStep& b) { return a.rule < b.rule; });
  for (auto& s : roots) out.push_back(std::move(s));
  if (term.is_var()) return;
  for (std::size_t i = 0; i < term.children().size(); ++i) {
    std::vector<ReductionStep> inner;
    collect_steps(sig, term.children()[i], inner);
    for (auto& s : inner) {
      s.position.insert(s.position.begin(), i);
      s.result = term.with_child(i, std::move(s.result));
      out.push_back(std::move(s));
    }
  }
}

void collect_successors(const TwoSignature& sig, const Term& term, std::vector<Term>& out) {
  if (term.is_var()) return;
  std::vector<std::pair<const std::string*, Term>> roots;
  for (const auto& rule : sig.rules) {
    if (auto m = match_root(rule, term)) roots.emplace_back(&rule.name, instantiate(sig, rule, RuleSide::Rhs, *m));
  }
  std::stable_sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return *a.first < *b.first; });
  for (auto& r : roots) out.push_back(std::move(r.second));
  for (std::size_t i = 0; i < term.children().size(); ++i) {
    std::vector<Term> inner;
    collect_successors(sig, term.children()[i], inner);
    for (auto& t : inner) out.push_back(term.with_child(i, std::move(t)));
  }
}

std::optional<ReductionStep> first_step(const TwoSignature& sig, const Term& term) {
  if (term.is_var()) return std::nullopt;
  std::optional<ReductionStep> best;
  for (const auto& rule : sig.rules) {
    if (best && !(rule.name < best->rule)) continue;
    if (auto m = match_root(rule, term)) {
      Term result = instantiate(sig, rule, RuleSide::Rhs, *m);
      best = ReductionStep{rule.name, {}, std::move(*m), std::move(result)};
    }
  }
  if (best) return best;
  for (std::size_t i = 0; i < term.children().size(); ++i) {
    if (auto s = first_step(sig, term.children()[i])) {
      s->position.insert(s->position.begin(), i);
      s->result = term.with_child(i, std::move(s->result));
      return s;
    }
  }
  return std::nullopt;
}

Term plug(const Term& term, const Position& path, std::size_t from, const Term& replacement) {
  if (from == path.size()) return replacement;
  std::size_t i = path[from];
  return term.with_child(i, plug(term.children()[i], path, from + 1, replacement));
}

const Term& subterm(const Term& term, const Position& path) {
  const Term* cur = &term;
  for (std::size_t i : path) cur = &cur->children()[i];
  return *cur;
}

// Finds the step from `a` whose result is `b`; reachability only records terms.
ReductionStep step_between(const TwoSignature& sig, const Term& a, const Term& b) {
  for (auto& s : step_all(sig, a)) {
    if (s.result == b) return std::move(s);
  }
  throw std::logic_error("no step between consecutive trace terms");
}

Reachability search(const TwoSignature& sig, const Term& from, const Term& to, SearchBounds bounds) {
  Reachability out;
  if (from == to) {
    out.verdict = Verdict::Yes;
    out.trace = Trace{from, {}};
    out.explored = 1;
    return out;
  }

  struct Node {
    Term term;
    std::size_t parent;
  };
  std::vector<Node> nodes{{from, 0}};
  std::unordered_set<Term> visited{from};
  std::vector<std::size_t> frontier{0};

  auto finish_yes = [&](std::size_t parent) {
    std::vector<Term> path{to};
    for (std::size_t cur = parent;; cur = nodes[cur].parent) {
      path.push_back(nodes[cur].term);
      if (cur == 0) break;
    }
    std::reverse(path.begin(), path.end());
    Trace trace{from, {}};
    for (std::size_t i = 0; i + 1 < path.size(); ++i) trace.steps.push_back(step_between(sig, path[i], path[i + 1]));
    out.verdict = Verdict::Yes;
    out.trace = std::move(trace);
    out.explored = visited.size();
  };

  for (std::size_t depth = 0; depth < bounds.max_steps; ++depth) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (auto& succ : successors(sig, nodes[idx].term)) {
        if (succ == to) {
          finish_yes(idx);
          return out;
        }
        if (!visited.insert(succ).second) continue;
        if (visited.size() > bounds.max_frontier) {
          out.verdict = Verdict::Unknown;
          out.explored = visited.size();
          return out;
        }
        nodes.push_back({std::move(succ), idx});
        next.push_back(nodes.size() - 1);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) {
      out.verdict = Verdict::No;
      out.explored = visited.size();
      return out;
    }
  }
  // Step bound reached: No only if the last layer has nothing new below it.
  out.explored = visited.size();
  for (std::size_t idx : frontier) {
    for (const auto& succ : successors(sig, nodes[idx].term)) {
      if (!visited.count(succ)) {
        out.verdict = Verdict::Unknown;
        return out;
      }
    }
  }
  out.verdict = Verdict::No;
  return out;
}

// Longest path along which `a` and `b` agree everywhere except inside one child.
Position differing_position(const Term& a, const Term& b) {
  Position path;
  const Term* x = &a;
  const Term* y = &b;
  while (!x->is_var() && !y->is_var() && x->arity() == y->arity() && x->nat() == y->nat() &&
         x->sort_args() == y->sort_args() && x->children().size() == y->children().size()) {
    std::optional<std::size_t> diff;
    bool several = false;
    for (std::size_t i = 0; i < x->children().size(); ++i) {
      if (!(x->children()[i] == y->children()[i])) {
        if (diff) several = true;
        diff = i;
      }
    }
    if (!diff || several) break;
    path.push_back(*diff);
    x = &x->children()[*diff];
    y = &y->children()[*diff];
  }
  return path;
}

}  // namespace

std::vector<ReductionStep> step_all(const TwoSignature& sig, const Term& term) {
  std::vector<ReductionStep> all;
  collect_steps(sig, term, all);
  return all;
}

std::vector<Term> successors(const TwoSignature& sig, const Term& term) {
  std::vector<Term> all;
  collect_successors(sig, term, all);
  std::unordered_set<Term> seen;
  std::vector<Term> out;
  for (auto& t : all) {
    if (seen.insert(t).second) out.push_back(std::move(t));
  }
  return out;
}

Reachability reduces_to(const TwoSignature& sig, const Context& ctx, const Term& from, const Term& to,
                        SearchBounds bounds) {
  Sort a = typecheck(sig, ctx, from);
  Sort b = typecheck(sig, ctx, to);
  if (!(a == b)) throw TypeError("reachability between terms of different sorts");

  // A reduction confined to the one subterm where the terms differ lifts
  // through the surrounding context; try that first, then search globally.
  Position diff = differing_position(from, to);
  if (!diff.empty()) {
    Reachability local = search(sig, subterm(from, diff), subterm(to, diff), bounds);
    if (local.verdict == Verdict::Yes) {
      Trace lifted{from, {}};
      for (auto& s : local.trace->steps) {
        Position p = diff;
        p.insert(p.end(), s.position.begin(), s.position.end());
        lifted.steps.push_back({s.rule, std::move(p), std::move(s.bindings), plug(from, diff, 0, s.result)});
      }
      local.trace = std::move(lifted);
      return local;
    }
  }
  return search(sig, from, to, bounds);
}

Normalization normalize(const TwoSignature& sig, const Term& term, std::size_t max_steps, Strategy) {
  Normalization out{term, Trace{term, {}}, false};
  while (true) {
    auto step = first_step(sig, out.result);
    if (!step) return out;
    if (out.trace.steps.size() == max_steps) {
      out.exhausted = true;
      return out;
    }
    out.result = step->result;
    out.trace.steps.push_back(std::move(*step));
  }
}

std::string render_trace(const Trace& trace, const std::function<std::string(const Term&)>& show) {
  std::string out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    out += std::to_string(i + 1) + ". [" + s.rule + "@" + format_position(s.position) + "] " + show(s.result) + "\n";
  }
  return out;
}

}  // namespace twosig
