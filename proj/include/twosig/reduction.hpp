#pragma once

// The reduction preorder generated by a signature's rules: root matching,
// rule instantiation, congruence closure, bounded reachability and
// normalization.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twosig/signature.hpp"
#include "twosig/syntax.hpp"

namespace twosig {

using Position = std::vector<std::size_t>;

/// Rendered as child indices joined by '.', or "root".
std::string format_position(const Position& p);

struct Match {
  std::vector<Sort> sort_assignment;  // degree variable i at index i-1
  std::map<std::string, Term> metas;
  std::map<std::string, std::uint64_t> nats;
};

std::optional<Match> match_root(const RuleTemplate& rule, const Term& term);

/// Builds a constructor node for template evaluation. Receives the arity, the
/// instantiated sort arguments, the nat payload and the evaluated children.
using ConBuilder = std::function<Term(const TermAritySpec& arity, std::vector<Sort> sort_args,
                                      std::optional<std::uint64_t> nat, std::vector<Term> children)>;

/// Evaluates a resolved template under `m`. Subst1 nodes use subst_one.
Term evaluate_template(const TwoSignature& sig, const TemplateTerm& tmpl, const Match& m,
                       const ConBuilder& build);

/// Evaluates one side of `rule` in the generated syntax of `sig`.
Term instantiate(const TwoSignature& sig, const RuleTemplate& rule, RuleSide side, const Match& m);

struct ReductionStep {
  std::string rule;
  Position position;
  Match bindings;
  Term result;  // the whole term after the step
};

struct Trace {
  Term start;
  std::vector<ReductionStep> steps;

  const Term& end() const { return steps.empty() ? start : steps.back().result; }
};

/// Steps at the root, in rule order.
std::vector<ReductionStep> root_steps(const TwoSignature& sig, const Term& term);

/// Every step, ordered by position (outer and left first) then rule order.
/// Two redexes with the same result are still two steps.
std::vector<ReductionStep> step_all(const TwoSignature& sig, const Term& term);

/// Distinct one-step reducts in step_all order, without step metadata.
std::vector<Term> successors(const TwoSignature& sig, const Term& term);

enum class Verdict { Yes, No, Unknown };

std::string to_string(Verdict v);

struct Reachability {
  Verdict verdict = Verdict::Unknown;
  std::optional<Trace> trace;  // set when verdict is Yes
  std::size_t explored = 0;
};

struct SearchBounds {
  std::size_t max_steps = 16;
  std::size_t max_frontier = 4096;
};

/// Does `from` reduce to `to` in at most bounds.max_steps steps? No only when
/// the reachable set was exhausted within both bounds. Throws TypeError when
/// the two terms differ in sort.
Reachability reduces_to(const TwoSignature& sig, const Context& ctx, const Term& from, const Term& to,
                        SearchBounds bounds);

enum class Strategy { LeftmostOutermost };

struct Normalization {
  Term result;
  Trace trace;
  bool exhausted = false;
};

Normalization normalize(const TwoSignature& sig, const Term& term, std::size_t max_steps,
                        Strategy strategy = Strategy::LeftmostOutermost);

/// One line per step: `<n>. [<rule>@<position>] <term>`.
std::string render_trace(const Trace& trace, const std::function<std::string(const Term&)>& show);

}  // namespace twosig
