#pragma once

// Representations of a source 2-signature in the generated syntax of a
// target signature, and the translation they induce out of the source
// syntax.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twosig/laws.hpp"
#include "twosig/reduction.hpp"
#include "twosig/signature.hpp"
#include "twosig/syntax.hpp"

namespace twosig {

/// What a builder sees for one constructor occurrence.
struct BuilderInput {
  std::span<const Sort> sort_args;  // source sort arguments, already mapped to target sorts
  std::optional<std::uint64_t> nat;
  std::span<const Term> children;   // translated; child i sits under its binders
};

using Builder = std::function<Term(const BuilderInput&)>;

struct Representation {
  std::string name;
  TwoSignature source;
  TwoSignature target;
  /// Per source sort constructor: a target sort expression whose degree
  /// variable i stands for the image of argument i.
  std::map<std::string, SortExpr> sort_map;
  std::map<std::string, Builder> builders;
};

class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Sort map_sort(const Representation& rep, const Sort& s);

Context retype_context(const Representation& rep, const Context& ctx);

/// Applies one builder and checks its output against the mapped result sort.
/// `target_ctx` is the retyped context the occurrence lives in.
Term apply_builder(const Representation& rep, const TermAritySpec& arity, std::span<const Sort> source_sort_args,
                   std::optional<std::uint64_t> nat, std::span<const Term> children, const Context& target_ctx);

/// Structural translation of a term well-typed in `ctx`. Throws
/// TranslationError when a builder produces an ill-typed term.
Term translate(const Representation& rep, const Context& ctx, const Term& term);

struct Counterexample {
  std::string rule;
  Context context;  // target context
  Term lhs;
  Term rhs;
  Verdict verdict;
};

struct RuleSatisfaction {
  std::string rule;
  std::size_t attempted = 0;
  std::size_t yes = 0;
  std::size_t unknown = 0;
  std::size_t no = 0;
  std::size_t max_yes_steps = 0;
  std::vector<Counterexample> counterexamples;  // every No, and the first few Unknowns
};

struct SatisfactionReport {
  std::vector<RuleSatisfaction> rules;

  std::size_t total_no() const;
  std::size_t total_unknown() const;
  bool all_yes() const;
  const RuleSatisfaction* find(std::string_view rule) const;
};

struct SamplingConfig {
  std::size_t samples = 200;
  std::size_t depth = 4;
  SearchBounds bounds{16, 4096};
  std::uint64_t seed = 0xC0FFEE;
};

/// For every source rule: random sort assignments, random target terms for
/// the metavariables, both sides evaluated through the builders, and a
/// bounded reachability test from left to right in the target.
SatisfactionReport check_satisfaction(const Representation& rep, const SamplingConfig& config);

struct FaithfulnessViolation {
  Context source_context;
  Term source;
  Term reduct;
  std::string rule;
  Verdict verdict;
};

struct FaithfulnessReport {
  bool precondition_established = false;
  std::size_t terms = 0;
  std::size_t steps_checked = 0;
  std::size_t yes = 0;
  std::size_t unknown = 0;
  std::size_t no = 0;
  std::size_t max_yes_steps = 0;
  std::vector<FaithfulnessViolation> violations;

  bool ok() const { return unknown == 0 && no == 0; }
};

/// Random source terms; every one-step reduct's translation must be reachable
/// from the term's translation. `satisfaction` records whether the rules were
/// shown to hold first; without it the report is flagged as unsupported.
FaithfulnessReport check_faithfulness(const Representation& rep, const SamplingConfig& config,
                                      const SatisfactionReport* satisfaction = nullptr);

using TranslationLawReport = LawReport;

/// translate commutes with renaming, simultaneous substitution and
/// single-variable substitution, structurally.
TranslationLawReport check_translation_laws(const Representation& rep, std::size_t samples, std::size_t depth,
                                            std::uint64_t seed);

}  // namespace twosig
