#pragma once

// Well-sorted de Bruijn syntax generated by a signature: sorts, contexts,
// terms, renaming and substitution.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twosig/signature.hpp"

namespace twosig {

/// A closed sort term over a SortSignature.
struct Sort {
  std::string name;
  std::vector<Sort> args;

  Sort() = default;
  explicit Sort(std::string n, std::vector<Sort> a = {}) : name(std::move(n)), args(std::move(a)) {}

  bool operator==(const Sort&) const = default;
  std::size_t hash() const;
};

bool operator<(const Sort& a, const Sort& b);

/// Index 0 is the innermost binder.
using Context = std::vector<Sort>;

/// Context extended by `binders`, listed outermost first.
Context extend(const Context& ctx, std::span<const Sort> binders);
Context extend(const Context& ctx, const Sort& binder);

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Term;

namespace detail {
struct TermNode;
}

/// Immutable term, shared structurally. Constructor nodes remember how many
/// binders each child sits under, so renaming and substitution do not need
/// the signature.
class Term {
 public:
  static Term var(std::size_t index);
  static Term con(std::string arity, std::vector<Sort> sort_args, std::optional<std::uint64_t> nat,
                  std::vector<Term> children, std::vector<std::uint32_t> child_binders);

  bool is_var() const;
  std::size_t index() const;
  const std::string& arity() const;
  const std::vector<Sort>& sort_args() const;
  std::optional<std::uint64_t> nat() const;
  const std::vector<Term>& children() const;
  const std::vector<std::uint32_t>& child_binders() const;

  std::size_t hash() const;
  std::size_t size() const;
  std::size_t depth() const;
  /// One more than the largest free index, 0 when closed.
  std::size_t free_bound() const;

  /// Same node with child `i` replaced.
  Term with_child(std::size_t i, Term child) const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Builds a constructor node, reading binder counts from the arity.
Term make_con(const TwoSignature& sig, std::string_view arity, std::vector<Sort> sort_args,
              std::vector<Term> children, std::optional<std::uint64_t> nat = std::nullopt);

/// Replaces degree variables by the assigned sorts (variable i by assignment[i-1]).
Sort eval_sort_expr(const SortExpr& expr, std::span<const Sort> assignment);

/// Sort of `term` in `ctx`. Throws TypeError.
Sort typecheck(const TwoSignature& sig, const Context& ctx, const Term& term);

/// Index map between contexts: source index i goes to target index map[i].
using Renaming = std::vector<std::size_t>;

Term rename(const Term& term, std::span<const std::size_t> map);

/// Shifts every free variable by `amount` (weakening by fresh innermost binders).
Term shift(const Term& term, std::size_t amount);

struct SubstMap {
  Context source;
  Context target;
  std::vector<Term> images;  // images[i] : source[i] in target

  static SubstMap identity(const Context& ctx);
};

/// Capture-avoiding simultaneous substitution; images[i] replaces Var(i).
Term subst(const Term& term, std::span<const Term> images);
Term subst(const Term& term, const SubstMap& map);

/// body lives in ctx extended by one binder; arg replaces that binder.
Term subst_one(const Term& body, const Term& arg);

/// Deterministic pseudo-random source for generators and samplers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, n); n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool coin() { return below(2) == 1; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Random sort with at most `depth` constructor layers. Throws
/// std::invalid_argument when no nullary sort constructor exists.
Sort gen_sort(const SortSignature& sorts, std::size_t depth, Rng& rng);

/// Random well-typed term of `sort` in `ctx` with depth at most `depth`, or
/// nullopt if none was found. Deterministic for a given rng state.
std::optional<Term> gen_term(const TwoSignature& sig, const Context& ctx, const Sort& sort,
                             std::size_t depth, Rng& rng);
std::optional<Term> gen_term(const TwoSignature& sig, const Context& ctx, const Sort& sort,
                             std::size_t depth, std::uint64_t seed);

}  // namespace twosig

template <>
struct std::hash<twosig::Term> {
  std::size_t operator()(const twosig::Term& t) const { return t.hash(); }
};
