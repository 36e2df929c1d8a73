#pragma once

// Executable laws of the generated syntax: the relative monad laws for
// substitution, renaming coherence, and the monotonicity properties that
// make reduction a congruence stable under substitution.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "twosig/reduction.hpp"
#include "twosig/signature.hpp"
#include "twosig/syntax.hpp"

namespace twosig {

struct LawCheck {
  std::string law;
  std::size_t checked = 0;
  std::size_t failures = 0;
  /// Samples whose reachability search hit a bound; neither pass nor failure.
  std::size_t inconclusive = 0;
  std::string first_failure{};
};

struct LawReport {
  std::vector<LawCheck> laws;

  bool ok() const;
  const LawCheck* find(std::string_view law) const;
};

struct LawConfig {
  std::size_t samples = 500;
  std::size_t depth = 5;
  std::uint64_t seed = 0xC0FFEE;
  SearchBounds bounds{16, 20000};
};

/// Laws 1-3, sort preservation, rename functoriality, rename/subst coherence
/// and constructor commutation, on random well-typed terms.
LawReport check_monad_laws(const TwoSignature& sig, const LawConfig& config);

/// Subject reduction, constructor monotonicity and both forms of
/// substitution monotonicity. Each law draws until it has `samples`
/// conclusive instances that admit at least one reduction step, or gives up
/// after 200 draws per requested sample.
LawReport check_reduction_laws(const TwoSignature& sig, const LawConfig& config);

/// True when every step of `trace` is a one-step reduct of its predecessor.
bool trace_is_valid(const TwoSignature& sig, const Trace& trace);

}  // namespace twosig
