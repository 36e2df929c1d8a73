#pragma once

// Built-in languages: PCF, the untyped and simply typed lambda calculi, the
// Church-style ULC combinators and the PCF to ULC representation.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twosig/representation.hpp"
#include "twosig/signature.hpp"
#include "twosig/syntax.hpp"

namespace twosig {

TwoSignature pcf_signature();
TwoSignature ulc_signature();
TwoSignature stlc_signature();

namespace ulc {

/// Paper numerals: var(1) is the innermost binder.
Term var(std::size_t n);
Term abs(Term body);
Term app(Term f, Term a);

Term true_term();
Term false_term();
/// church(n + 1) = λfx. f (church(n) f x), left unreduced.
Term church(std::uint64_t n);
Term succ();
Term pred();
Term zero();
Term cond();
Term omega();
Term theta();
Term y();

}  // namespace ulc

/// rec is sent to Θ applied to its argument.
Representation pcf_to_ulc_representation();
/// Same, with rec sent to Y applied to its argument. Fails rec_a.
Representation pcf_to_ulc_y_representation();
/// Every sort and arity sent to itself.
Representation identity_representation(const TwoSignature& sig, std::string name);

class BuiltinCatalog {
 public:
  static const BuiltinCatalog& instance();

  const TwoSignature* signature(std::string_view name) const;
  /// "pcf2ulc", "pcf2ulc-y", or "identity:<signature>".
  std::optional<Representation> representation(std::string_view name) const;

  std::vector<std::string> signature_names() const;
  std::vector<std::string> representation_names() const;

 private:
  BuiltinCatalog();
  std::map<std::string, TwoSignature, std::less<>> signatures_;
};

}  // namespace twosig
