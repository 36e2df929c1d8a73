#pragma once

// Signature files:
//
//   sorts { Nat/0; Bool/0; ~>/2; }
//   terms {
//     abs [deg 2] : (bind[1].2) -> ~>(1, 2);
//     app [deg 2] : ~>(1, 2), 1 -> 2;
//     nats [deg 0, nat-indexed] : -> Nat;
//   }
//   rules {
//     beta [deg 2] { M : bind[1].2; N : 1 } : app(abs(M), N) => M[N];
//     succ_red [deg 0] { n : nat } : app(succ(), nats(nat:n)) => nats(nat:S(n));
//   }
//
// Degree variables are numerals, `M[N]` substitutes N for M's innermost
// binder, bare names in templates are metavariables when declared and
// nullary constructors otherwise. Comments run from `//` to end of line.

#include <optional>
#include <string_view>
#include <vector>

#include "twosig/signature.hpp"

namespace twosig {

struct SignatureParse {
  std::optional<TwoSignature> signature;  // resolved, set when diagnostics is empty
  std::vector<Diagnostic> diagnostics;    // locations are "line:col"
};

SignatureParse parse_signature(std::string_view text);

}  // namespace twosig
