#pragma once

// Reference implementations that share no code with the library's
// substitution or rewriting: a named-variable lambda calculus and a
// big-step evaluator for closed PCF programs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twosig/syntax.hpp"

namespace oracle {

/// Untyped lambda terms with names.
struct Named {
  enum class Kind { Var, Lam, App };
  Kind kind = Kind::Var;
  std::string name;  // variable, or the binder of a Lam
  std::vector<Named> kids;

  static Named var(std::string x) { return {Kind::Var, std::move(x), {}}; }
  static Named lam(std::string x, Named body) { return {Kind::Lam, std::move(x), {std::move(body)}}; }
  static Named app(Named f, Named a) { return {Kind::App, {}, {std::move(f), std::move(a)}}; }
};

/// Random term whose free names come from `scope`; binders are drawn from
/// `binder_pool`, so shadowing and capture situations are common.
Named gen_named(const std::vector<std::string>& scope, const std::vector<std::string>& binder_pool,
                std::size_t depth, twosig::Rng& rng);

/// Capture-avoiding simultaneous substitution by renaming binders.
Named subst(const Named& t, const std::vector<std::pair<std::string, Named>>& sigma);

/// De Bruijn form in the ULC signature; env[0] is the innermost name.
twosig::Term to_de_bruijn(const Named& t, const std::vector<std::string>& env);

/// Value of a closed PCF program of sort Nat or Bool.
struct PcfValue {
  enum class Kind { Nat, Bool };
  Kind kind;
  std::uint64_t nat = 0;
  bool boolean = false;
};

/// Call-by-name big-step evaluation following the PCF rules as written:
/// pred only acts on 0 and on numbers just built by succ. Returns nullopt
/// when evaluation gets stuck or runs out of fuel (counted in beta, rec
/// and primitive steps).
std::optional<PcfValue> eval_pcf(const twosig::Term& closed, std::size_t fuel);

}  // namespace oracle
