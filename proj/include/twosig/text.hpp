#pragma once

// Concrete syntax for sorts and terms.
//
// Canonical form:  (con app [Bool Bool] (con abs [Bool Bool] #0) (con ttt []))
//   variables `#k` (0-based), sorts in prefix form `(~> Nat Bool)`, nat
//   payloads in braces `(con nats [] {3})`.
// Paper form:      Abs (Abs 2) @ Nats 3
//   1-based numerals for variables, infix `@` for the arity named `app`,
//   sort arguments left implicit.
//
// The reader accepts both, plus call syntax `zero · Nats(0)` / `succ(#0)`.
// Omitted sort arguments are recovered by unification.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "twosig/signature.hpp"
#include "twosig/syntax.hpp"

namespace twosig {

enum class Notation { Canonical, Paper };

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

std::string format_sort(const Sort& s);
/// Prefix form `(~> Nat Bool)` or a bare name.
Sort parse_sort(std::string_view text);
/// Comma-separated sorts, innermost variable first (index 0).
Context parse_context(std::string_view text);
std::string format_context(const Context& ctx);

std::string format_term(const Term& t, Notation notation = Notation::Canonical);

/// Parses and elaborates a term in `ctx`; `expected` constrains its sort.
/// Throws ParseError for syntax problems and TypeError for sort errors.
Term parse_term(const TwoSignature& sig, std::string_view text, const Context& ctx = {},
                const std::optional<Sort>& expected = std::nullopt);

}  // namespace twosig
