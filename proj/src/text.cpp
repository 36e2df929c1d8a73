#include "twosig/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "unify.hpp"

namespace twosig {

using detail::Unifier;
using detail::UType;

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  enum class Kind { Name, Number, Hash, LParen, RParen, LBrack, RBrack, LBrace, RBrace, Comma, At, End };

  Kind kind = Kind::End;
  std::string text;
  std::uint64_t number = 0;
  std::size_t line = 1;
  std::size_t column = 1;
  bool spaced = true;  // preceded by whitespace
};

bool is_symbol_char(char c) {
  return std::string_view("~>*+-<=!&|^%$/").find(c) != std::string_view::npos;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  bool spaced = true;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto number_at = [&](std::size_t pos, std::uint64_t& value) {
    std::size_t end = pos;
    while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) ++end;
    auto res = std::from_chars(src.data() + pos, src.data() + end, value);
    if (res.ec != std::errc()) throw ParseError(line, col, "number out of range");
    return end - pos;
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      spaced = true;
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    t.spaced = spaced;
    spaced = false;
    if (src.substr(i, 2) == "\xC2\xB7") {
      t.kind = Token::Kind::At;
      t.text = "\xC2\xB7";
      advance(2);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Number;
      std::size_t n = number_at(i, t.number);
      t.text = std::string(src.substr(i, n));
      advance(n);
    } else if (c == '#') {
      if (i + 1 >= src.size() || !std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        throw ParseError(line, col, "expected index after '#'");
      }
      t.kind = Token::Kind::Hash;
      std::size_t n = number_at(i + 1, t.number);
      t.text = std::string(src.substr(i, n + 1));
      advance(n + 1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t n = 0;
      while (i + n < src.size() && (std::isalnum(static_cast<unsigned char>(src[i + n])) || src[i + n] == '_' ||
                                    src[i + n] == '\'')) {
        ++n;
      }
      t.kind = Token::Kind::Name;
      t.text = std::string(src.substr(i, n));
      advance(n);
    } else if (is_symbol_char(c)) {
      std::size_t n = 0;
      while (i + n < src.size() && is_symbol_char(src[i + n])) ++n;
      t.kind = Token::Kind::Name;
      t.text = std::string(src.substr(i, n));
      advance(n);
    } else {
      static const std::string_view singles = "()[]{},@";
      static const Token::Kind kinds[] = {Token::Kind::LParen, Token::Kind::RParen, Token::Kind::LBrack,
                                          Token::Kind::RBrack, Token::Kind::LBrace, Token::Kind::RBrace,
                                          Token::Kind::Comma,  Token::Kind::At};
      auto pos = singles.find(c);
      if (pos == std::string_view::npos) throw ParseError(line, col, std::string("unexpected character '") + c + "'");
      t.kind = kinds[pos];
      t.text = std::string(1, c);
      advance(1);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(Token::Kind k) const { return peek().kind == k; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  const Token& expect(Token::Kind k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, msg + ", found " + found);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Sort read_sort(Cursor& cur) {
  if (cur.at(Token::Kind::Name)) return Sort(cur.next().text);
  cur.expect(Token::Kind::LParen, "sort");
  std::string name = cur.expect(Token::Kind::Name, "sort constructor").text;
  std::vector<Sort> args;
  while (!cur.at(Token::Kind::RParen)) {
    if (cur.at(Token::Kind::End)) cur.fail("unterminated sort");
    args.push_back(read_sort(cur));
  }
  cur.next();
  return Sort(std::move(name), std::move(args));
}

// Untyped parse tree, before sort inference.
struct Raw {
  bool is_var = false;
  std::size_t index = 0;
  std::string name;
  std::optional<std::vector<Sort>> sorts;
  std::optional<std::uint64_t> nat;
  std::vector<Raw> children;
  std::size_t line = 0;
  std::size_t column = 0;
};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

class TermReader {
 public:
  TermReader(const TwoSignature& sig, Cursor& cur) : sig_(sig), cur_(cur) {}

  Raw expr() {
    Raw lhs = prefix();
    while (cur_.at(Token::Kind::At)) {
      const Token& at = cur_.next();
      const TermAritySpec* app = sig_.find_arity("app");
      if (!app) throw ParseError(at.line, at.column, "signature has no 'app' arity for infix application");
      Raw rhs = prefix();
      Raw node;
      node.name = "app";
      node.line = at.line;
      node.column = at.column;
      node.children.push_back(std::move(lhs));
      node.children.push_back(std::move(rhs));
      lhs = std::move(node);
    }
    return lhs;
  }

 private:
  const TermAritySpec& resolve(const Token& t) {
    if (auto* a = sig_.find_arity(t.text)) return *a;
    std::string want = lower(t.text);
    if (want == "lam" && sig_.find_arity("abs")) return *sig_.find_arity("abs");
    const TermAritySpec* found = nullptr;
    for (const auto& a : sig_.arities) {
      if (lower(a.name) == want) {
        if (found) throw ParseError(t.line, t.column, "ambiguous constructor '" + t.text + "'");
        found = &a;
      }
    }
    if (!found) throw ParseError(t.line, t.column, "unknown constructor '" + t.text + "'");
    return *found;
  }

  void explicit_sorts(Raw& node) {
    if (!cur_.at(Token::Kind::LBrack) || cur_.peek().spaced) return;
    cur_.next();
    std::vector<Sort> sorts;
    while (!cur_.at(Token::Kind::RBrack)) {
      if (cur_.at(Token::Kind::Comma)) {
        cur_.next();
        continue;
      }
      sorts.push_back(read_sort(cur_));
    }
    cur_.next();
    node.sorts = std::move(sorts);
  }

  Raw head(const Token& name_tok, const TermAritySpec& ar) {
    Raw node;
    node.name = ar.name;
    node.line = name_tok.line;
    node.column = name_tok.column;
    return node;
  }

  Raw prefix() {
    if (!cur_.at(Token::Kind::Name) || cur_.peek().text == "con") return atom();
    const Token& name_tok = cur_.next();
    const TermAritySpec& ar = resolve(name_tok);
    Raw node = head(name_tok, ar);
    explicit_sorts(node);
    if (cur_.at(Token::Kind::LParen) && !cur_.peek().spaced) {
      call_args(node, ar);
      return node;
    }
    if (ar.nat_indexed) {
      if (cur_.at(Token::Kind::LBrace)) {
        cur_.next();
        node.nat = cur_.expect(Token::Kind::Number, "nat payload").number;
        cur_.expect(Token::Kind::RBrace, "'}'");
      } else {
        node.nat = cur_.expect(Token::Kind::Number, "nat payload").number;
      }
      return node;
    }
    for (std::size_t i = 0; i < ar.args.size(); ++i) node.children.push_back(atom());
    return node;
  }

  void call_args(Raw& node, const TermAritySpec& ar) {
    cur_.next();
    if (ar.nat_indexed) {
      node.nat = cur_.expect(Token::Kind::Number, "nat payload").number;
      cur_.expect(Token::Kind::RParen, "')'");
      return;
    }
    while (!cur_.at(Token::Kind::RParen)) {
      if (!node.children.empty()) cur_.expect(Token::Kind::Comma, "','");
      node.children.push_back(expr());
    }
    cur_.next();
    if (node.children.size() != ar.args.size()) {
      throw ParseError(node.line, node.column,
                       "'" + ar.name + "' takes " + std::to_string(ar.args.size()) + " arguments, got " +
                           std::to_string(node.children.size()));
    }
  }

  Raw atom() {
    const Token& t = cur_.peek();
    switch (t.kind) {
      case Token::Kind::Hash: {
        cur_.next();
        Raw v;
        v.is_var = true;
        v.index = t.number;
        v.line = t.line;
        v.column = t.column;
        return v;
      }
      case Token::Kind::Number: {
        cur_.next();
        if (t.number == 0) throw ParseError(t.line, t.column, "paper-notation variables are 1-based");
        Raw v;
        v.is_var = true;
        v.index = t.number - 1;
        v.line = t.line;
        v.column = t.column;
        return v;
      }
      case Token::Kind::LParen: {
        if (cur_.peek(1).kind == Token::Kind::Name && cur_.peek(1).text == "con") return sexpr();
        cur_.next();
        Raw inner = expr();
        cur_.expect(Token::Kind::RParen, "')'");
        return inner;
      }
      case Token::Kind::Name: {
        const Token& name_tok = cur_.next();
        const TermAritySpec& ar = resolve(name_tok);
        Raw node = head(name_tok, ar);
        explicit_sorts(node);
        if (cur_.at(Token::Kind::LParen) && !cur_.peek().spaced) {
          call_args(node, ar);
          return node;
        }
        if (!ar.args.empty() || ar.nat_indexed) {
          throw ParseError(name_tok.line, name_tok.column,
                           "constructor '" + ar.name + "' needs arguments; parenthesize it");
        }
        return node;
      }
      default:
        cur_.fail("expected a term");
    }
  }

  Raw sexpr() {
    const Token& open = cur_.next();
    cur_.next();  // con
    const Token& name_tok = cur_.expect(Token::Kind::Name, "arity name");
    const TermAritySpec& ar = resolve(name_tok);
    Raw node = head(name_tok, ar);
    node.line = open.line;
    node.column = open.column;
    if (cur_.at(Token::Kind::LBrack)) {
      cur_.next();
      std::vector<Sort> sorts;
      while (!cur_.at(Token::Kind::RBrack)) {
        if (cur_.at(Token::Kind::End)) cur_.fail("unterminated sort list");
        sorts.push_back(read_sort(cur_));
      }
      cur_.next();
      node.sorts = std::move(sorts);
    }
    if (cur_.at(Token::Kind::LBrace)) {
      cur_.next();
      node.nat = cur_.expect(Token::Kind::Number, "nat payload").number;
      cur_.expect(Token::Kind::RBrace, "'}'");
    }
    while (!cur_.at(Token::Kind::RParen)) {
      if (cur_.at(Token::Kind::End)) cur_.fail("unterminated term");
      node.children.push_back(atom());
    }
    cur_.next();
    return node;
  }

  const TwoSignature& sig_;
  Cursor& cur_;
};

UType to_utype(const Sort& s) {
  std::vector<UType> args;
  for (const auto& a : s.args) args.push_back(to_utype(a));
  return UType::con(s.name, std::move(args));
}

UType instantiate(const SortExpr& e, const std::vector<UType>& holes) {
  if (e.is_var()) return holes.at(e.var - 1);
  std::vector<UType> args;
  for (const auto& a : e.args) args.push_back(instantiate(a, holes));
  return UType::con(e.name, std::move(args));
}

std::optional<Sort> to_sort(const UType& t) {
  if (t.kind != UType::Kind::Con) return std::nullopt;
  std::vector<Sort> args;
  for (const auto& a : t.args) {
    auto s = to_sort(a);
    if (!s) return std::nullopt;
    args.push_back(std::move(*s));
  }
  return Sort(t.name, std::move(args));
}

std::string format_utype(const UType& t) {
  if (auto s = to_sort(t)) return format_sort(*s);
  return "?";
}

class Elaborator {
 public:
  explicit Elaborator(const TwoSignature& sig) : sig_(sig) {}

  struct Pending {
    const Raw* raw;
    const TermAritySpec* arity = nullptr;
    std::vector<UType> holes;
    std::vector<Pending> kids;
  };

  std::pair<Pending, UType> infer(const Raw& raw, const std::vector<UType>& ctx) {
    auto where = [&](const std::string& msg) {
      return TypeError(std::to_string(raw.line) + ":" + std::to_string(raw.column) + ": " + msg);
    };
    if (raw.is_var) {
      if (raw.index >= ctx.size()) throw where("unbound index #" + std::to_string(raw.index));
      return {Pending{&raw, nullptr, {}, {}}, ctx[raw.index]};
    }
    const TermAritySpec* ar = sig_.find_arity(raw.name);
    if (!ar) throw where("unknown arity '" + raw.name + "'");
    Pending p{&raw, ar, {}, {}};
    for (unsigned i = 0; i < ar->degree; ++i) p.holes.push_back(unifier_.fresh());
    if (raw.sorts) {
      if (raw.sorts->size() != ar->degree) {
        throw where("'" + ar->name + "' takes " + std::to_string(ar->degree) + " sort arguments");
      }
      for (const auto& s : *raw.sorts) check_sort(s, raw);
      for (unsigned i = 0; i < ar->degree; ++i) unifier_.unify(p.holes[i], to_utype((*raw.sorts)[i]));
    }
    if (ar->nat_indexed && !raw.nat) throw where("missing nat payload on '" + ar->name + "'");
    if (!ar->nat_indexed && raw.nat) throw where("unexpected nat payload on '" + ar->name + "'");
    if (raw.children.size() != ar->args.size()) {
      throw where("'" + ar->name + "' takes " + std::to_string(ar->args.size()) + " children");
    }
    for (std::size_t i = 0; i < ar->args.size(); ++i) {
      const ArgSpec& spec = ar->args[i];
      std::vector<UType> inner;
      for (auto it = spec.binders.rbegin(); it != spec.binders.rend(); ++it) inner.push_back(instantiate(*it, p.holes));
      inner.insert(inner.end(), ctx.begin(), ctx.end());
      auto [kid, got] = infer(raw.children[i], inner);
      UType want = instantiate(spec.body, p.holes);
      if (!unifier_.unify(got, want)) {
        throw where("child sort mismatch at argument " + std::to_string(i) + " of '" + ar->name + "': expected " +
                    format_utype(unifier_.zonk(want)) + ", got " + format_utype(unifier_.zonk(got)));
      }
      p.kids.push_back(std::move(kid));
    }
    UType result = instantiate(ar->result, p.holes);
    return {std::move(p), std::move(result)};
  }

  bool unify(const UType& a, const UType& b) { return unifier_.unify(a, b); }
  UType zonk(const UType& t) const { return unifier_.zonk(t); }

  Term build(const Pending& p) {
    if (!p.arity) return Term::var(p.raw->index);
    std::vector<Sort> sorts;
    for (const auto& h : p.holes) {
      auto s = to_sort(unifier_.zonk(h));
      if (!s) {
        throw TypeError(std::to_string(p.raw->line) + ":" + std::to_string(p.raw->column) +
                        ": cannot infer sort argument of '" + p.arity->name + "'; write " + p.arity->name +
                        "[...] to annotate it");
      }
      sorts.push_back(std::move(*s));
    }
    std::vector<Term> kids;
    for (const auto& k : p.kids) kids.push_back(build(k));
    return make_con(sig_, p.arity->name, std::move(sorts), std::move(kids), p.raw->nat);
  }

 private:
  void check_sort(const Sort& s, const Raw& raw) {
    auto it = sig_.sorts.constructors.find(s.name);
    if (it == sig_.sorts.constructors.end() || it->second != s.args.size()) {
      throw TypeError(std::to_string(raw.line) + ":" + std::to_string(raw.column) + ": bad sort '" +
                      format_sort(s) + "'");
    }
    for (const auto& a : s.args) check_sort(a, raw);
  }

  const TwoSignature& sig_;
  Unifier unifier_;
};

std::string capitalized(const std::string& s) {
  std::string out = s;
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

enum class Slot { Top, AppFun, AppArg, PrefixArg };

void paper(const Term& t, Slot slot, std::string& out) {
  if (t.is_var()) {
    out += std::to_string(t.index() + 1);
    return;
  }
  if (t.arity() == "app" && t.children().size() == 2 && !t.nat()) {
    bool parens = slot == Slot::AppArg || slot == Slot::PrefixArg;
    if (parens) out += '(';
    paper(t.children()[0], Slot::AppFun, out);
    out += " @ ";
    paper(t.children()[1], Slot::AppArg, out);
    if (parens) out += ')';
    return;
  }
  if (t.children().empty() && !t.nat()) {
    out += t.arity();
    return;
  }
  bool parens = slot == Slot::PrefixArg;
  if (parens) out += '(';
  out += capitalized(t.arity());
  if (t.nat()) out += " " + std::to_string(*t.nat());
  for (const auto& c : t.children()) {
    out += ' ';
    paper(c, Slot::PrefixArg, out);
  }
  if (parens) out += ')';
}

void canonical(const Term& t, std::string& out) {
  if (t.is_var()) {
    out += "#" + std::to_string(t.index());
    return;
  }
  out += "(con " + t.arity() + " [";
  for (std::size_t i = 0; i < t.sort_args().size(); ++i) {
    if (i) out += ' ';
    out += format_sort(t.sort_args()[i]);
  }
  out += "]";
  if (t.nat()) out += " {" + std::to_string(*t.nat()) + "}";
  for (const auto& c : t.children()) {
    out += ' ';
    canonical(c, out);
  }
  out += ')';
}

}  // namespace

std::string format_sort(const Sort& s) {
  if (s.args.empty()) return s.name;
  std::string out = "(" + s.name;
  for (const auto& a : s.args) out += " " + format_sort(a);
  return out + ")";
}

Sort parse_sort(std::string_view text) {
  Cursor cur(lex(text));
  Sort s = read_sort(cur);
  if (!cur.at(Token::Kind::End)) cur.fail("trailing input after sort");
  return s;
}

Context parse_context(std::string_view text) {
  Cursor cur(lex(text));
  Context ctx;
  if (cur.at(Token::Kind::End)) return ctx;
  while (true) {
    ctx.push_back(read_sort(cur));
    if (cur.at(Token::Kind::End)) break;
    cur.expect(Token::Kind::Comma, "','");
  }
  return ctx;
}

std::string format_context(const Context& ctx) {
  std::string out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += ",";
    out += format_sort(ctx[i]);
  }
  return out;
}

std::string format_term(const Term& t, Notation notation) {
  std::string out;
  if (notation == Notation::Paper) {
    paper(t, Slot::Top, out);
  } else {
    canonical(t, out);
  }
  return out;
}

Term parse_term(const TwoSignature& sig, std::string_view text, const Context& ctx,
                const std::optional<Sort>& expected) {
  Cursor cur(lex(text));
  TermReader reader(sig, cur);
  Raw raw = reader.expr();
  if (!cur.at(Token::Kind::End)) cur.fail("trailing input after term");

  Elaborator el(sig);
  std::vector<UType> uctx;
  for (const auto& s : ctx) uctx.push_back(to_utype(s));
  auto [pending, sort] = el.infer(raw, uctx);
  if (expected && !el.unify(sort, to_utype(*expected))) {
    throw TypeError("term has sort " + format_utype(el.zonk(sort)) + ", expected " + format_sort(*expected));
  }
  return el.build(pending);
}

}  // namespace twosig
