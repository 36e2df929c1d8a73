#include "twosig/sigfile.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <stdexcept>
#include <string>

namespace twosig {

namespace {

struct Tok {
  enum class Kind { Name, Nat, Punct, Arrow, Rewrite, End };

  Kind kind = Kind::End;
  std::string text;
  std::uint64_t value = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Failure {
  std::size_t line;
  std::size_t column;
  std::string message;
};

bool symbol_char(char c) { return std::string_view("~>*+-<=!&|^%$").find(c) != std::string_view::npos; }

std::vector<Tok> tokenize(std::string_view src) {
  std::vector<Tok> out;
  std::size_t i = 0, line = 1, col = 1;
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
  auto alpha = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Tok t;
    t.line = line;
    t.column = col;
    std::size_t n = 0;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i + n < src.size() && std::isdigit(static_cast<unsigned char>(src[i + n]))) ++n;
      t.kind = Tok::Kind::Nat;
      if (std::from_chars(src.data() + i, src.data() + i + n, t.value).ec != std::errc()) {
        throw Failure{line, col, "number out of range"};
      }
    } else if (alpha(c)) {
      while (i + n < src.size()) {
        char d = src[i + n];
        bool dash_word = d == '-' && i + n + 1 < src.size() && alpha(src[i + n + 1]);
        if (!(std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'' || dash_word)) break;
        ++n;
      }
      t.kind = Tok::Kind::Name;
    } else if (symbol_char(c)) {
      while (i + n < src.size() && symbol_char(src[i + n])) ++n;
      std::string_view run = src.substr(i, n);
      t.kind = run == "->" ? Tok::Kind::Arrow : run == "=>" ? Tok::Kind::Rewrite : Tok::Kind::Name;
    } else if (std::string_view("()[]{},;:./").find(c) != std::string_view::npos) {
      n = 1;
      t.kind = Tok::Kind::Punct;
    } else {
      throw Failure{line, col, std::string("unexpected character '") + c + "'"};
    }
    t.text = std::string(src.substr(i, n));
    advance(n);
    out.push_back(std::move(t));
  }
  Tok end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class SigParser {
 public:
  explicit SigParser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  TwoSignature file() {
    TwoSignature sig;
    keyword("sorts");
    punct("{");
    while (!is_punct("}")) {
      const Tok& name = expect_name("sort constructor name");
      punct("/");
      unsigned arity = static_cast<unsigned>(expect_nat("sort arity"));
      if (!sig.sorts.constructors.emplace(name.text, arity).second) {
        throw Failure{name.line, name.column, "duplicate sort constructor '" + name.text + "'"};
      }
      punct(";");
    }
    punct("}");

    keyword("terms");
    punct("{");
    while (!is_punct("}")) sig.arities.push_back(arity_decl());
    punct("}");

    keyword("rules");
    punct("{");
    while (!is_punct("}")) sig.rules.push_back(rule_decl());
    punct("}");
    if (peek().kind != Tok::Kind::End) fail("expected end of file");
    return sig;
  }

  std::map<std::string, const Tok*> arity_pos;
  std::map<std::string, const Tok*> rule_pos;

 private:
  const Tok& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Tok& next() {
    const Tok& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Tok& t = peek();
    std::string found = t.kind == Tok::Kind::End ? "end of file" : "'" + t.text + "'";
    throw Failure{t.line, t.column, msg + ", found " + found};
  }
  bool is_punct(std::string_view p) const { return peek().kind == Tok::Kind::Punct && peek().text == p; }
  bool is_name(std::string_view n) const { return peek().kind == Tok::Kind::Name && peek().text == n; }
  void punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
    next();
  }
  void keyword(std::string_view k) {
    if (!is_name(k)) fail("expected '" + std::string(k) + "'");
    next();
  }
  const Tok& expect_name(const char* what) {
    if (peek().kind != Tok::Kind::Name) fail(std::string("expected ") + what);
    return next();
  }
  std::uint64_t expect_nat(const char* what) {
    if (peek().kind != Tok::Kind::Nat) fail(std::string("expected ") + what);
    return next().value;
  }

  SortExpr sort_expr() {
    if (peek().kind == Tok::Kind::Nat) return SortExpr::degvar(static_cast<unsigned>(next().value));
    std::string name = expect_name("sort expression").text;
    std::vector<SortExpr> args;
    if (is_punct("(")) {
      next();
      while (!is_punct(")")) {
        if (!args.empty()) punct(",");
        args.push_back(sort_expr());
      }
      next();
    }
    return SortExpr::con(std::move(name), std::move(args));
  }

  std::vector<SortExpr> bracket_list() {
    punct("[");
    std::vector<SortExpr> out;
    while (!is_punct("]")) {
      if (!out.empty()) punct(",");
      out.push_back(sort_expr());
    }
    next();
    return out;
  }

  // "bind" "[" list "]" "." sortexpr
  ArgSpec bind_tail() {
    keyword("bind");
    ArgSpec spec;
    spec.binders = bracket_list();
    punct(".");
    spec.body = sort_expr();
    return spec;
  }

  TermAritySpec arity_decl() {
    const Tok& name = expect_name("arity name");
    arity_pos[name.text] = &name;
    TermAritySpec ar;
    ar.name = name.text;
    punct("[");
    keyword("deg");
    ar.degree = static_cast<unsigned>(expect_nat("degree"));
    if (is_punct(",")) {
      next();
      keyword("nat-indexed");
      ar.nat_indexed = true;
    }
    punct("]");
    punct(":");
    while (peek().kind != Tok::Kind::Arrow) {
      if (!ar.args.empty()) punct(",");
      if (is_punct("(")) {
        next();
        ar.args.push_back(bind_tail());
        punct(")");
      } else {
        ar.args.push_back(ArgSpec{{}, sort_expr()});
      }
    }
    next();
    ar.result = sort_expr();
    punct(";");
    return ar;
  }

  NatPattern nat_pattern() {
    if (peek().kind == Tok::Kind::Nat) {
      std::uint64_t v = next().value;
      return v == 0 ? NatPattern::zero() : NatPattern::constant(v);
    }
    if (is_name("S") && peek(1).kind == Tok::Kind::Punct && peek(1).text == "(") {
      next();
      next();
      std::string var = expect_name("nat variable").text;
      punct(")");
      return NatPattern::succ(var);
    }
    std::string var = expect_name("nat pattern").text;
    if (is_name("+")) {
      next();
      if (expect_nat("1") != 1) fail("only '+1' is supported in nat patterns");
      return NatPattern::plus1(var);
    }
    return NatPattern::variable(var);
  }

  TemplateTerm template_term(const RuleTemplate& rule) {
    TemplateTerm t = primary(rule);
    while (is_punct("[")) {
      next();
      TemplateTerm arg = template_term(rule);
      punct("]");
      t = TemplateTerm::subst1(std::move(t), std::move(arg));
    }
    return t;
  }

  TemplateTerm primary(const RuleTemplate& rule) {
    if (is_name("nat") && peek(1).kind == Tok::Kind::Punct && peek(1).text == ":") {
      next();
      next();
      return TemplateTerm::nat_lit(nat_pattern());
    }
    std::string name = expect_name("template").text;
    if (is_punct("(")) {
      next();
      std::vector<TemplateTerm> kids;
      while (!is_punct(")")) {
        if (!kids.empty()) punct(",");
        kids.push_back(template_term(rule));
      }
      next();
      return TemplateTerm::con(std::move(name), std::move(kids));
    }
    if (rule.metavars.count(name)) return TemplateTerm::meta(std::move(name));
    return TemplateTerm::con(std::move(name));
  }

  RuleTemplate rule_decl() {
    const Tok& name = expect_name("rule name");
    rule_pos[name.text] = &name;
    RuleTemplate rule;
    rule.name = name.text;
    punct("[");
    keyword("deg");
    rule.degree = static_cast<unsigned>(expect_nat("degree"));
    punct("]");
    punct("{");
    while (!is_punct("}")) {
      const Tok& var = expect_name("metavariable name");
      punct(":");
      if (is_name("nat")) {
        next();
        rule.natvars.insert(var.text);
      } else if (is_name("bind")) {
        ArgSpec spec = bind_tail();
        rule.metavars[var.text] = MetaDecl{std::move(spec.binders), std::move(spec.body)};
      } else {
        rule.metavars[var.text] = MetaDecl{{}, sort_expr()};
      }
      if (is_punct(";")) next();
    }
    next();
    punct(":");
    rule.lhs = template_term(rule);
    if (peek().kind != Tok::Kind::Rewrite) fail("expected '=>'");
    next();
    rule.rhs = template_term(rule);
    punct(";");
    return rule;
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

std::string where(std::size_t line, std::size_t col) { return std::to_string(line) + ":" + std::to_string(col); }

}  // namespace

SignatureParse parse_signature(std::string_view text) {
  SignatureParse out;
  try {
    SigParser parser(tokenize(text));
    TwoSignature sig = parser.file();
    ValidationReport report = validate_signature(sig);
    if (!report.ok()) {
      for (auto d : report.diagnostics) {
        // Validator locations start with "arity X" or "rule X".
        for (const auto* table : {&parser.arity_pos, &parser.rule_pos}) {
          for (const auto& [name, tok] : *table) {
            std::string tag = (table == &parser.arity_pos ? "arity " : "rule ") + name;
            if (d.location == tag || d.location.rfind(tag + ":", 0) == 0) {
              d.location = where(tok->line, tok->column) + " (" + d.location + ")";
            }
          }
        }
        out.diagnostics.push_back(std::move(d));
      }
      return out;
    }
    out.signature = resolve_signature(std::move(sig));
  } catch (const Failure& f) {
    out.diagnostics.push_back({where(f.line, f.column), f.message});
  }
  return out;
}

}  // namespace twosig
