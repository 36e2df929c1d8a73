#include "twosig/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "twosig/lang_std.hpp"
#include "twosig/laws.hpp"
#include "twosig/reduction.hpp"
#include "twosig/representation.hpp"
#include "twosig/sigfile.hpp"
#include "twosig/text.hpp"

namespace twosig::cli {

namespace {

// Input problems that end the command with kUsage.
struct InputError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_file(const std::string& arg) {
  std::error_code ec;
  return std::filesystem::is_regular_file(arg, ec);
}

/// Signature files are parsed; anything else is looked up in the catalog.
TwoSignature load_signature(const std::string& arg, std::ostream& err) {
  if (!is_file(arg)) {
    if (const TwoSignature* sig = BuiltinCatalog::instance().signature(arg)) return *sig;
    throw InputError{"no signature file or built-in signature named '" + arg + "'"};
  }
  SignatureParse parsed = parse_signature(read_file(arg));
  if (!parsed.signature) {
    for (const auto& d : parsed.diagnostics) err << arg << ":" << to_string(d) << "\n";
    throw InputError{"invalid signature " + arg};
  }
  return *parsed.signature;
}

Representation load_representation(const std::string& name) {
  if (auto rep = BuiltinCatalog::instance().representation(name)) return *rep;
  std::string known;
  for (const auto& n : BuiltinCatalog::instance().representation_names()) known += " " + n;
  throw InputError{"unknown representation '" + name + "' (known:" + known + ")"};
}

/// The argument names a file if one exists, otherwise it is the term itself.
std::string term_text(const std::string& arg) { return is_file(arg) ? read_file(arg) : arg; }

void check_sort(const TwoSignature& sig, const Sort& s) {
  auto it = sig.sorts.constructors.find(s.name);
  if (it == sig.sorts.constructors.end() || it->second != s.args.size()) {
    throw InputError{"sort " + format_sort(s) + " is not well formed in this signature"};
  }
  for (const auto& a : s.args) check_sort(sig, a);
}

Context load_context(const TwoSignature& sig, const std::string& text) {
  if (text.empty()) return {};
  Context ctx = parse_context(text);
  for (const auto& s : ctx) check_sort(sig, s);
  return ctx;
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(text, &used, 0);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError{"invalid seed '" + text + "'"};
}

std::string hex(std::uint64_t v) {
  std::ostringstream ss;
  ss << "0x" << std::hex << std::uppercase << v;
  return ss.str();
}

struct Options {
  std::string sig;
  std::string rep;
  std::string term;
  std::string term2;
  std::string ctx;
  std::string seed = "0xC0FFEE";
  bool paper = false;
  bool trace = false;
  bool all = false;
  std::size_t steps = 1;
  std::size_t max = 1000;
  std::size_t samples = 200;
  std::size_t depth = 4;
  std::size_t bound = 16;
  std::size_t frontier = 4096;
  std::size_t faith_bound = 32;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  int check() {
    TwoSignature sig = load_signature(o_.sig, err_);
    out_ << "ok: " << sig.sorts.constructors.size() << " sorts, " << sig.arities.size() << " arities, "
         << sig.rules.size() << " rules\n";
    return kOk;
  }

  int typecheck_cmd() {
    TwoSignature sig = load_signature(o_.sig, err_);
    Context ctx = load_context(sig, o_.ctx);
    Term t = parse(sig, o_.term, ctx);
    out_ << format_sort(typecheck(sig, ctx, t)) << "\n";
    return kOk;
  }

  int reduce() {
    TwoSignature sig = load_signature(o_.sig, err_);
    Context ctx = load_context(sig, o_.ctx);
    Term t = parse(sig, o_.term, ctx);
    if (o_.all) {
      for (const auto& s : step_all(sig, t)) {
        out_ << "[" << s.rule << "@" << format_position(s.position) << "] " << show(s.result) << "\n";
      }
      return kOk;
    }
    Normalization n = normalize(sig, t, o_.steps);
    if (o_.trace) {
      out_ << "0. " << show(t) << "\n" << render_trace(n.trace, [this](const Term& x) { return show(x); });
    } else {
      out_ << show(n.result) << "\n";
    }
    return kOk;
  }

  int normalize_cmd() {
    TwoSignature sig = load_signature(o_.sig, err_);
    Context ctx = load_context(sig, o_.ctx);
    Term t = parse(sig, o_.term, ctx);
    Normalization n = normalize(sig, t, o_.max);
    if (o_.trace) out_ << "0. " << show(t) << "\n" << render_trace(n.trace, [this](const Term& x) { return show(x); });
    if (n.exhausted) {
      err_ << "no normal form within " << o_.max << " steps\n";
      return kUnknown;
    }
    if (!o_.trace) out_ << show(n.result) << "\n";
    return kOk;
  }

  int reaches() {
    TwoSignature sig = load_signature(o_.sig, err_);
    Context ctx = load_context(sig, o_.ctx);
    Term from = parse(sig, o_.term, ctx);
    Term to = parse(sig, o_.term2, ctx);
    Reachability r = reduces_to(sig, ctx, from, to, SearchBounds{o_.bound, o_.frontier});
    out_ << to_string(r.verdict) << " (explored " << r.explored << ")\n";
    if (r.trace && o_.trace) {
      out_ << "0. " << show(from) << "\n" << render_trace(*r.trace, [this](const Term& x) { return show(x); });
    }
    return r.verdict == Verdict::Yes ? kOk : r.verdict == Verdict::No ? kViolation : kUnknown;
  }

  int translate_cmd() {
    Representation rep = load_representation(o_.rep);
    Context ctx = load_context(rep.source, o_.ctx);
    Term t = parse(rep.source, o_.term, ctx);
    out_ << show(translate(rep, ctx, t)) << "\n";
    return kOk;
  }

  int verify() {
    Representation rep = load_representation(o_.rep);
    std::uint64_t seed = parse_seed(o_.seed);
    out_ << "verify " << rep.name << " samples=" << o_.samples << " depth=" << o_.depth << " bound=" << o_.bound
         << " frontier=" << o_.frontier << " faith-bound=" << o_.faith_bound << " seed=" << hex(seed) << "\n";

    SamplingConfig sc{o_.samples, o_.depth, SearchBounds{o_.bound, o_.frontier}, seed};
    SatisfactionReport sat = check_satisfaction(rep, sc);
    out_ << "satisfaction\n";
    std::size_t width = 0;
    for (const auto& r : sat.rules) width = std::max(width, r.rule.size());
    for (const auto& r : sat.rules) {
      out_ << "  " << std::left << std::setw(static_cast<int>(width)) << r.rule << std::right
           << "  attempted=" << r.attempted << " yes=" << r.yes << " unknown=" << r.unknown << " no=" << r.no
           << " max_yes_steps=" << r.max_yes_steps << "\n";
    }
    for (const auto& r : sat.rules) {
      for (const auto& c : r.counterexamples) {
        out_ << "  " << to_string(c.verdict) << " " << c.rule << " in [" << format_context(c.context) << "]: "
             << show(c.lhs) << "  ~>*  " << show(c.rhs) << "\n";
      }
    }

    SamplingConfig fc = sc;
    fc.bounds.max_steps = o_.faith_bound;
    FaithfulnessReport faith = check_faithfulness(rep, fc, &sat);
    out_ << "faithfulness terms=" << faith.terms << " steps=" << faith.steps_checked << " yes=" << faith.yes
         << " unknown=" << faith.unknown << " no=" << faith.no << " max_yes_steps=" << faith.max_yes_steps << "\n";
    if (!faith.precondition_established && o_.samples > 0) {
      out_ << "  note: satisfaction has No results, so faithfulness is not implied\n";
    }
    for (const auto& v : faith.violations) {
      out_ << "  " << to_string(v.verdict) << " " << v.rule << " in [" << format_context(v.source_context)
           << "]: " << show(v.source) << "  ~>  " << show(v.reduct) << "\n";
    }

    LawReport laws = check_translation_laws(rep, o_.samples, o_.depth, seed);
    out_ << "translation laws\n";
    print_laws(laws);

    bool violation = sat.total_no() > 0 || faith.no > 0 || !laws.ok();
    bool unknown = sat.total_unknown() > 0 || faith.unknown > 0;
    out_ << "result " << (violation ? "violation" : unknown ? "unknown" : "ok") << "\n";
    return violation ? kViolation : unknown ? kUnknown : kOk;
  }

  int laws() {
    TwoSignature sig = load_signature(o_.sig, err_);
    std::uint64_t seed = parse_seed(o_.seed);
    LawConfig cfg{o_.samples, o_.depth, seed, SearchBounds{o_.bound, o_.frontier}};
    out_ << "laws " << o_.sig << " samples=" << cfg.samples << " depth=" << cfg.depth << " seed=" << hex(seed) << "\n";
    LawReport monad = check_monad_laws(sig, cfg);
    LawReport reduction = check_reduction_laws(sig, cfg);
    out_ << "substitution\n";
    print_laws(monad);
    out_ << "reduction\n";
    print_laws(reduction);
    bool ok = monad.ok() && reduction.ok();
    out_ << "result " << (ok ? "ok" : "violation") << "\n";
    return ok ? kOk : kViolation;
  }

 private:
  Term parse(const TwoSignature& sig, const std::string& arg, const Context& ctx) {
    return parse_term(sig, term_text(arg), ctx);
  }

  std::string show(const Term& t) const { return format_term(t, o_.paper ? Notation::Paper : Notation::Canonical); }

  void print_laws(const LawReport& report) {
    for (const auto& l : report.laws) {
      out_ << "  " << l.law << "  checked=" << l.checked << " failures=" << l.failures;
      if (l.inconclusive) out_ << " inconclusive=" << l.inconclusive;
      out_ << "\n";
      if (l.failures) out_ << "    first failure: " << l.first_failure << "\n";
    }
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"2-signatures, their generated syntax and reduction, and translations out of it", "twosig"};
  app.require_subcommand(1);
  Options o;

  auto sig_arg = [&](CLI::App* c) { c->add_option("sig", o.sig, "signature file or built-in name")->required(); };
  auto term_arg = [&](CLI::App* c, const char* name = "term") {
    c->add_option(name, o.term, "term file or literal term text")->required();
  };
  auto ctx_opt = [&](CLI::App* c) { c->add_option("--ctx", o.ctx, "comma-separated sorts, index 0 first"); };
  auto paper_flag = [&](CLI::App* c) {
    c->add_flag("--paper-notation", o.paper, "1-based numerals and infix @");
  };

  auto* check = app.add_subcommand("check", "parse and validate a signature file");
  check->add_option("sig", o.sig, "signature file")->required();

  auto* tc = app.add_subcommand("typecheck", "print the sort of a term");
  sig_arg(tc);
  term_arg(tc);
  ctx_opt(tc);

  auto* reduce = app.add_subcommand("reduce", "take leftmost-outermost steps");
  sig_arg(reduce);
  term_arg(reduce);
  ctx_opt(reduce);
  paper_flag(reduce);
  reduce->add_option("--steps", o.steps, "number of steps")->capture_default_str();
  reduce->add_flag("--trace", o.trace, "print every step");
  reduce->add_flag("--all", o.all, "list every one-step reduct instead");

  auto* norm = app.add_subcommand("normalize", "reduce leftmost-outermost to normal form");
  sig_arg(norm);
  term_arg(norm);
  ctx_opt(norm);
  paper_flag(norm);
  norm->add_option("--max", o.max, "step limit")->capture_default_str();
  norm->add_flag("--trace", o.trace, "print every step");

  auto* reaches = app.add_subcommand("reaches", "bounded search for a reduction sequence");
  sig_arg(reaches);
  term_arg(reaches, "from");
  reaches->add_option("to", o.term2, "target term file or text")->required();
  ctx_opt(reaches);
  paper_flag(reaches);
  reaches->add_option("--bound", o.bound, "step bound")->capture_default_str();
  reaches->add_option("--frontier", o.frontier, "visited-term cap")->capture_default_str();
  reaches->add_flag("--trace", o.trace, "print the reduction found");

  auto* tr = app.add_subcommand("translate", "translate a term along a representation");
  tr->add_option("rep", o.rep, "representation name")->required();
  term_arg(tr);
  ctx_opt(tr);
  paper_flag(tr);

  auto* verify = app.add_subcommand("verify", "satisfaction, faithfulness and translation laws");
  verify->add_option("rep", o.rep, "representation name")->required();
  verify->add_option("--samples", o.samples, "samples per rule and per suite")->capture_default_str();
  verify->add_option("--depth", o.depth, "random term depth")->capture_default_str();
  verify->add_option("--bound", o.bound, "reachability step bound for rules")->capture_default_str();
  verify->add_option("--frontier", o.frontier, "visited-term cap")->capture_default_str();
  verify->add_option("--faith-bound", o.faith_bound, "reachability step bound for faithfulness")
      ->capture_default_str();
  verify->add_option("--seed", o.seed, "random seed")->capture_default_str();
  paper_flag(verify);

  auto* laws = app.add_subcommand("laws", "substitution and reduction law suites");
  sig_arg(laws);
  laws->add_option("--samples", o.samples, "samples per law")->capture_default_str();
  laws->add_option("--depth", o.depth, "random term depth")->capture_default_str();
  laws->add_option("--bound", o.bound, "reachability step bound")->capture_default_str();
  laws->add_option("--frontier", o.frontier, "visited-term cap")->capture_default_str();
  laws->add_option("--seed", o.seed, "random seed")->capture_default_str();
  laws->callback([&] {
    if (!laws->count("--samples")) o.samples = 500;
    if (!laws->count("--depth")) o.depth = 5;
    if (!laws->count("--frontier")) o.frontier = 20000;
  });

  std::vector<const char*> argv{"twosig"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }

  Runner r(o, out, err);
  try {
    if (*check) return r.check();
    if (*tc) {
      try {
        return r.typecheck_cmd();
      } catch (const TypeError& e) {
        out << "ill-typed: " << e.what() << "\n";
        return kViolation;
      }
    }
    if (*reduce) return r.reduce();
    if (*norm) return r.normalize_cmd();
    if (*reaches) return r.reaches();
    if (*tr) return r.translate_cmd();
    if (*verify) return r.verify();
    if (*laws) return r.laws();
  } catch (const InputError& e) {
    err << e.message << "\n";
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const TypeError& e) {
    err << "type error: " << e.what() << "\n";
  } catch (const TranslationError& e) {
    err << "translation error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace twosig::cli
