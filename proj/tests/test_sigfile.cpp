#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "twosig/lang_std.hpp"
#include "twosig/sigfile.hpp"

using namespace twosig;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(TWOSIG_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(SigFile, DataFilesMatchBuiltins) {
  for (const char* name : {"pcf", "ulc", "stlc"}) {
    SignatureParse p = parse_signature(slurp(std::string(name) + ".sig"));
    ASSERT_TRUE(p.diagnostics.empty()) << name << ": " << to_string(p.diagnostics.front());
    ASSERT_TRUE(p.signature);
    EXPECT_EQ(*p.signature, *BuiltinCatalog::instance().signature(name)) << name;
  }
}

TEST(SigFile, MissingArrowIsLocated) {
  std::string text =
      "sorts { Nat/0; }\n"
      "terms {\n"
      "  z [deg 0] : Nat;\n"
      "}\n";
  SignatureParse p = parse_signature(text);
  ASSERT_FALSE(p.diagnostics.empty());
  EXPECT_FALSE(p.signature);
  EXPECT_EQ(p.diagnostics.front().location.substr(0, 2), "3:");
}

TEST(SigFile, BetaRule) {
  std::string text =
      "sorts { */0; }\n"
      "terms { abs [deg 0] : (bind[*].*) -> *; app [deg 0] : *, * -> *; }\n"
      "rules { beta [deg 0] { M : bind[*].*; N : * } : app(abs(M), N) => M[N]; }\n";
  SignatureParse p = parse_signature(text);
  ASSERT_TRUE(p.diagnostics.empty()) << to_string(p.diagnostics.front());
  EXPECT_EQ(p.signature->rules.front().rhs.kind, TemplateTerm::Kind::Subst1);
}

TEST(SigFile, SemanticErrorsComeFromValidation) {
  std::string text =
      "sorts { Nat/0; }\n"
      "terms { z [deg 0] : -> Nat; s [deg 0] : Nat -> Nat; }\n"
      "rules { bad [deg 0] { n : Nat } : s(n) => m; }\n";
  SignatureParse p = parse_signature(text);
  EXPECT_FALSE(p.signature);
  bool found = false;
  for (const auto& d : p.diagnostics) found = found || d.reason.find("unknown arity 'm'") != std::string::npos ||
                                              d.reason.find("'m'") != std::string::npos;
  EXPECT_TRUE(found);
}
