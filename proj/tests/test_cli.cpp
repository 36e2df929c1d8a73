#include <gtest/gtest.h>

#include <sstream>

#include "twosig/cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = twosig::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(TWOSIG_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Cli, Check) {
  Outcome r = run({"check", data("pcf.sig")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok: 3 sorts, 12 arities, 11 rules\n");
  EXPECT_EQ(run({"check", data("missing.sig")}).code, 2);
}

TEST(Cli, Typecheck) {
  EXPECT_EQ(run({"typecheck", "pcf", "succ @ Nats 1"}).out, "Nat\n");
  Outcome bad = run({"typecheck", "pcf", "succ @ ttt"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out.rfind("ill-typed: ", 0), 0u);
  EXPECT_EQ(run({"typecheck", data("pcf.sig"), "succ @ 1", "--ctx", "Nat"}).out, "Nat\n");
}

TEST(Cli, ReduceTrace) {
  Outcome r = run({"reduce", "pcf", "zero @ Nats 0", "--trace", "--paper-notation"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0. zero @ Nats 0\n1. [zero_t@root] ttt\n");
}

TEST(Cli, Normalize) {
  EXPECT_EQ(run({"normalize", "pcf", "rec[Nat] (Abs 1)", "--max", "3"}).code, 3);
  Outcome r = run({"normalize", "pcf", "pred @ (succ @ Nats 0)", "--paper-notation"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Nats 0\n");
}

TEST(Cli, Reaches) {
  EXPECT_EQ(run({"reaches", "ulc", "Abs (1 @ 1) @ Abs (1 @ 1)", "Abs 1"}).code, 1);
  Outcome yes = run({"reaches", "ulc", "Abs 1 @ Abs 1", "Abs 1"});
  EXPECT_EQ(yes.code, 0);
  EXPECT_EQ(yes.out.rfind("Yes", 0), 0u);
}

TEST(Cli, TranslateNegate) {
  Outcome r = run({"translate", "pcf2ulc", data("negate.term"), "--paper-notation"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Abs (Abs (Abs (Abs (3 @ 2 @ 1))) @ 1 @ Abs (Abs 1) @ Abs (Abs 2))\n");
}

TEST(Cli, VerifyWithNoSamples) {
  Outcome r = run({"verify", "pcf2ulc", "--samples", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("result ok"), std::string::npos);
}

TEST(Cli, VerifyReportsPredSucc) {
  Outcome r = run({"verify", "pcf2ulc", "--samples", "20", "--depth", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("pred_succ"), std::string::npos);
  EXPECT_NE(r.out.find("result violation"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"reduce", "pcf", "x y"}).code, 2);
  EXPECT_EQ(run({"translate", "nope", "ttt"}).code, 2);
  Outcome help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("verify"), std::string::npos);
}
