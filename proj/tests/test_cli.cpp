#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "prexp/cli.hpp"

using namespace prexp;

namespace {

std::string example(const std::string& name) {
  std::ifstream in(std::string(PREXP_EXAMPLES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::InconsistentData;
}

}  // namespace

TEST(TextIo, ScalarStringsRoundTrip) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  for (const Padic& x : {ctx.integer(0), ctx.rational(7, 25), ctx.integer(-13), Padic::zero_mod(5, 4), ctx.zero(),
                         ctx.integer(123456).cap_abs(5)}) {
    const Padic y = ctx.parse(x.str());
    EXPECT_EQ(y.str(), x.str());
    EXPECT_EQ(y.abs_prec(), x.abs_prec());
  }
}

TEST(TextIo, ParseErrorsCarryLineNumbers) {
  std::istringstream bad_int(example("exp_malformed.txt"));
  try {
    cli::run_exp(bad_int);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::istringstream unknown("context p=5\n\n# note\nbogus x=1\n");
  try {
    cli::run_exp(unknown);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  std::istringstream bad_scalar("context p=5\ndelta a=1/5x m=0\n");
  EXPECT_EQ(code_of([&] { cli::run_exp(bad_scalar); }), Errc::ParseError);
  EXPECT_EQ(code_of([] { textio::parse_grid("w=2;chi=a"); }), Errc::ParseError);
  EXPECT_EQ(code_of([] { textio::parse_grid("w=2"); }), Errc::ParseError);
}

TEST(TextIo, GridSpec) {
  const auto g = textio::parse_grid("w=2,6;chi=0,3,1:2");
  EXPECT_EQ(g.weights, (std::vector<std::int64_t>{2, 6}));
  ASSERT_EQ(g.chars.size(), 3u);
  EXPECT_EQ(g.chars[1].tame, 3);
  EXPECT_EQ(g.chars[1].wt, 3);
  EXPECT_EQ(g.chars[2].tame, 1);
  EXPECT_EQ(g.chars[2].wt, 2);
}

TEST(ExpCommand, ReferenceResidualVanishes) {
  std::istringstream in(example("exp_reference.txt"));
  const auto parsed = textio::parse_exp(textio::tokenize(in));
  const auto out = cli::compute_exp(parsed);
  EXPECT_TRUE(out.residual_vanishes) << out.residual;
  EXPECT_FALSE(out.value.F.series().is_exact_zero());
}

TEST(ExpCommand, ZeroAlphaGivesZero) {
  std::istringstream in(example("exp_zero.txt"));
  const std::string text = cli::run_exp(in);
  EXPECT_EQ(text.find("\nc "), std::string::npos);
  EXPECT_NE(text.find("residual 0\n"), std::string::npos);
}

TEST(ExpCommand, RejectsPsiNonzeroInput) {
  std::istringstream in("context p=5\ndelta a=2 m=0\nh 1\nf : 1\n");
  EXPECT_EQ(code_of([&] { cli::run_exp(in); }), Errc::PreconditionViolated);
}

TEST(LfunCommand, ZeroClassGivesZeroTable) {
  std::istringstream in(example("lfun_zero.txt"));
  const auto parsed = textio::parse_lfun(textio::tokenize(in));
  for (const auto& row : cli::compute_lfun(parsed, textio::parse_grid("w=2,6;chi=0,1,3"))) {
    EXPECT_TRUE(row.value.is_zero());
    EXPECT_EQ(row.cross, "match");
  }
}

TEST(LfunCommand, MuOneFactorVanishesAtForcedCharacter) {
  std::istringstream in(example("lfun_mu1.txt"));
  const auto parsed = textio::parse_lfun(textio::tokenize(in));
  int zeros = 0;
  for (const auto& row : cli::compute_lfun(parsed, textio::parse_grid("w=2,6;chi=0,3"))) {
    EXPECT_EQ(row.cross, "match");
    if (row.chi.wt == 3) {
      EXPECT_TRUE(row.value.is_zero());
      ++zeros;
    }
  }
  EXPECT_EQ(zeros, 2);
}

TEST(LfunCommand, CrossCheckAndMachineBlock) {
  std::istringstream in(example("lfun_synthetic.txt"));
  const std::string text = cli::run_lfun(in, "w=2,6;chi=0,1,1:2");
  EXPECT_EQ(text.find("mismatch"), std::string::npos);
  EXPECT_NE(text.find("BEGIN MACHINE\nLVAL 2 0 0 0 "), std::string::npos);
  EXPECT_NE(text.find("END MACHINE\n"), std::string::npos);
}

TEST(CheckCommand, UnknownSuiteIsConfigInvalid) {
  EXPECT_EQ(code_of([] { cli::run_suite("nope", CheckConfig{}); }), Errc::ConfigInvalid);
}

TEST(CheckCommand, MachineOutputIsDeterministic) {
  CheckConfig cfg;
  cfg.p = 3;
  cfg.seed = 42;
  const auto a = cli::format_report(cli::run_suite("eigenspace", cfg), true);
  const auto b = cli::format_report(cli::run_suite("eigenspace", cfg), true);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("CHECK eigenspace.", 0), 0u);
}
