#include <gtest/gtest.h>

#include <string>

#include "gbrw/rule_spec.hpp"

using namespace gbrw;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_rule_spec(text);
  } catch (const RuleSpecError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(RuleSpec, BuiltinWithName) {
  const auto r = parse_rule_spec("name: w3\ngenerator: builtin window-max:3\n");
  EXPECT_EQ(r.name(), "w3");
  EXPECT_EQ(r.beta_family(7), BetaFamily(7, {IndexSet{4, 5, 6}}));
}

TEST(RuleSpec, Psi0Override) {
  const auto r = parse_rule_spec("psi0: -1\ngenerator: builtin identity\n");
  EXPECT_EQ(r.psi0(), kMinus);
}

TEST(RuleSpec, BetaBlockWithFallback) {
  const auto r = parse_rule_spec(
      "# running max written out for two steps\n"
      "psi0: -1\n"
      "generator: beta {\n"
      "  2: [{1}]\n"
      "  3: [{1,2}]\n"
      "}\n"
      "fallback: builtin max\n");
  for (unsigned n = 0; n <= 8; ++n) EXPECT_EQ(r.truth_table(n), builtin::running_max().truth_table(n)) << n;
}

TEST(RuleSpec, TruthBlock) {
  // step 3 lists psi_2 over masks 0..3; "+--+" is u_1 u_2
  const auto r = parse_rule_spec(
      "psi0: +1\n"
      "generator: truth {\n"
      "  2: + -\n"
      "  3: +--+\n"
      "}\n"
      "fallback: builtin product\n");
  for (unsigned n = 0; n <= 6; ++n) EXPECT_EQ(r.truth_table(n), builtin::product().truth_table(n)) << n;
}

TEST(RuleSpec, Errors) {
  EXPECT_EQ(error_line("generator: builtin nonsense\n"), 1u);
  EXPECT_EQ(error_line("name: x\n\npsi0: 0\n"), 3u);
  EXPECT_EQ(error_line("psi0: -1\ngenerator: beta {\n  2: [{2}]\n}\nfallback: builtin max\n"), 3u);
  EXPECT_EQ(error_line("psi0: -1\ngenerator: truth {\n  3: +-+\n}\nfallback: builtin max\n"), 3u);
  EXPECT_EQ(error_line("psi0: -1\ngenerator: beta {\n  2: [{1}]\n"), 3u);
  EXPECT_EQ(error_line("psi0: -1\ngenerator: beta {\n  1: [{}]\n}\n"), 3u);
  EXPECT_EQ(error_line("generator: beta {\n  2: [{1}]\n}\nfallback: builtin max\n"), 1u);
  EXPECT_EQ(error_line("psi0: -1\ngenerator: beta {\n}\n"), 2u);
  EXPECT_EQ(error_line("colour: blue\n"), 1u);
  EXPECT_EQ(error_line("# nothing\n"), 1u);
}

TEST(RuleSpec, LoadBuiltinPrefix) {
  EXPECT_EQ(load_rule("builtin:levy").name(), "levy");
  EXPECT_THROW(load_rule("/nonexistent/rule.spec"), std::runtime_error);
}

TEST(RuleSpec, SampleFilesLoad) {
  const std::string dir = GBRW_RULES_DIR;
  const auto r = load_rule(dir + "/max_explicit.rule");
  for (unsigned n = 0; n <= 6; ++n) EXPECT_EQ(r.truth_table(n), builtin::running_max().truth_table(n));
  EXPECT_NO_THROW(load_rule(dir + "/threshold.rule"));
  EXPECT_NO_THROW(load_rule(dir + "/sgn_pairs.rule"));
}
