#include <gtest/gtest.h>

#include <bit>
#include <set>
#include <vector>

#include "gbrw/builtins.hpp"
#include "gbrw/rule.hpp"

using namespace gbrw;

namespace {

std::vector<RecyclingRule> sample_rules() {
  return {builtin::identity(),
          builtin::negation(),
          builtin::product(),
          builtin::levy(),
          builtin::levy(kPlus),
          builtin::modified_levy(),
          builtin::modified_levy_max(),
          builtin::running_max(),
          builtin::window_max(1),
          builtin::window_max(3),
          builtin::extended_brw(SetSequence::Prefix{0.5}),
          builtin::extended_brw(SetSequence::PrefixLog{}),
          builtin::extended_brw(SetSequence::Window{2}),
          builtin::extended_brw(SetSequence::Fixed{3}),
          builtin::extended_brw(SetSequence::power(0.5)),
          builtin::sign_flips(0.3),
          builtin::disjoint_blocks(2, 2),
          builtin::disjoint_blocks(3, UINT32_MAX),
          builtin::predictable(builtin::identity()),
          builtin::predictable(builtin::levy()),
          builtin::parse("symmetric:-1,1,1"),
          builtin::parse("symmetric:-1,-0.5,1,0.5,-1")};
}

}  // namespace

TEST(RuleIncrement, IdentityKeepsLastSign) {
  const std::vector<Sign> u{kMinus, kPlus, kPlus};
  EXPECT_EQ(eval_rule_increment(builtin::identity(), u), kPlus);
}

TEST(RuleIncrement, ProductOfTwoMinus) {
  const std::vector<Sign> u{kMinus, kMinus};
  EXPECT_EQ(eval_rule_increment(builtin::product(), u), kPlus);
}

TEST(RuleIncrement, LevyAfterOnePlus) {
  const std::vector<Sign> u{kPlus, kMinus};
  EXPECT_EQ(eval_rule_increment(builtin::levy(), u), kMinus);
}

TEST(ApplyRule, IdentityAndNegation) {
  const std::vector<Sign> xi{kPlus, kMinus, kMinus, kPlus};
  EXPECT_EQ(apply_rule(builtin::identity(), xi), xi);
  const std::vector<Sign> two{kPlus, kMinus};
  EXPECT_EQ(apply_rule(builtin::negation(), two), (std::vector<Sign>{kMinus, kPlus}));
}

TEST(ApplyRule, RunningMaxOnTwoMinus) {
  const std::vector<Sign> xi{kMinus, kMinus};
  EXPECT_EQ(apply_rule(builtin::running_max(), xi), (std::vector<Sign>{kPlus, kPlus}));
}

TEST(ApplyRule, LevyHandExample) {
  const std::vector<Sign> xi{kPlus, kPlus, kMinus};
  EXPECT_EQ(apply_rule(builtin::levy(), xi), (std::vector<Sign>{kMinus, kPlus, kMinus}));
}

TEST(ApplyRule, InverseRecoversInput) {
  for (const auto& rule : sample_rules()) {
    for (std::uint64_t mask = 0; mask < 256; ++mask) {
      const auto xi = signs_from_mask(mask, 8);
      ASSERT_EQ(invert_rule(rule, apply_rule(rule, xi)), xi) << rule.name();
    }
  }
}

TEST(ApplyRule, PermutesEveryCube) {
  for (const auto& rule : sample_rules()) {
    for (unsigned n = 1; n <= 12; ++n) {
      std::vector<bool> hit(std::size_t{1} << n, false);
      for (std::uint64_t mask = 0; mask < hit.size(); ++mask) {
        const auto eta = apply_rule(rule, signs_from_mask(mask, n));
        const auto out = mask_from_signs(eta);
        ASSERT_FALSE(hit[out]) << rule.name() << " n=" << n;
        hit[out] = true;
      }
    }
  }
}

TEST(Rules, CursorMatchesClosedFamilies) {
  for (const auto& rule : sample_rules()) {
    for (unsigned step = 1; step <= 11; ++step) {
      const auto fam = rule.closed_family(step);
      if (!fam) continue;
      const auto tt = rule.truth_table(step - 1);
      EXPECT_EQ(truth_to_beta(tt).members(), fam->members()) << rule.name() << " step " << step;
    }
  }
}

TEST(Rules, StepOneFamilyFollowsPsi0) {
  EXPECT_EQ(builtin::identity().beta_family(1), BetaFamily(1));
  EXPECT_EQ(builtin::running_max().beta_family(1), BetaFamily(1, {IndexSet{}}));
}

TEST(Rules, LevyFamilyAtStepFour) {
  EXPECT_EQ(builtin::levy().beta_family(4), BetaFamily(4, {IndexSet{1, 2}, IndexSet{1, 3}, IndexSet{2, 3}}));
}

TEST(Rules, WindowMaxFamily) {
  EXPECT_EQ(builtin::window_max(2).beta_family(6), BetaFamily(6, {IndexSet{4, 5}}));
  EXPECT_EQ(builtin::window_max(4).beta_family(3), BetaFamily(3, {IndexSet{1, 2}}));
}

TEST(Rules, PredictableShape) {
  // eta_k = psi'_{k-2} xi_{k-1} xi_k with psi' = identity
  const auto r = builtin::predictable(builtin::identity());
  EXPECT_EQ(r.beta_family(5), BetaFamily(5, {IndexSet{4}}));
}

TEST(Rules, ModifiedLevyAgreesPointwise) {
  const auto levy = builtin::levy();
  const auto mod = builtin::modified_levy();
  const auto mx = builtin::running_max();
  for (unsigned n = 1; n <= 16; ++n) {
    const auto a = levy.truth_table(n);
    const auto b = mod.truth_table(n);
    const auto c = mx.truth_table(n);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      if (std::has_single_bit(n)) {
        ASSERT_EQ(b.value(m), a.value(m)) << "n=" << n;
      } else {
        ASSERT_EQ(b.value(m), a.value(m) * c.value(m)) << "n=" << n;
      }
    }
  }
}

TEST(Rules, ModifiedLevyMaxIsMaxTimesLevy) {
  const auto levy = builtin::levy();
  const auto mlm = builtin::modified_levy_max();
  for (unsigned n = 1; n <= 10; ++n)
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      const auto u = signs_from_mask(m, n);
      const Sign mx = (m == (std::uint64_t{1} << n) - 1) ? kMinus : kPlus;
      ASSERT_EQ(mlm.psi(u), levy.psi(std::span<const Sign>(u).first(n - 1)) * mx);
    }
}

TEST(Rules, SignFlipsDensity) {
  const auto r = builtin::sign_flips(0.25);
  unsigned flips = 0;
  for (unsigned step = 1; step <= 400; ++step) flips += r.beta_family(step).contains(IndexSet{}) ? 1 : 0;
  EXPECT_EQ(flips, 100u);
  EXPECT_EQ(builtin::sign_flips(0.0).psi0(), kPlus);
  EXPECT_EQ(builtin::sign_flips(1.0).psi0(), kMinus);
}

TEST(Rules, SymmetricSignIsLevy) {
  const auto sym = builtin::parse("symmetric:-1,0,1");
  const auto levy = builtin::levy();
  for (unsigned n = 0; n <= 9; ++n) EXPECT_EQ(sym.truth_table(n), levy.truth_table(n)) << n;
}

TEST(Rules, SymmetricConstantIsIdentity) {
  const auto sym = builtin::parse("symmetric:1");
  for (unsigned n = 0; n <= 6; ++n) EXPECT_EQ(sym.truth_table(n), builtin::identity().truth_table(n));
}

TEST(Rules, ThresholdRuleIsPermutationInvariant) {
  // f(z) = sgn(z - 1)
  const auto r = builtin::parse("symmetric:-1,1,1");
  for (unsigned n = 1; n <= 10; ++n) {
    const auto tt = r.truth_table(n);
    EXPECT_TRUE(tt.is_symmetric());
    const auto beta = truth_to_beta(tt);
    std::vector<int> level(n + 1, -1);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      auto& l = level[static_cast<std::size_t>(std::popcount(m))];
      const int in = beta.contains(IndexSet::from_mask(m)) ? 1 : 0;
      if (l < 0) l = in;
      ASSERT_EQ(l, in);
    }
  }
}

TEST(Builtins, ParseRoundTripsCatalogNames) {
  EXPECT_EQ(builtin::parse("window-max:3").name(), "window-max:3");
  EXPECT_EQ(builtin::parse("brw").beta_family(4), builtin::product().beta_family(4));
  EXPECT_EQ(builtin::parse("max").psi0(), kMinus);
  EXPECT_EQ(builtin::parse("extended-brw:prefix:0.5").beta_family(7), BetaFamily(7, {IndexSet{1}, IndexSet{2}, IndexSet{3}}));
  EXPECT_EQ(builtin::parse("disjoint:2:1").beta_family(9), BetaFamily(9, {IndexSet{1, 2}}));
  EXPECT_FALSE(builtin::catalog().empty());
}

TEST(Builtins, BadNamesThrow) {
  EXPECT_THROW(builtin::parse("nonsense"), std::invalid_argument);
  EXPECT_THROW(builtin::parse("window-max:0"), std::invalid_argument);
  EXPECT_THROW(builtin::parse("window-max:x"), std::invalid_argument);
  EXPECT_THROW(builtin::parse("extended-brw:prefix:1.5"), std::invalid_argument);
  EXPECT_THROW(builtin::parse("sign-flips:2"), std::invalid_argument);
}

TEST(SetSequences, Shapes) {
  const SetSequence prefix(SetSequence::Prefix{0.5});
  EXPECT_EQ(prefix.at(7), (IndexSet{1, 2, 3}));
  const SetSequence window(SetSequence::Window{3});
  EXPECT_EQ(window.at(6), (IndexSet{3, 4, 5}));
  EXPECT_EQ(window.at(2), (IndexSet{1}));
  const SetSequence fixed(SetSequence::Fixed{2});
  EXPECT_EQ(fixed.at(9), (IndexSet{1, 2}));
  EXPECT_EQ(fixed.at(2), (IndexSet{1}));
  const SetSequence log(SetSequence::PrefixLog{});
  EXPECT_EQ(log.at(20), (IndexSet{1, 2}));
  EXPECT_EQ(log.at(21), (IndexSet{1, 2, 3}));
  EXPECT_TRUE(prefix.nested());
  EXPECT_FALSE(window.nested());
}
