#include <gtest/gtest.h>

#include <bit>
#include <vector>

#include "gbrw/builtins.hpp"
#include "gbrw/ergodicity.hpp"

using namespace gbrw;

namespace {

std::uint64_t mask_of(std::initializer_list<Sign> u) { return mask_from_signs(std::vector<Sign>(u)); }

}  // namespace

TEST(Orbits, RunningMaxAtTwoIsOneCycle) {
  const auto rule = builtin::running_max();
  TauMap tau(rule, 2);
  // (-1,-1) -> (1,1) -> (-1,1) -> (1,-1) -> (-1,-1)
  EXPECT_EQ(tau(mask_of({kMinus, kMinus})), mask_of({kPlus, kPlus}));
  EXPECT_EQ(tau(mask_of({kPlus, kPlus})), mask_of({kMinus, kPlus}));
  EXPECT_EQ(tau(mask_of({kMinus, kPlus})), mask_of({kPlus, kMinus}));
  EXPECT_EQ(tau(mask_of({kPlus, kMinus})), mask_of({kMinus, kMinus}));
  const auto d = orbit_decompose(rule, 2);
  EXPECT_TRUE(d.single_orbit);
  EXPECT_EQ(d.cycles, (std::vector<std::uint64_t>{4}));
}

TEST(Orbits, IdentityHasFixedPoints) {
  const auto d = orbit_decompose(builtin::identity(), 2);
  EXPECT_EQ(d.cycles, (std::vector<std::uint64_t>{1, 1, 1, 1}));
  EXPECT_FALSE(d.single_orbit);
}

TEST(Orbits, ProductAtOneHasFixedPoints) {
  const auto d = orbit_decompose(builtin::product(), 1);
  EXPECT_EQ(d.cycles, (std::vector<std::uint64_t>{1, 1}));
}

TEST(Orbits, ModifiedLevyIsSingleOrbit) {
  for (unsigned n = 1; n <= 14; ++n) EXPECT_TRUE(orbit_decompose(builtin::modified_levy(), n).single_orbit) << n;
}

TEST(Orbits, CycleLengthsSumToStateCount) {
  for (const auto& rule : {builtin::levy(), builtin::window_max(2), builtin::predictable(builtin::levy(), kMinus)}) {
    for (unsigned n = 1; n <= 10; ++n) {
      std::uint64_t total = 0;
      for (auto c : orbit_decompose(rule, n).cycles) total += c;
      EXPECT_EQ(total, std::uint64_t{1} << n);
      EXPECT_TRUE(tau_is_bijection(rule, n));
    }
  }
}

TEST(Criterion, ProductExamples) {
  EXPECT_EQ(criterion_product(builtin::modified_levy(), 2), kMinus);
  EXPECT_EQ(criterion_product(builtin::levy(), 3), kPlus);
  EXPECT_EQ(criterion_product(builtin::product(), 2), kPlus);
}

TEST(Criterion, BetaExamples) {
  for (unsigned n = 1; n <= 12; ++n) {
    EXPECT_EQ(criterion_beta(builtin::running_max(), n), 1);
    EXPECT_EQ(criterion_beta(builtin::modified_levy_max(), n), 1);
    EXPECT_EQ(criterion_beta(builtin::modified_levy(), n), 1);
  }
  EXPECT_EQ(criterion_beta(builtin::levy(), 3), 0);
}

TEST(Criterion, BetaAndProductAgree) {
  for (const auto& rule : {builtin::levy(), builtin::window_max(3), builtin::product(), builtin::modified_levy(),
                           builtin::parse("symmetric:-1,1,1")}) {
    for (unsigned n = 1; n <= 12; ++n)
      EXPECT_EQ(criterion_beta(rule, n) == 1, criterion_product(rule, n) == kMinus) << rule.name() << " n=" << n;
  }
}

TEST(Ergodicity, LevyFailsAtThree) {
  const auto v = is_ergodic_up_to(builtin::levy(), 8);
  EXPECT_FALSE(v.ergodic_so_far);
  ASSERT_TRUE(v.first_failure);
  EXPECT_EQ(*v.first_failure, 3u);
}

TEST(Ergodicity, ModifiedLevyUpToSixteen) {
  const auto v = is_ergodic_up_to(builtin::modified_levy(), 16);
  EXPECT_TRUE(v.ergodic_so_far);
  EXPECT_EQ(v.checked_up_to, 16u);
  EXPECT_TRUE(v.closed_form);
}

TEST(Ergodicity, IdentityFailsAtZero) {
  const auto v = is_ergodic_up_to(builtin::identity(), 5);
  ASSERT_TRUE(v.first_failure);
  EXPECT_EQ(*v.first_failure, 0u);
}

TEST(Ergodicity, ProductPathAgrees) {
  for (const auto& rule : {builtin::levy(), builtin::modified_levy(), builtin::window_max(2)}) {
    const auto a = is_ergodic_up_to(rule, 12, false);
    const auto b = is_ergodic_up_to(rule, 12, true);
    EXPECT_EQ(a.first_failure, b.first_failure) << rule.name();
  }
}

TEST(Ergodicity, CriterionMatchesOrbits) {
  for (const auto& rule : {builtin::levy(), builtin::modified_levy(), builtin::running_max(), builtin::window_max(2),
                           builtin::window_max(3), builtin::modified_levy_max(), builtin::predictable(builtin::levy(), kMinus)}) {
    for (unsigned n = 1; n <= 10; ++n) {
      bool all_single = true;
      for (unsigned m = 1; m <= n; ++m) all_single = all_single && orbit_decompose(rule, m).single_orbit;
      EXPECT_EQ(is_ergodic_up_to(rule, n - 1).ergodic_so_far, all_single) << rule.name() << " n=" << n;
    }
  }
}

TEST(BetaArray, SmallRows) {
  const auto a = sgn_beta_array(5);
  EXPECT_EQ(a.rows[2], (std::vector<std::uint8_t>{0, 1, 1}));
  EXPECT_EQ(a.rows[3], (std::vector<std::uint8_t>{0, 0, 1, 0}));
  EXPECT_EQ(a.rows[5][2], 0);
}

TEST(BetaArray, MatchesEnumeratedSgn) {
  const auto a = sgn_beta_array(14);
  for (unsigned n = 1; n <= 14; ++n) {
    const auto tt = beta_to_truth(a.family(n));
    EXPECT_EQ(tt, builtin::levy().truth_table(n)) << n;
  }
}

TEST(BetaArray, ZeroRegion) {
  const auto a = sgn_beta_array(200);
  for (unsigned n = 1; n <= 200; ++n)
    for (unsigned k = 0; 2 * k + 1 <= n; ++k) ASSERT_EQ(a.rows[n][k], 0) << n << "," << k;
}

TEST(BetaArray, FullSetCoefficientIsPowerOfTwoIndicator) {
  // beta_{n+1,{1..n}} = 1 for sgn exactly when the criterion product is -1
  const auto a = sgn_beta_array(64);
  for (unsigned n = 1; n <= 12; ++n)
    EXPECT_EQ(a.rows[n][n], criterion_beta(builtin::levy(), n)) << n;
}

TEST(BinomialParity, Examples) {
  EXPECT_EQ(binomial_parity(7, 3), 1);
  EXPECT_EQ(binomial_parity(5, 2), 0);
  for (std::uint64_t n = 0; n < 50; ++n) EXPECT_EQ(binomial_parity(n, 0), 1);
  EXPECT_EQ(binomial_parity(2, 3), 0);
}

TEST(BinomialParity, CentralCoefficientOddAtPowersOfTwo) {
  for (std::uint64_t n = 1; n <= 4096; ++n)
    ASSERT_EQ(binomial_parity(2 * n - 1, n - 1) == 1, std::has_single_bit(n)) << n;
}

TEST(Repair, LevyBecomesErgodic) {
  const auto levy = builtin::levy();
  const auto fixed = ergodic_repair(levy, 14);
  EXPECT_TRUE(is_ergodic_up_to(fixed, 14).ergodic_so_far);
  // flipping the full-set coefficient multiplies psi_n by max(u_1..u_n), which is modified-levy
  const auto mod = builtin::modified_levy();
  for (unsigned n = 1; n <= 12; ++n) EXPECT_EQ(fixed.truth_table(n), mod.truth_table(n)) << n;
}

TEST(Repair, ErgodicRuleIsUnchanged) {
  const auto rule = builtin::modified_levy();
  const auto same = ergodic_repair(rule, 12);
  EXPECT_EQ(same.name(), rule.name());
  for (unsigned n = 0; n <= 10; ++n) EXPECT_EQ(same.truth_table(n), rule.truth_table(n));
}

TEST(Repair, IdentityBecomesRunningMax) {
  const auto fixed = ergodic_repair(builtin::identity(), 10);
  EXPECT_EQ(fixed.psi0(), kMinus);
  for (unsigned n = 1; n <= 10; ++n) EXPECT_EQ(fixed.truth_table(n), builtin::running_max().truth_table(n));
  EXPECT_TRUE(is_ergodic_up_to(fixed, 10).ergodic_so_far);
}
