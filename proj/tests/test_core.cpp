#include <gtest/gtest.h>

#include <vector>

#include "gbrw/core.hpp"
#include "gbrw/dyadic.hpp"
#include "gbrw/index_set.hpp"

using namespace gbrw;

TEST(IndexSet, BasicOperations) {
  IndexSet a{1, 3, 70};
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(a.contains(70));
  EXPECT_FALSE(a.contains(2));
  EXPECT_EQ(a.members(), (std::vector<std::uint32_t>{1, 3, 70}));
  EXPECT_EQ(IndexSet::interval(2, 4), (IndexSet{2, 3, 4}));
  EXPECT_TRUE(IndexSet::interval(3, 2).empty());
  EXPECT_EQ(IndexSet::from_mask(0b101), (IndexSet{1, 3}));
  EXPECT_TRUE((IndexSet{1, 3}).is_subset_of(a));
  EXPECT_EQ(a.intersection_size(IndexSet{3, 4, 70}), 2u);
  EXPECT_EQ(a.union_size(IndexSet{3, 4, 70}), 4u);
  EXPECT_EQ(IndexSet{}.to_string(), "{}");
}

TEST(IndexSet, OrderingIsStrict) {
  EXPECT_NE(IndexSet{1}, (IndexSet{1, 2}));
  EXPECT_TRUE((IndexSet{1} < IndexSet{1, 2}) != (IndexSet{1, 2} < IndexSet{1}));
  EXPECT_EQ(IndexSetHash{}(IndexSet{4, 9}), IndexSetHash{}(IndexSet{9, 4}));
}

TEST(MaxOfSet, EmptySetIsMinusOne) {
  const std::vector<Sign> u{kPlus, kMinus};
  EXPECT_EQ(max_of_set(u, IndexSet{}), kMinus);
}

TEST(MaxOfSet, AllMinus) {
  const std::vector<Sign> u{kMinus, kMinus, kMinus};
  EXPECT_EQ(max_of_set(u, IndexSet{1, 2, 3}), kMinus);
}

TEST(MaxOfSet, AnyPlusWins) {
  const std::vector<Sign> u{kMinus, kPlus};
  EXPECT_EQ(max_of_set(u, IndexSet{1, 2}), kPlus);
}

TEST(MaxOfSet, IndexBeyondInputThrows) {
  const std::vector<Sign> u{kMinus, kPlus};
  EXPECT_ANY_THROW((void)max_of_set(u, IndexSet{3}));
}

TEST(Signs, MaskConvention) {
  // bit k-1 set means u_k = -1
  const auto u = signs_from_mask(0b10, 3);
  EXPECT_EQ(u, (std::vector<Sign>{kPlus, kMinus, kPlus}));
  EXPECT_EQ(mask_from_signs(u), 0b10u);
  EXPECT_THROW(checked_sign(0), std::invalid_argument);
}

TEST(Dyadic, ArithmeticIsExact) {
  const DyadicRational half(1, 1);
  const DyadicRational quarter(1, 2);
  EXPECT_EQ(half * half, quarter);
  EXPECT_EQ(half - quarter, quarter);
  EXPECT_EQ(DyadicRational(6, 3), DyadicRational(3, 2));
  EXPECT_EQ(DyadicRational(1) - DyadicRational(1, 2), DyadicRational(3, 2));
  EXPECT_LT(-half, quarter);
  EXPECT_DOUBLE_EQ(DyadicRational(3, 4).to_double(), 0.1875);
  EXPECT_TRUE((half - half).is_zero());
}

TEST(Dyadic, DeepExponentsStayExact) {
  DyadicRational x(1, 900);
  DyadicRational y = x + x;
  EXPECT_EQ(y, DyadicRational(1, 899));
  EXPECT_EQ((y - x), x);
}

TEST(Capacity, ErrorNamesParameter) {
  try {
    check_capacity("truth table arity", 30, 24);
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("truth table arity"), std::string::npos);
  }
}
