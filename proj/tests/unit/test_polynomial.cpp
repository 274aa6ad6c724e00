#include <gtest/gtest.h>

#include "cartanrep/polynomial.hpp"

using namespace cartanrep;

TEST(Polynomial, Arithmetic) {
  const auto one = poly_one(2);
  const auto y1 = poly_monomial({1, 0});
  const auto y2 = poly_monomial({0, 1});
  const auto a = poly_add(one, y1);
  const auto b = poly_add(one, y2);
  const auto ab = poly_mul(a, b);
  EXPECT_EQ(ab.size(), 4u);
  EXPECT_EQ(poly_exact_div(ab, a), b);
  const auto sq = poly_pow(a, 3, 2);
  EXPECT_EQ(sq.at(IntVec{2, 0}), 3);
  EXPECT_EQ(sq.at(IntVec{3, 0}), 1);
  EXPECT_EQ(poly_pow(a, 0, 2), one);
  EXPECT_THROW(poly_exact_div(one, a), std::exception);
  EXPECT_EQ(poly_str(poly_add(one, poly_mul(y1, y2))), "1 + 1*Y1*Y2");
}
