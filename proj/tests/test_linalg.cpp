#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubic/forms.hpp"
#include "cubic/linalg.hpp"

using namespace cubic;

TEST_CASE("bareiss determinant") {
  CHECK(bareiss_det({{2}}) == 2);
  CHECK(bareiss_det({{1, 2}, {3, 4}}) == -2);
  CHECK(bareiss_det({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}) == 0);
  // 4x4 with a known cofactor expansion value
  IntMat m{{2, 0, 1, 3}, {1, 1, 0, 2}, {0, 3, 1, 1}, {5, 2, 0, 1}};
  Int d = bareiss_det(m);
  // transpose invariance
  IntMat t(4, std::vector<Int>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[i][j] = m[j][i];
  CHECK(bareiss_det(t) == d);
}

TEST_CASE("rank and kernel") {
  IntMat m{{1, 2, 3}, {2, 4, 6}};
  CHECK(int_rank(m) == 1);
  auto k = integer_kernel_vector(m);
  REQUIRE(k.size() == 3);
  CHECK(m[0][0] * k[0] + m[0][1] * k[1] + m[0][2] * k[2] == 0);
  // primitive: gcd of entries is 1
  Int g = gcd(gcd(k[0], k[1]), k[2]);
  CHECK(abs(g) == 1);
  // full column rank -> empty kernel
  CHECK(integer_kernel_vector({{1, 0}, {0, 1}, {1, 1}}).empty());
}

TEST_CASE("rational solve") {
  RatMat a{{Rat(2), Rat(1)}, {Rat(1), Rat(3)}};
  auto x = solve_rational(a, {Rat(5), Rat(10)});
  CHECK(x[0] == Rat(1));
  CHECK(x[1] == Rat(3));
  CHECK_THROWS(solve_rational({{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}, {Rat(1), Rat(1)}));
}

TEST_CASE("p-adic valuation") {
  CHECK(padic_valuation(Int(250), Int(5)) == 3);
  CHECK(padic_valuation(Int(-8), Int(2)) == 3);
  CHECK(padic_valuation(Int(7), Int(5)) == 0);
}
