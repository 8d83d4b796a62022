#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubic/points.hpp"

using namespace cubic;

static const CubicForm kFermat = CubicForm::parse("x0^3+x1^3+x2^3");
static const CubicForm k37({-1, 0, 0, 0, 0, 1, 0, 1, 1, 0});
static const CubicForm k389({-1, 0, -1, 0, 0, 2, 0, 1, 1, 0});

TEST_CASE("plane point normalization") {
  CHECK(PlanePoint(2, 4, 6) == PlanePoint(1, 2, 3));
  CHECK(PlanePoint(-1, -2, -3) == PlanePoint(1, 2, 3));
  CHECK(PlanePoint(0, -5, 10) == PlanePoint(0, 1, -2));
  CHECK(PlanePoint(0, 0, 7).to_string() == "[0,0,1]");
  CHECK(PlanePoint(3, -6, 0).height() == 2);
}

TEST_CASE("sieve equals brute-force oracle") {
  for (const CubicForm* f : {&kFermat, &k37, &k389})
    for (long b : {1L, 5L, 17L, 30L})
      CHECK(enumerate_points(*f, b) == enumerate_points_bruteforce(*f, b));
}

TEST_CASE("fermat has exactly three points at every height") {
  std::vector<PlanePoint> expect{PlanePoint(0, 1, -1), PlanePoint(1, -1, 0),
                                 PlanePoint(1, 0, -1)};
  std::sort(expect.begin(), expect.end());
  for (long b : {1L, 10L, 100L, 1000L}) CHECK(enumerate_points(kFermat, b) == expect);
}

TEST_CASE("output is lexicographically sorted and on the curve") {
  auto pts = enumerate_points(k389, 40);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  for (const auto& p : pts) {
    CHECK(k389.eval(p.x0, p.x1, p.x2) == 0);
    CHECK(p.height() <= 40);
  }
}

TEST_CASE("count table is monotone") {
  auto tab = count_table(k37, {1, 10, 100, 1000});
  for (std::size_t i = 1; i < tab.size(); ++i) CHECK(tab[i].N >= tab[i - 1].N);
  CHECK(tab[1].N == 11);
  CHECK(tab[2].N == 15);
  CHECK(tab[3].N == 19);
}

TEST_CASE("coefficient-size diagnostic") {
  auto rep = trenta_diagnostic(k37, 100);
  CHECK(rep.N == 15);
  CHECK(rep.ratio_emitted);
  CHECK(rep.ratio >= 0);
  auto small = trenta_diagnostic(kFermat, 100);
  CHECK(!small.ratio_emitted);  // only three points
}
