#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cubic/heights.hpp"

using namespace cubic;

static const CubicForm kFermat = CubicForm::parse("x0^3+x1^3+x2^3");
static const CubicForm k37({-1, 0, 0, 0, 0, 1, 0, 1, 1, 0});
static const CubicForm k389({-1, 0, -1, 0, 0, 2, 0, 1, 1, 0});
static const double kTol = 1e-8;

TEST_CASE("canonical height of the 37a generator") {
  GroupContext ctx(k37, PlanePoint(0, 1, 0));
  double h = canonical_height(ctx, PlanePoint(0, 0, 1), kTol);
  CHECK(h == doctest::Approx(0.0511114082).epsilon(1e-6));
  CHECK(canonical_height(ctx, ctx.base(), kTol) == 0.0);
}

TEST_CASE("quadraticity under scalar multiples") {
  GroupContext ctx(k37, PlanePoint(0, 1, 0));
  HeightMachine hm(ctx);
  PlanePoint g(0, 0, 1);
  double h = hm.canonical_height(g, kTol / 25);
  for (long n : {2L, 3L, 5L}) {
    double hn = hm.canonical_height(ctx.smul(n, g), kTol / 25);
    CHECK(std::fabs(hn - n * n * h) < 1e-6);
  }
}

TEST_CASE("torsion has height below tolerance") {
  GroupContext ctx(kFermat, PlanePoint(0, 1, -1));
  HeightMachine hm(ctx);
  for (const auto& t : enumerate_points(kFermat, 2)) {
    CHECK(hm.canonical_height(t, kTol) < kTol);
    // exact torsion: order divides 3 here
    CHECK(ctx.smul(3, t) == ctx.base());
  }
}

TEST_CASE("parallelogram law") {
  GroupContext ctx(k37, PlanePoint(0, 1, 0));
  HeightMachine hm(ctx);
  PlanePoint p(0, 0, 1), q = ctx.smul(2, p);
  double lhs =
      hm.canonical_height(ctx.add(p, q), kTol) + hm.canonical_height(ctx.sub(p, q), kTol);
  double rhs = 2 * hm.canonical_height(p, kTol) + 2 * hm.canonical_height(q, kTol);
  CHECK(std::fabs(lhs - rhs) < 6e-8);
}

TEST_CASE("pairing bilinearity and gram matrices") {
  GroupContext ctx(k389, PlanePoint(0, 1, 0));
  HeightMachine hm(ctx);
  PlanePoint g1(0, 0, 1), g2(1, 0, 1);
  auto g = hm.gram({g1, g2}, kTol);
  CHECK(g[0][1] == doctest::Approx(g[1][0]).epsilon(1e-9));
  double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  CHECK(det == doctest::Approx(0.15246).epsilon(1e-3));
  // dependent pair is singular
  GroupContext c37ctx(k37, PlanePoint(0, 1, 0));
  HeightMachine hm37(c37ctx);
  PlanePoint p(0, 0, 1);
  auto s = hm37.gram({p, c37ctx.smul(2, p)}, kTol);
  CHECK(std::fabs(s[0][0] * s[1][1] - s[0][1] * s[1][0]) < 1e-6);
  // pairing(p, 2p) = 2 h(p)
  CHECK(hm37.pairing(p, c37ctx.smul(2, p), kTol) ==
        doctest::Approx(2 * hm37.canonical_height(p, kTol)).epsilon(1e-5));
}

TEST_CASE("height report is consistent") {
  GroupContext ctx(k37, PlanePoint(0, 1, 0));
  auto rep = height_report(ctx, ctx.smul(3, PlanePoint(0, 0, 1)), kTol);
  CHECK(rep.h_hat == doctest::Approx(9 * 0.0511114).epsilon(1e-4));
  CHECK(rep.h_naive >= 0);
  CHECK(rep.h_x >= 0);
  CHECK(rep.tol == kTol);
}

TEST_CASE("crude height audit") {
  GroupContext ctx(k37, PlanePoint(0, 1, 0));
  PlanePoint p(0, 0, 1);
  std::vector<XRPair> pairs{{p, p, p, 1}};
  CHECK(crude_height_audit(ctx, pairs, 100) <= 1.0);
  CHECK_THROWS(crude_height_audit(ctx, {}, 100));
  // pair failing the defining identity is rejected
  std::vector<XRPair> bad{{p, ctx.smul(2, p), p, 1}};
  CHECK_THROWS(crude_height_audit(ctx, bad, 100));
}

TEST_CASE("invalid tolerance is rejected") {
  GroupContext ctx(k37, PlanePoint(0, 1, 0));
  CHECK_THROWS(canonical_height(ctx, PlanePoint(0, 0, 1), 0.0));
  CHECK_THROWS(canonical_height(ctx, PlanePoint(0, 0, 1), -1.0));
}
