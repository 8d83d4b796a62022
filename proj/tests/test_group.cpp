#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubic/fp.hpp"
#include "cubic/jacobian.hpp"

using namespace cubic;

static const CubicForm kFermat = CubicForm::parse("x0^3+x1^3+x2^3");
static const CubicForm k37({-1, 0, 0, 0, 0, 1, 0, 1, 1, 0});
static const CubicForm k389({-1, 0, -1, 0, 0, 2, 0, 1, 1, 0});

static Rat j_invariant(const WeierstrassModel& m) {
  Rat num = 4 * m.alpha * m.alpha * m.alpha;
  Rat den = num + 27 * m.beta * m.beta;
  return Rat(1728) * num / den;
}

TEST_CASE("third intersection is symmetric and stays on the curve") {
  PlanePoint a(0, 1, 0), b(0, 0, 1);
  PlanePoint w = third_intersection(k37, a, b);
  CHECK(k37.eval(w.x0, w.x1, w.x2) == 0);
  CHECK(w == third_intersection(k37, b, a));
  // tangent case: a == b
  PlanePoint t = third_intersection(k37, b, b);
  CHECK(k37.eval(t.x0, t.x1, t.x2) == 0);
}

TEST_CASE("group axioms on enumerated points") {
  GroupContext ctx(k37, PlanePoint(0, 1, 0));
  auto pts = enumerate_points(k37, 10);
  for (const auto& p : pts) {
    CHECK(ctx.add(p, ctx.base()) == p);
    CHECK(ctx.add(p, ctx.neg(p)) == ctx.base());
    for (const auto& q : pts) {
      PlanePoint s = ctx.add(p, q);
      CHECK(ctx.on_curve(s));
      CHECK(s == ctx.add(q, p));
    }
  }
  // associativity on a sample
  PlanePoint g(0, 0, 1);
  for (const auto& p : pts)
    for (const auto& q : pts)
      CHECK(ctx.add(ctx.add(p, q), g) == ctx.add(p, ctx.add(q, g)));
}

TEST_CASE("j-invariants match the curve, not the base point") {
  // flex base
  GroupContext flex37(k37, PlanePoint(0, 1, 0));
  CHECK(j_invariant(flex37.model()) == Rat(110592, 37));
  // non-flex base: same j through the slope-substitution path
  GroupContext aff37(k37, PlanePoint(0, 0, 1));
  CHECK(j_invariant(aff37.model()) == Rat(110592, 37));
  GroupContext flex389(k389, PlanePoint(0, 1, 0));
  CHECK(j_invariant(flex389.model()) == Rat(1404928, 389));
  GroupContext aff389(k389, PlanePoint(0, 0, 1));
  CHECK(j_invariant(aff389.model()) == Rat(1404928, 389));
  GroupContext fer(kFermat, PlanePoint(0, 1, -1));
  CHECK(j_invariant(fer.model()) == 0);
}

TEST_CASE("weierstrass map is a group isomorphism") {
  GroupContext ctx(k37, PlanePoint(0, 1, 0));
  const auto& m = ctx.model();
  PlanePoint g(0, 0, 1);
  CHECK(ctx.to_ec(ctx.base()) == ECPoint::infinity());
  for (long n = -4; n <= 4; ++n) {
    PlanePoint p = ctx.smul(n, g);
    ECPoint e = ctx.to_ec(p);
    CHECK(m.ec_on_curve(e));
    CHECK(ctx.from_ec(e) == p);
    CHECK(e == m.ec_smul(n, ctx.to_ec(g)));
  }
  for (long n = 0; n <= 3; ++n) {
    PlanePoint p = ctx.smul(n, g), q = ctx.smul(n + 2, g);
    CHECK(ctx.to_ec(ctx.add(p, q)) == m.ec_add(ctx.to_ec(p), ctx.to_ec(q)));
    CHECK(ctx.to_ec(ctx.neg(p)) == m.ec_neg(ctx.to_ec(p)));
  }
}

TEST_CASE("non-flex base still yields a consistent group") {
  GroupContext ctx(k389, PlanePoint(1, 0, 1));
  PlanePoint g(0, 0, 1);
  CHECK(ctx.add(ctx.smul(3, g), ctx.smul(-3, g)) == ctx.base());
  CHECK(ctx.sub(ctx.smul(5, g), ctx.smul(2, g)) == ctx.smul(3, g));
}

TEST_CASE("reduction mod a good prime is a homomorphism") {
  GroupContext ctx(k37, PlanePoint(0, 1, 0));
  FpCurve fp(k37, 5, ctx.base());
  CHECK(fp.points().size() == 8);  // a_5 = -2
  auto pts = enumerate_points(k37, 10);
  for (const auto& p : pts)
    for (const auto& q : pts)
      CHECK(fp.reduce(ctx.add(p, q)) == fp.add(fp.reduce(p), fp.reduce(q)));
}

TEST_CASE("orders over F_p divide the group size") {
  FpCurve fp(k37, 7, PlanePoint(0, 1, 0));
  std::size_t n = fp.points().size();
  for (const auto& a : fp.points()) {
    unsigned long ord = fp.order_of(a);
    CHECK(n % ord == 0);
    CHECK(fp.smul(static_cast<long>(ord), a) == fp.base());
  }
}

TEST_CASE("bad primes are rejected for reduction") {
  CHECK_THROWS(FpCurve(k37, 3, PlanePoint(0, 1, 0)));
  CHECK_THROWS(FpCurve(k37, 37, PlanePoint(0, 1, 0)));
}
