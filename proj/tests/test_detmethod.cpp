#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubic/detmethod.hpp"

using namespace cubic;

static const CubicForm k37({-1, 0, 0, 0, 0, 1, 0, 1, 1, 0});

static GroupContext make_ctx() { return GroupContext(k37, PlanePoint(0, 1, 0)); }
static MordellWeilBasis make_basis(const GroupContext& ctx) {
  return MordellWeilBasis::from_points(ctx, {PlanePoint(0, 0, 1)}, {}, 1e-8, true);
}

TEST_CASE("dimension formula and admissibility") {
  CHECK(dimension_formula(1, 1, 1) == 6);
  CHECK(dimension_formula(2, 1, 1) == 9);
  CHECK(dimension_formula(1, 2, 1) == 9);
  CHECK(dimension_formula(3, 3, 1) == 18);
  CHECK(dimension_formula(1, 4, 2) == 24);
  CHECK(dimension_formula(2, 4, 2) == 36);
  CHECK(dimension_formula(1, 9, 3) == 54);
  CHECK_THROWS_AS(dimension_formula(1, 1, 2), detmethod_error);  // 1 + 4 >= 3
  CHECK_THROWS_AS(dimension_formula(0, 1, 1), detmethod_error);
}

TEST_CASE("bimonomial order and evaluation") {
  auto mons = all_bimonomials(1, 1);
  CHECK(mons.size() == 9);
  CHECK(mons[0].e == std::array<int, 3>{1, 0, 0});
  CHECK(mons[0].f == std::array<int, 3>{1, 0, 0});
  PlanePoint p(2, 3, 5), q(1, -1, 4);
  CHECK(eval_bimonomial(mons[0], p, q) == 2);
  CHECK(eval_bimonomial(mons.back(), p, q) == 20);  // x2*y2
  FpPoint fp{1, 3, 2}, fq{1, 0, 4};
  CHECK(eval_bimonomial_mod(mons[4], fp, fq, 7) == 0);  // x1*y1
  CHECK(eval_bimonomial_mod(mons.back(), fp, fq, 7) == 1);
}

TEST_CASE("monomial basis cardinality matches the dimension formula") {
  auto ctx = make_ctx();
  PlanePoint g(0, 0, 1);
  struct Row { long m; int a, b; std::size_t e; };
  for (auto [m, a, b, e] : {Row{1, 1, 1, 6}, Row{1, 2, 1, 9}, Row{2, 1, 4, 24}}) {
    auto mb = monomial_basis(ctx, g, m, a, b);
    CHECK(mb.E() == e);
  }
}

TEST_CASE("residue samples respect the descent identity mod q") {
  auto ctx = make_ctx();
  PlanePoint g(0, 0, 1);
  FpCurve fp(k37, 499, ctx.base());
  auto samples = xr_samples_mod_q(ctx, g, 2, 499, 30);
  CHECK(samples.size() == 30);
  FpPoint rbar = fp.reduce(g);
  for (const auto& [pp, qq] : samples)
    CHECK(pp == fp.add(fp.smul(2, qq), fp.neg(rbar)));
}

TEST_CASE("valuation of the bucket determinant") {
  auto ctx = make_ctx();
  PlanePoint g(0, 0, 1);
  auto mb = monomial_basis(ctx, g, 1, 1, 1);
  for (long p : {5L, 7L, 11L}) {
    auto fam = bucket_family(ctx, g, g, 1, Int(p), 6);
    auto buckets = residue_buckets(ctx, fam, Int(p));
    REQUIRE(buckets.size() == 1);
    auto em = build_matrix(buckets[0], mb);
    auto mv = minor_valuation(em.entries, Int(p));
    CHECK((mv.zero || mv.valuation >= 15));
  }
}

TEST_CASE("implicit lift certifies high defect valuations") {
  auto ctx = make_ctx();
  PlanePoint g(0, 0, 1);
  auto fam = bucket_family(ctx, g, g, 1, Int(7), 20);
  FpCurve fp(k37, 7, ctx.base());
  auto hp = hensel_implicit(k37, fp.reduce(g), 7, 6);
  for (const auto& pr : fam) CHECK(hp.defect_valuation(pr.Q) >= 6);
  // order-1 lift is the constant residue
  auto h1 = hensel_implicit(k37, fp.reduce(g), 7, 1);
  CHECK(h1.c.size() == 1);
  CHECK(hp.c[0] % 7 == h1.c[0]);
}

TEST_CASE("partials unit index") {
  FpCurve fp(k37, 5, PlanePoint(0, 1, 0));
  for (const auto& pt : fp.points()) {
    if (pt.x0 % 5 == 0) continue;
    int i = partials_unit(k37, pt, 5);
    CHECK((i == 1 || i == 2));
    CHECK(k37.eval_partial(i, Int(pt.x0), Int(pt.x1), Int(pt.x2)) % 5 != 0);
  }
}

TEST_CASE("prime selection stays in the window") {
  auto pc = choose_prime(100, 1, 1, 6, 1.0, 30.0, k37);
  CHECK(pc.p > Int(static_cast<long>(pc.threshold)));
  CHECK(k37.is_good_prime(pc.p));
  CHECK_THROWS_AS(choose_prime(100, 1, 1, 2, 1.0, 30.0, k37), detmethod_error);
}

TEST_CASE("class bound pipeline with verified auxiliary forms") {
  auto ctx = make_ctx();
  auto basis = make_basis(ctx);
  auto pts = enumerate_points(k37, 50);
  auto classes = partition(ctx, basis, pts, 1);
  REQUIRE(classes.size() == 1);
  auto rep = class_bound(ctx, basis, classes[0], classes[0].representative, 1, 1, 1, 50);
  CHECK(rep.ok);
  CHECK(rep.E == 6);
  auto mb = monomial_basis(ctx, classes[0].representative, 1, 1, 1);
  auto pairs = xr_pairs_for_class(ctx, basis, classes[0], classes[0].representative, 1, 50);
  for (const auto& bucket : residue_buckets(ctx, pairs, rep.p)) {
    CHECK(bucket.pairs.size() <= 6);
    auto g = auxiliary_form(build_matrix(bucket, mb), mb);
    bool nonzero = false;
    for (const auto& c : g.coeffs) nonzero = nonzero || c != 0;
    CHECK(nonzero);
    for (const auto& pr : bucket.pairs) CHECK(eval_auxiliary(g, pr.P, pr.Q) == 0);
    // independent nonvanishing witness among residue samples
    auto samples = xr_samples_mod_q(ctx, classes[0].representative, 1, 499, 50);
    bool witness = false;
    for (const auto& [sp, sq] : samples)
      witness = witness || eval_auxiliary_mod(g, sp, sq, 499) != 0;
    CHECK(witness);
  }
}

TEST_CASE("archimedean comparison") {
  IntMat small{{1, 2, 0}, {0, 1, 1}, {1, 0, 1}};
  CHECK(archimedean_bound(small, 100, 1, 1, 1.0));
  // a wildly oversized determinant fails the bound at tiny B
  IntMat big(3, std::vector<Int>(3, Int(0)));
  Int huge("1000000000000000000000000000000000000000000000");
  big[0][0] = huge;
  big[1][1] = huge;
  big[2][2] = huge;
  CHECK(!archimedean_bound(big, 3, 1, 1, 1.0));
}

TEST_CASE("forced small prime breaks the auxiliary construction") {
  auto ctx = make_ctx();
  PlanePoint g(0, 0, 1);
  auto mb = monomial_basis(ctx, g, 1, 1, 1);
  auto fam = bucket_family(ctx, g, g, 1, Int(5), 8);
  auto buckets = residue_buckets(ctx, fam, Int(5));
  REQUIRE(buckets.size() == 1);
  auto em = build_matrix(buckets[0], mb);
  CHECK_THROWS_AS(auxiliary_form(em, mb), detmethod_error);
  // the valuation theorem still holds: 5 is a good prime
  IntMat minor(em.entries.begin(), em.entries.begin() + 6);
  auto mv = minor_valuation(minor, Int(5));
  CHECK((mv.zero || mv.valuation >= 15));
}
