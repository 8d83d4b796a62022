#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cubic/io.hpp"
#include "cubic/pipeline.hpp"

using namespace cubic;

static const std::string kData = CUBIC_TEST_DATA_DIR;

TEST_CASE("curve spec files") {
  auto fermat = load_curve_spec(kData + "/fermat.curve");
  CHECK(fermat.name == "fermat");
  CHECK(fermat.f == CubicForm::parse("x0^3+x1^3+x2^3"));
  REQUIRE(fermat.base.has_value());
  CHECK(*fermat.base == PlanePoint(0, 1, -1));
  CHECK(fermat.basis_ref == "fermat.basis");

  auto c37 = load_curve_spec(kData + "/c37.curve");
  CHECK(c37.f.discriminant() == -999);

  CHECK_THROWS_AS(load_curve_spec(kData + "/missing.curve"), io_error);
}

TEST_CASE("curve spec validation") {
  write_file("/tmp/bad1.curve", "name t\ncoeffs 1 2 3\n");
  CHECK_THROWS_AS(load_curve_spec("/tmp/bad1.curve"), io_error);
  write_file("/tmp/bad2.curve", "name t\npoly x0^3+x1^3+x2^3\nbase 1 1 1\n");
  CHECK_THROWS_AS(load_curve_spec("/tmp/bad2.curve"), io_error);  // base off-curve
  write_file("/tmp/bad3.curve", "name t\npoly x0^3\n");
  CHECK_THROWS_AS(load_curve_spec("/tmp/bad3.curve"), io_error);  // singular
  write_file("/tmp/bad4.curve", "frobnicate 1\n");
  CHECK_THROWS_AS(load_curve_spec("/tmp/bad4.curve"), io_error);  // unknown tag
}

TEST_CASE("csv formats are deterministic") {
  auto fermat = load_curve_spec(kData + "/fermat.curve");
  auto tab = count_table(fermat.f, {1, 10, 100});
  CHECK(format_count_csv(tab) == "B,N\n1,3\n10,3\n100,3\n");
  CHECK(format_count_csv(tab) == format_count_csv(tab));

  GroupContext ctx(fermat.f, *fermat.base);
  auto rep = height_report(ctx, PlanePoint(1, -1, 0), 1e-8);
  auto csv = format_height_csv(rep);
  CHECK(csv.substr(0, 22) == "h_naive,h_x,h_hat,tol\n");
}

TEST_CASE("matrix hash separates matrices") {
  IntMat a{{1, 2}, {3, 4}};
  IntMat b{{1, 2}, {3, 5}};
  CHECK(matrix_hash(a) == matrix_hash(a));
  CHECK(matrix_hash(a) != matrix_hash(b));
  CHECK(matrix_hash(a).size() == 16);
}

TEST_CASE("certificates carry the verification data") {
  auto spec = load_curve_spec(kData + "/c37.curve");
  GroupContext ctx(spec.f, *spec.base);
  auto basis = MordellWeilBasis::from_points(ctx, {PlanePoint(0, 0, 1)}, {}, 1e-8, true);
  auto pts = enumerate_points(spec.f, 50);
  auto classes = partition(ctx, basis, pts, 1);
  auto cb = class_bound(ctx, basis, classes[0], classes[0].representative, 1, 1, 1, 50);
  auto mb = monomial_basis(ctx, classes[0].representative, 1, 1, 1);
  auto pairs = xr_pairs_for_class(ctx, basis, classes[0], classes[0].representative, 1, 50);
  auto buckets = residue_buckets(ctx, pairs, cb.p);
  auto cert = format_certificate(spec, cb, mb, buckets);
  CHECK(cert.find("curve: c37") != std::string::npos);
  CHECK(cert.find("discriminant: -999") != std::string::npos);
  CHECK(cert.find("matrix-hash") != std::string::npos);
  CHECK(cert.find("result: PASS") != std::string::npos);
  CHECK(cert == format_certificate(spec, cb, mb, buckets));
}

TEST_CASE("theorem one report") {
  auto fermat = load_curve_spec(kData + "/fermat.curve");
  GroupContext ctx(fermat.f, *fermat.base);
  auto basis = load_mw_basis(kData + "/fermat.basis", ctx);
  auto rep = theorem_one_report(ctx, basis, 1, 100);
  CHECK(rep.N == 3);
  CHECK(rep.a == 5);  // 1 + [log 100]
  CHECK(rep.b == 1);
  CHECK(rep.ok);
  CHECK(rep.envelope == doctest::Approx(theorem_one_envelope(100, 1, 0)));
  CHECK(rep.ratio == doctest::Approx(3.0 / rep.envelope));
  CHECK(rep.corollary_envelope ==
        doctest::Approx(std::pow(std::log(100.0), 3.0)).epsilon(1e-9));
  CHECK_THROWS_AS(theorem_one_report(ctx, basis, 1, 2), pipeline_error);

  // m = 2 quarters the B-exponent: envelope uses B^{2/(3 m^2)}
  double e1 = theorem_one_envelope(1000, 1, 0);
  double e2 = theorem_one_envelope(1000, 2, 0);
  double lb = std::log(1000.0);
  CHECK(e2 == doctest::Approx(4 * (lb * lb + std::pow(1000.0, 2.0 / 12.0) * lb)));
  CHECK(e1 == doctest::Approx(lb * lb + std::pow(1000.0, 2.0 / 3.0) * lb));
}

TEST_CASE("envelope ratio is nonincreasing on the rank-0 curve") {
  auto fermat = load_curve_spec(kData + "/fermat.curve");
  GroupContext ctx(fermat.f, *fermat.base);
  auto basis = load_mw_basis(kData + "/fermat.basis", ctx);
  double prev = 1e300;
  for (long B : {10L, 100L, 1000L}) {
    auto rep = theorem_one_report(ctx, basis, 1, B);
    CHECK(rep.ratio <= prev);
    CHECK(std::isfinite(rep.ratio));
    prev = rep.ratio;
  }
}
