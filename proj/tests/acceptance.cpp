// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cubic/io.hpp"
#include "cubic/pipeline.hpp"

using namespace cubic;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int n, const std::string& what, const std::function<void()>& body) {
  auto t0 = Clock::now();
  std::string err;
  try {
    body();
  } catch (const std::exception& e) {
    err = e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::ostringstream line;
  line << "criterion " << n << " (" << what << "): ";
  if (err.empty()) {
    line << "PASS";
  } else {
    line << "FAIL [" << err << "]";
    ++failures;
  }
  line.precision(2);
  line << std::fixed << "  (" << secs << "s)";
  std::cout << line.str() << std::endl;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

const CubicForm kFermat = CubicForm::parse("x0^3+x1^3+x2^3");
const CubicForm k37({-1, 0, 0, 0, 0, 1, 0, 1, 1, 0});
const CubicForm k389({-1, 0, -1, 0, 0, 2, 0, 1, 1, 0});

GroupContext ctx37() { return GroupContext(k37, PlanePoint(0, 1, 0)); }
GroupContext ctx389() { return GroupContext(k389, PlanePoint(0, 1, 0)); }
GroupContext ctxFermat() { return GroupContext(kFermat, PlanePoint(0, 1, -1)); }

MordellWeilBasis basis37(const GroupContext& ctx) {
  return MordellWeilBasis::from_points(ctx, {PlanePoint(0, 0, 1)}, {}, 1e-8, true);
}
MordellWeilBasis basis389(const GroupContext& ctx) {
  return MordellWeilBasis::from_points(ctx, {PlanePoint(0, 0, 1), PlanePoint(1, 0, 1)}, {},
                                       1e-8, true);
}

}  // namespace

int main() {
  auto t_all = Clock::now();

  criterion(1, "sieve equals oracle", [] {
    auto t0 = Clock::now();
    for (const CubicForm* f : {&kFermat, &k37, &k389}) {
      auto oracle50 = enumerate_points_bruteforce(*f, 50);
      for (long b = 1; b <= 50; ++b) {
        std::vector<PlanePoint> expect;
        for (const auto& p : oracle50)
          if (p.height() <= b) expect.push_back(p);
        require(enumerate_points(*f, b) == expect, "sieve/oracle mismatch at B=" +
                                                       std::to_string(b));
      }
    }
    for (long b : {1L, 10L, 100L, 1000L})
      require(enumerate_points(kFermat, b).size() == 3, "fermat N(B) != 3");
    require(std::chrono::duration<double>(Clock::now() - t0).count() < 60, "over 60s");
  });

  criterion(2, "dimension formula grid", [] {
    auto t0 = Clock::now();
    auto ctx = ctx37();
    PlanePoint g(0, 0, 1);
    struct Row { long m; int a, b; std::size_t e; };
    for (auto [m, a, b, e] :
         {Row{1, 1, 1, 6}, Row{1, 2, 1, 9}, Row{1, 1, 2, 9}, Row{1, 3, 3, 18},
          Row{2, 1, 4, 24}, Row{2, 2, 4, 36}, Row{3, 1, 9, 54}}) {
      auto mb = monomial_basis(ctx, g, m, a, b);
      require(mb.E() == e, "wrong basis size for (m,a,b)");
    }
    bool threw = false;
    try {
      dimension_formula(1, 1, 2);
    } catch (const detmethod_error&) {
      threw = true;
    }
    require(threw, "(2,1,1) did not error");
    require(std::chrono::duration<double>(Clock::now() - t0).count() < 120, "over 120s");
  });

  criterion(3, "determinant valuation lemma", [] {
    auto ctx = ctx37();
    PlanePoint g(0, 0, 1);
    auto mb = monomial_basis(ctx, g, 1, 1, 1);
    for (long p : {5L, 7L, 11L}) {
      require(k37.is_good_prime(Int(p)), "bad prime in list");
      auto fam = bucket_family(ctx, g, g, 1, Int(p), 6);
      auto buckets = residue_buckets(ctx, fam, Int(p));
      require(buckets.size() == 1, "family split across buckets");
      auto mv = minor_valuation(build_matrix(buckets[0], mb).entries, Int(p));
      require(mv.zero || mv.valuation >= 15, "valuation below 15");
    }
  });

  criterion(4, "hensel defect valuations", [] {
    auto ctx = ctx37();
    PlanePoint g(0, 0, 1);
    auto fam = bucket_family(ctx, g, g, 1, Int(7), 20);
    FpCurve fp(k37, 7, ctx.base());
    auto hp = hensel_implicit(k37, fp.reduce(g), 7, 6);
    for (const auto& pr : fam)
      require(hp.defect_valuation(pr.Q) >= 6, "defect valuation below 6");
  });

  criterion(5, "descent partition", [] {
    // m = 1: exactly one class on every corpus curve
    {
      auto ctx = ctx37();
      auto b = basis37(ctx);
      require(partition(ctx, b, enumerate_points(k37, 50), 1).size() == 1, "37a m=1");
    }
    {
      auto ctx = ctx389();
      auto b = basis389(ctx);
      require(partition(ctx, b, enumerate_points(k389, 30), 1).size() == 1, "389a m=1");
    }
    {
      auto ctx = ctxFermat();
      auto b = bounded_search_basis(ctx, 100, 1e-8);
      require(partition(ctx, b, enumerate_points(kFermat, 100), 1).size() == 1,
              "fermat m=1");
    }
    // 37a with supplied generator, m = 2: at most two classes; 16 m^r bound
    auto ctx = ctx37();
    auto b = basis37(ctx);
    auto pts = enumerate_points(k37, 50);
    for (long m : {2L, 3L}) {
      auto classes = partition(ctx, b, pts, m);
      if (m == 2) require(classes.size() <= 2, "37a m=2 classes > 2");
      require(classes.size() <= static_cast<std::size_t>(16 * m), "16 m^r bound");
      // equivalence axioms: reflexive, symmetric, class-consistent
      for (const auto& k : classes)
        for (const auto& p : k.members) {
          require(equivalent_m(ctx, b, p, p, m), "not reflexive");
          require(equivalent_m(ctx, b, p, k.representative, m), "member not ~ rep");
          require(equivalent_m(ctx, b, k.representative, p, m), "not symmetric");
        }
      for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = i + 1; j < classes.size(); ++j)
          require(!equivalent_m(ctx, b, classes[i].representative,
                                classes[j].representative, m),
                  "distinct classes equivalent");
    }
  });

  criterion(6, "canonical heights", [] {
    const double tol = 1e-8;
    {
      auto ctx = ctx37();
      HeightMachine hm(ctx);
      PlanePoint g(0, 0, 1);
      double h = hm.canonical_height(g, tol / 8);
      double h2 = hm.canonical_height(ctx.smul(2, g), tol / 8);
      require(std::fabs(h2 - 4 * h) < 1e-6, "37a quadraticity");
      double lhs = hm.canonical_height(ctx.add(g, ctx.smul(2, g)), tol) +
                   hm.canonical_height(ctx.sub(g, ctx.smul(2, g)), tol);
      double rhs = 2 * hm.canonical_height(g, tol) +
                   2 * hm.canonical_height(ctx.smul(2, g), tol);
      require(std::fabs(lhs - rhs) < 6e-8, "parallelogram law");
    }
    {
      auto ctx = ctx389();
      HeightMachine hm(ctx);
      for (const PlanePoint& g : {PlanePoint(0, 0, 1), PlanePoint(1, 0, 1)}) {
        double h = hm.canonical_height(g, tol / 8);
        double h2 = hm.canonical_height(ctx.smul(2, g), tol / 8);
        require(std::fabs(h2 - 4 * h) < 1e-6, "389a quadraticity");
      }
    }
    {
      auto ctx = ctxFermat();
      HeightMachine hm(ctx);
      for (const auto& t : enumerate_points(kFermat, 2)) {
        require(hm.canonical_height(t, tol) < tol, "torsion height above tol");
        bool killed = false;
        for (long n = 1; n <= 12; ++n) killed = killed || ctx.smul(n, t) == ctx.base();
        require(killed, "torsion order above 12");
      }
    }
  });

  criterion(7, "auxiliary forms", [] {
    struct Run { const CubicForm* f; PlanePoint base; std::vector<PlanePoint> gens; long m; };
    std::vector<Run> runs{
        {&k37, PlanePoint(0, 1, 0), {PlanePoint(0, 0, 1)}, 1},
        {&k37, PlanePoint(0, 1, 0), {PlanePoint(0, 0, 1)}, 2},
        {&kFermat, PlanePoint(0, 1, -1), {}, 1},
    };
    for (const auto& run : runs) {
      GroupContext ctx(*run.f, run.base);
      MordellWeilBasis b =
          run.gens.empty() ? bounded_search_basis(ctx, 100, 1e-8)
                           : MordellWeilBasis::from_points(ctx, run.gens, {}, 1e-8, true);
      long a = 1, bb = run.m * run.m;
      long e3 = dimension_formula(a, bb, run.m);
      auto pts = enumerate_points(*run.f, 50);
      for (const auto& k : partition(ctx, b, pts, run.m)) {
        auto rep = class_bound(ctx, b, k, k.representative, run.m, a, bb, 50);
        require(rep.ok, "class bound not ok");
        auto mb = monomial_basis(ctx, k.representative, run.m, static_cast<int>(a),
                                 static_cast<int>(bb));
        auto pairs = xr_pairs_for_class(ctx, b, k, k.representative, run.m, 50);
        for (const auto& bucket : residue_buckets(ctx, pairs, rep.p)) {
          require(bucket.pairs.size() <= static_cast<std::size_t>(e3),
                  "bucket exceeds 3(m^2 a + b)");
          auto g = auxiliary_form(build_matrix(bucket, mb), mb);
          bool nonzero = false;
          for (const auto& c : g.coeffs) nonzero = nonzero || c != 0;
          require(nonzero, "zero auxiliary form");
          for (const auto& pr : bucket.pairs)
            require(eval_auxiliary(g, pr.P, pr.Q) == 0, "auxiliary form does not vanish");
        }
      }
    }
  });

  criterion(8, "davenport product bound", [] {
    RatMat id2{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
    auto d = davenport_check(HeightForm::from_rational(id2), 25.0);
    require(d.count == 81 && std::fabs(d.bound - 400.0) < 1e-9 && d.ok,
            "reference instance");
    std::mt19937 rng(424242);
    for (int t = 0; t < 50; ++t) {
      std::size_t r = 1 + rng() % 3;
      std::vector<std::vector<long>> a(r, std::vector<long>(r));
      for (auto& row : a)
        for (auto& v : row) v = static_cast<long>(rng() % 5) - 2;
      RatMat g(r, std::vector<Rat>(r, Rat(0)));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
          for (std::size_t k = 0; k < r; ++k) g[i][j] += Rat(a[k][i]) * Rat(a[k][j]);
          if (i == j) g[i][j] += 1;
        }
      auto f = HeightForm::from_rational(g);
      double rho = 1 + static_cast<double>(rng() % 100);
      // box oracle
      long box = static_cast<long>(std::ceil(std::sqrt(rho))) + 1;
      long long oracle = 0;
      std::vector<long> n(r);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == r) {
          Rat q(0);
          for (std::size_t x = 0; x < r; ++x)
            for (std::size_t y = 0; y < r; ++y) q += g[x][y] * Rat(n[x]) * Rat(n[y]);
          if (q <= Rat(rho)) ++oracle;
          return;
        }
        for (long k = -box; k <= box; ++k) {
          n[i] = k;
          rec(i + 1);
        }
      };
      rec(0);
      auto dc = davenport_check(f, rho);
      require(dc.count == oracle, "count differs from box oracle");
      require(dc.ok, "davenport bound violated");
    }
  });

  criterion(9, "growth consistency", [] {
    struct Run { const CubicForm* f; PlanePoint base; std::vector<PlanePoint> gens; };
    std::vector<Run> runs{
        {&kFermat, PlanePoint(0, 1, -1), {}},
        {&k37, PlanePoint(0, 1, 0), {PlanePoint(0, 0, 1)}},
        {&k389, PlanePoint(0, 1, 0), {PlanePoint(0, 0, 1), PlanePoint(1, 0, 1)}},
    };
    for (const auto& run : runs) {
      GroupContext ctx(*run.f, run.base);
      MordellWeilBasis b =
          run.gens.empty() ? bounded_search_basis(ctx, 100, 1e-8)
                           : MordellWeilBasis::from_points(ctx, run.gens, {}, 1e-8, true);
      auto rep = growth_report(ctx, b, count_table(*run.f, {10, 100, 1000}), 1.0);
      require(rep.ok, "lattice inequality failed");
    }
    // envelope ratio finite and nonincreasing on the rank-0 curve
    GroupContext ctx(kFermat, PlanePoint(0, 1, -1));
    auto b = bounded_search_basis(ctx, 100, 1e-8);
    double prev = 1e300;
    for (long B : {10L, 100L, 1000L}) {
      auto rep = theorem_one_report(ctx, b, 1, B);
      require(std::isfinite(rep.ratio) && rep.ratio <= prev, "ratio not nonincreasing");
      prev = rep.ratio;
    }
  });

  criterion(10, "forced-prime negative control", [] {
    auto ctx = ctx37();
    PlanePoint g(0, 0, 1);
    auto mb = monomial_basis(ctx, g, 1, 1, 1);
    auto fam = bucket_family(ctx, g, g, 1, Int(5), mb.E() + 2);
    auto buckets = residue_buckets(ctx, fam, Int(5));
    require(buckets.size() == 1, "family split");
    bool failed = false;
    ClassBoundReport rep;
    rep.p = 5;
    rep.forced = true;
    rep.E = mb.E();
    BucketReport br;
    br.qbar = buckets[0].qbar;
    br.size = buckets[0].pairs.size();
    try {
      auxiliary_form(build_matrix(buckets[0], mb), mb);
    } catch (const detmethod_error& e) {
      failed = true;
      br.note = e.what();
    }
    require(failed, "forced small prime did not break the construction");
    rep.buckets.push_back(br);
    rep.ok = false;
    rep.per_class_bound = 30;
    rep.overall_bound = 30;
    CurveSpec spec{"c37", k37, PlanePoint(0, 1, 0), std::nullopt};
    auto cert = format_certificate(spec, rep, mb, buckets);
    require(cert.find("result: FAIL") != std::string::npos, "certificate not failing");
    require(cert.find("FORCED") != std::string::npos, "certificate lacks the forced tag");
  });

  double total = std::chrono::duration<double>(Clock::now() - t_all).count();
  std::cout << (failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " ("
            << failures << " failing) in " << total << "s" << std::endl;
  return failures == 0 ? 0 : 1;
}
