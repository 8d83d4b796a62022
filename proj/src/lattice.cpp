#include "cubic/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "cubic/heights.hpp"

namespace cubic {
namespace {

constexpr long long kNodeBudget = 50'000'000;

double log_abs(const Int& n) {
  signed long exp2;
  double d = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(std::fabs(d)) + exp2 * std::log(2.0);
}

double to_double(const Rat& q) { return q.get_d(); }
double to_double(double d) { return d; }

// Q = sum_i d_i (n_i + sum_{j>i} u_ij n_j)^2 with unit upper-triangular u.
template <class S>
struct Decomp {
  std::vector<S> d;
  std::vector<std::vector<S>> u;
};

template <class S>
Decomp<S> decompose(const std::vector<std::vector<S>>& g) {
  std::size_t r = g.size();
  Decomp<S> dc;
  dc.d.assign(r, S(0));
  dc.u.assign(r, std::vector<S>(r, S(0)));
  for (std::size_t i = 0; i < r; ++i) {
    S di = g[i][i];
    for (std::size_t k = 0; k < i; ++k) di -= dc.d[k] * dc.u[k][i] * dc.u[k][i];
    if (!(to_double(di) > 0)) throw lattice_error("form is not positive definite");
    dc.d[i] = di;
    dc.u[i][i] = S(1);
    for (std::size_t j = i + 1; j < r; ++j) {
      S v = g[i][j];
      for (std::size_t k = 0; k < i; ++k) v -= dc.d[k] * dc.u[k][i] * dc.u[k][j];
      dc.u[i][j] = v / di;
    }
  }
  return dc;
}

// Depth-first enumeration with interval pruning; `limit` widens the search,
// `visit` classifies each completed vector by its exact accumulated value.
template <class S, class Visit>
void dfs(const Decomp<S>& dc, const S& limit, std::vector<long>& n, std::size_t level,
         const S& partial, long long& nodes, const Visit& visit) {
  if (level == static_cast<std::size_t>(-1)) {
    if (++nodes > kNodeBudget) throw lattice_error("ellipsoid enumeration budget exceeded");
    visit(n, partial);
    return;
  }
  S c(0);
  for (std::size_t j = level + 1; j < n.size(); ++j) c += dc.u[level][j] * S(n[j]);
  long k0 = std::lround(-to_double(c));
  for (long k = k0;; ++k) {
    S t = S(k) + c;
    S val = partial + dc.d[level] * t * t;
    if (!(val <= limit)) break;
    n[level] = k;
    dfs(dc, limit, n, level - 1, val, nodes, visit);
  }
  for (long k = k0 - 1;; --k) {
    S t = S(k) + c;
    S val = partial + dc.d[level] * t * t;
    if (!(val <= limit)) break;
    n[level] = k;
    dfs(dc, limit, n, level - 1, val, nodes, visit);
  }
}

struct Candidate {
  double q;
  std::vector<long> n;
};

}  // namespace

HeightForm HeightForm::from_rational(RatMat g, std::string source) {
  HeightForm f;
  f.r = g.size();
  for (std::size_t i = 0; i < f.r; ++i) {
    if (g[i].size() != f.r) throw lattice_error("gram matrix must be square");
    for (std::size_t j = 0; j < f.r; ++j)
      if (g[i][j] != g[j][i]) throw lattice_error("gram matrix must be symmetric");
  }
  f.gram.assign(f.r, std::vector<double>(f.r));
  for (std::size_t i = 0; i < f.r; ++i)
    for (std::size_t j = 0; j < f.r; ++j) f.gram[i][j] = g[i][j].get_d();
  f.exact = std::move(g);
  f.source = std::move(source);
  return f;
}

HeightForm HeightForm::from_gram(std::vector<std::vector<double>> g, double tol,
                                 std::string source) {
  HeightForm f;
  f.r = g.size();
  for (std::size_t i = 0; i < f.r; ++i) {
    if (g[i].size() != f.r) throw lattice_error("gram matrix must be square");
    for (std::size_t j = 0; j < f.r; ++j)
      if (std::fabs(g[i][j] - g[j][i]) > tol) throw lattice_error("gram matrix must be symmetric");
  }
  f.gram = std::move(g);
  f.tol = tol;
  f.source = std::move(source);
  return f;
}

double HeightForm::value(const std::vector<long>& n) const {
  if (n.size() != r) throw lattice_error("vector dimension mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) acc += gram[i][j] * n[i] * n[j];
  return acc;
}

EllipsoidCount ellipsoid_count(const HeightForm& form, const Rat& rho) {
  if (!form.exact) throw lattice_error("exact count needs a rational gram matrix");
  if (rho < 0) throw lattice_error("radius must be nonnegative");
  EllipsoidCount out;
  if (form.r == 0) {
    out.count = 1;
    return out;
  }
  auto dc = decompose<Rat>(*form.exact);
  std::vector<long> n(form.r, 0);
  long long nodes = 0;
  dfs<Rat>(dc, rho, n, form.r - 1, Rat(0), nodes,
           [&](const std::vector<long>&, const Rat&) { ++out.count; });
  return out;
}

EllipsoidCount ellipsoid_count(const HeightForm& form, double rho) {
  if (form.exact) return ellipsoid_count(form, Rat(rho));
  if (rho < 0) throw lattice_error("radius must be nonnegative");
  EllipsoidCount out;
  if (form.r == 0) {
    out.count = 1;
    return out;
  }
  auto dc = decompose<double>(form.gram);
  double eps = form.tol * (1.0 + std::fabs(rho));
  std::vector<long> n(form.r, 0);
  long long nodes = 0;
  dfs<double>(dc, rho + eps, n, form.r - 1, 0.0, nodes,
              [&](const std::vector<long>&, const double& q) {
                if (q <= rho) ++out.count;
                if (std::fabs(q - rho) <= eps) ++out.ambiguous;
              });
  return out;
}

MinimaReport successive_minima(const HeightForm& form) {
  if (form.r > 6) throw lattice_error("desk-scale limit: r <= 6");
  MinimaReport rep;
  if (form.r == 0) return rep;
  double rho = form.gram[0][0];
  for (std::size_t i = 1; i < form.r; ++i) rho = std::min(rho, form.gram[i][i]);
  for (int round = 0; round < 40; ++round) {
    std::vector<Candidate> cands;
    std::vector<long> n(form.r, 0);
    long long nodes = 0;
    bool overflow = false;
    try {
      if (form.exact) {
        auto dc = decompose<Rat>(*form.exact);
        dfs<Rat>(dc, Rat(rho), n, form.r - 1, Rat(0), nodes,
                 [&](const std::vector<long>& v, const Rat& q) {
                   if (q != 0) cands.push_back({q.get_d(), v});
                 });
      } else {
        auto dc = decompose<double>(form.gram);
        dfs<double>(dc, rho, n, form.r - 1, 0.0, nodes,
                    [&](const std::vector<long>& v, const double& q) {
                      if (q > form.tol) cands.push_back({q, v});
                    });
      }
    } catch (const lattice_error&) {
      overflow = true;
    }
    if (!overflow) {
      std::sort(cands.begin(), cands.end(),
                [](const Candidate& a, const Candidate& b) { return a.q < b.q; });
      MinimaReport out;
      IntMat sel;
      for (const Candidate& c : cands) {
        IntMat trial = sel;
        trial.emplace_back(c.n.begin(), c.n.end());
        if (int_rank(trial) == static_cast<int>(trial.size())) {
          sel = std::move(trial);
          out.M.push_back(std::sqrt(c.q));
          out.witnesses.push_back(c.n);
          if (out.M.size() == form.r) return out;
        }
      }
    }
    if (overflow) throw lattice_error("minima enumeration budget exceeded");
    rho *= 2;
  }
  throw lattice_error("successive minima search did not terminate");
}

DavenportCheck davenport_check(const HeightForm& form, double rho) {
  DavenportCheck out;
  auto ec = ellipsoid_count(form, rho);
  out.count = ec.count;
  auto minima = successive_minima(form);
  out.bound = 1.0;
  for (double m : minima.M) out.bound *= std::max(1.0, 4.0 * std::sqrt(rho) / m);
  out.ok = static_cast<double>(out.count) <= out.bound * (1 + 1e-9) + 1e-9;
  return out;
}

DavidReport david_report(const MinimaReport& minima, const Int& d) {
  Int ad = abs(d);
  if (ad < 3) throw lattice_error("report requires |D| >= 3");
  static const double kExps[5] = {-7.0 / 16, -1.0 / 6, -7.0 / 96, -1.0 / 40, 1.0 / 240};
  DavidReport rep;
  double ld = log_abs(ad);
  std::size_t rows = std::min<std::size_t>(minima.M.size(), 5);
  for (std::size_t j = 0; j < rows; ++j)
    rep.rows.push_back({static_cast<int>(j + 1), kExps[j],
                        minima.M[j] / std::pow(ld, kExps[j])});
  rep.exponent_sum = 7.0 / 16 + 1.0 / 6 + 7.0 / 96 + 1.0 / 40;
  rep.footer_ok = rep.exponent_sum < 1.0;
  return rep;
}

GrowthReport growth_report(const GroupContext& ctx, const MordellWeilBasis& basis,
                           const std::vector<CountRow>& table, double c_cal) {
  GrowthReport rep;
  rep.torsion = basis.torsion().size();
  HeightForm form = HeightForm::from_gram(basis.gram(), basis.tol(), "mw-basis");
  HeightMachine hm(ctx);
  double expo = 1.0 + static_cast<double>(basis.rank()) / 2.0;
  bool all_ok = true;
  for (const CountRow& row : table) {
    auto pts = enumerate_points(ctx.form(), row.B);
    if (pts.size() != row.N) throw lattice_error("count table does not match the curve");
    GrowthRow gr;
    gr.B = row.B;
    gr.N = row.N;
    for (const PlanePoint& p : pts)
      gr.h_max = std::max(gr.h_max, hm.canonical_height(p, basis.tol()));
    // The heights entering the gram matrix and h_max are tolerance-accurate;
    // widen the radius so the lattice count is a certain over-count.
    double margin = std::max(1e-6, basis.tol() * 1e4) * (1.0 + gr.h_max);
    auto ec = ellipsoid_count(form, gr.h_max + margin);
    gr.lattice_bound = static_cast<long long>(rep.torsion) * (ec.count + ec.ambiguous);
    gr.calibrated = ellipsoid_count(form, c_cal * std::log(static_cast<double>(row.B))).count;
    gr.log_pow = std::pow(std::log(static_cast<double>(row.B)), expo);
    gr.ok = static_cast<long long>(gr.N) <= gr.lattice_bound;
    all_ok = all_ok && gr.ok;
    rep.rows.push_back(gr);
  }
  rep.ok = all_ok;
  return rep;
}

}  // namespace cubic
