#include "cubic/detmethod.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cubic {
namespace {

using u64 = unsigned long;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(u128(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 as_ulong(const Int& p) {
  if (!p.fits_ulong_p()) throw detmethod_error("prime too large for residue arithmetic");
  return p.get_ui();
}

std::array<u64, 3> fp_coords(const FpPoint& a) { return {a.x0, a.x1, a.x2}; }

double log_abs(const Int& n) {
  if (n == 0) return 0;
  signed long exp2;
  double d = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(std::fabs(d)) + exp2 * std::log(2.0);
}

// Exponent triples of total degree d, descending lexicographic.
std::vector<std::array<int, 3>> degree_exponents(int d) {
  std::vector<std::array<int, 3>> out;
  for (int e0 = d; e0 >= 0; --e0)
    for (int e1 = d - e0; e1 >= 0; --e1) out.push_back({e0, e1, d - e0 - e1});
  return out;
}

// Chart data at a residue point: unit coordinate, then the coordinate whose
// partial derivative is a p-unit (the dependent variable z1).
struct Chart {
  int unit = 0, dep = 1, free_ = 2;
};

Chart make_chart(const CubicForm& f, const FpPoint& qstar, u64 p) {
  auto q = fp_coords(qstar);
  Chart ch;
  if (q[0] % p != 0)
    ch.unit = 0;
  else if (q[1] % p != 0)
    ch.unit = 1;
  else
    ch.unit = 2;
  int c1 = ch.unit == 0 ? 1 : 0;
  int c2 = ch.unit == 2 ? 1 : 2;
  Int d1 = f.eval_partial(c1, Int(q[0]), Int(q[1]), Int(q[2])) % Int(p);
  Int d2 = f.eval_partial(c2, Int(q[0]), Int(q[1]), Int(q[2])) % Int(p);
  if (d1 != 0) {
    ch.dep = c1;
    ch.free_ = c2;
  } else if (d2 != 0) {
    ch.dep = c2;
    ch.free_ = c1;
  } else {
    throw detmethod_error("no unit partial derivative; reduction is singular");
  }
  return ch;
}

// Truncated polynomial ring (Z/p^n)[w]/(w^n), coefficients canonical in [0,p^n).
struct TruncRing {
  int n;
  Int pn;

  using Poly = std::vector<Int>;

  Poly make(const Int& c0) const {
    Poly p(n, Int(0));
    p[0] = mod(c0);
    return p;
  }
  Int mod(const Int& v) const {
    Int r = v % pn;
    if (r < 0) r += pn;
    return r;
  }
  Poly add(const Poly& a, const Poly& b) const {
    Poly r(n);
    for (int i = 0; i < n; ++i) r[i] = mod(a[i] + b[i]);
    return r;
  }
  Poly sub(const Poly& a, const Poly& b) const {
    Poly r(n);
    for (int i = 0; i < n; ++i) r[i] = mod(a[i] - b[i]);
    return r;
  }
  Poly mul(const Poly& a, const Poly& b) const {
    Poly r(n, Int(0));
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
    }
    for (int i = 0; i < n; ++i) r[i] = mod(r[i]);
    return r;
  }
  bool is_zero(const Poly& a) const {
    return std::all_of(a.begin(), a.end(), [](const Int& c) { return c == 0; });
  }
  // Inverse of a unit (constant term prime to p), by Newton doubling in w.
  Poly inverse(const Poly& a, const Int& p) const {
    Int inv0;
    if (mpz_invert(inv0.get_mpz_t(), a[0].get_mpz_t(), pn.get_mpz_t()) == 0)
      throw detmethod_error("non-unit constant term in truncated inversion");
    Poly x = make(inv0);
    Poly one = make(Int(1));
    for (int it = 0; it < 64; ++it) {
      Poly err = sub(one, mul(a, x));
      if (is_zero(err)) return x;
      x = add(x, mul(x, err));
    }
    throw detmethod_error("truncated inversion did not converge");
  }
};

}  // namespace

std::vector<BiMonomial> all_bimonomials(int a, int b) {
  if (a < 1 || b < 1) throw detmethod_error("bi-degree must be positive");
  std::vector<BiMonomial> out;
  for (const auto& e : degree_exponents(a))
    for (const auto& f : degree_exponents(b)) out.push_back({e, f});
  return out;
}

Int eval_bimonomial(const BiMonomial& m, const PlanePoint& p, const PlanePoint& q) {
  Int r = 1;
  std::array<const Int*, 3> pc{&p.x0, &p.x1, &p.x2}, qc{&q.x0, &q.x1, &q.x2};
  for (int v = 0; v < 3; ++v) {
    for (int k = 0; k < m.e[v]; ++k) r *= *pc[v];
    for (int k = 0; k < m.f[v]; ++k) r *= *qc[v];
  }
  return r;
}

unsigned long eval_bimonomial_mod(const BiMonomial& m, const FpPoint& p, const FpPoint& q,
                                  unsigned long mod) {
  auto pc = fp_coords(p);
  auto qc = fp_coords(q);
  u64 r = 1 % mod;
  for (int v = 0; v < 3; ++v) {
    r = mulmod(r, powmod(pc[v], m.e[v], mod), mod);
    r = mulmod(r, powmod(qc[v], m.f[v], mod), mod);
  }
  return r;
}

long dimension_formula(long a, long b, long m) {
  if (a < 1 || b < 1 || m < 1) throw detmethod_error("dimension formula requires a,b,m >= 1");
  // 1/a + m^2/b < 3, cross-multiplied to stay exact.
  if (b + m * m * a >= 3 * a * b)
    throw detmethod_error("dimension formula requires 1/a + m^2/b < 3");
  return 3 * (m * m * a + b);
}

std::vector<std::pair<FpPoint, FpPoint>> xr_samples_mod_q(const GroupContext& ctx,
                                                          const PlanePoint& r, long m,
                                                          unsigned long q, std::size_t count) {
  if (m < 1) throw detmethod_error("m must be positive");
  FpCurve fp(ctx.form(), q, ctx.base());
  FpPoint rbar = fp.reduce(r);
  FpPoint shift = fp.neg(fp.smul(m - 1, rbar));
  std::vector<std::pair<FpPoint, FpPoint>> out;
  for (const FpPoint& qq : fp.points()) {
    if (out.size() >= count) break;
    out.emplace_back(fp.add(fp.smul(m, qq), shift), qq);
  }
  return out;
}

MonomialBasis monomial_basis(const GroupContext& ctx, const PlanePoint& r, long m, int a,
                             int b) {
  long e_target = dimension_formula(a, b, m);
  auto mons = all_bimonomials(a, b);
  std::size_t samples = static_cast<std::size_t>(e_target) + 16;
  // Deterministic good primes, retried on a dimension mismatch.
  static const unsigned long kSeeds[3] = {499, 1009, 2003};
  std::string diag;
  for (unsigned long seed : kSeeds) {
    Int q(seed);
    while (!ctx.form().is_good_prime(q))
      mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    u64 qq = as_ulong(q);
    auto pairs = xr_samples_mod_q(ctx, r, m, qq, samples);
    if (pairs.size() < static_cast<std::size_t>(e_target) + 10) {
      diag += " q=" + std::to_string(qq) + ": too few residue samples;";
      continue;
    }
    std::vector<std::vector<u64>> rows(pairs.size(), std::vector<u64>(mons.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = 0; j < mons.size(); ++j)
        rows[i][j] = eval_bimonomial_mod(mons[j], pairs[i].first, pairs[i].second, qq);
    // Column-ordered Gaussian elimination over F_q: pivot columns are the
    // lexicographically earliest independent set, hence deterministic.
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < mons.size() && row < rows.size(); ++col) {
      std::size_t piv = row;
      while (piv < rows.size() && rows[piv][col] == 0) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[piv], rows[row]);
      u64 inv = powmod(rows[row][col], qq - 2, qq);
      for (std::size_t j = col; j < mons.size(); ++j)
        rows[row][j] = mulmod(rows[row][j], inv, qq);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == row || rows[i][col] == 0) continue;
        u64 c = rows[i][col];
        for (std::size_t j = col; j < mons.size(); ++j) {
          u64 t = mulmod(c, rows[row][j], qq);
          rows[i][j] = (rows[i][j] + qq - t) % qq;
        }
      }
      pivots.push_back(col);
      ++row;
    }
    if (pivots.size() == static_cast<std::size_t>(e_target)) {
      MonomialBasis out;
      out.a = a;
      out.b = b;
      out.m = m;
      for (std::size_t col : pivots) out.elems.push_back(mons[col]);
      return out;
    }
    diag += " q=" + std::to_string(qq) + ": rank " + std::to_string(pivots.size()) + ";";
  }
  throw detmethod_error("evaluation rank never matched 3(m^2 a + b) = " +
                        std::to_string(e_target) + ":" + diag);
}

int partials_unit(const CubicForm& f, const FpPoint& qstar, unsigned long p) {
  if (qstar.x0 % p == 0) throw detmethod_error("partials_unit requires a unit first coordinate");
  Chart ch = make_chart(f, qstar, p);
  return ch.dep;
}

Int HenselPoly::eval(const Int& z2) const {
  // Horner in (z2 - z2star), reduced mod p^n.
  Int w = (z2 - z2star) % pn;
  if (w < 0) w += pn;
  Int acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * w + *it) % pn;
  return acc;
}

unsigned long HenselPoly::defect_valuation(const PlanePoint& q) const {
  std::array<const Int*, 3> qc{&q.x0, &q.x1, &q.x2};
  Int u = *qc[perm[0]] % pn;
  if (u < 0) u += pn;
  Int uinv;
  if (u % p == 0 || mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), pn.get_mpz_t()) == 0)
    throw detmethod_error("point leaves the residue chart");
  Int z1 = (*qc[perm[1]] * uinv) % pn;
  Int z2 = (*qc[perm[2]] * uinv) % pn;
  Int d = (z1 - eval(z2)) % pn;
  if (d < 0) d += pn;
  if (d == 0) return n;
  return padic_valuation(d, Int(p));
}

HenselPoly hensel_implicit(const CubicForm& f, const FpPoint& qstar, unsigned long p, int n) {
  if (n < 1) throw detmethod_error("truncation order must be positive");
  if (!f.is_good_prime(Int(p))) throw detmethod_error("implicit lift requires a good prime");
  auto q = fp_coords(qstar);
  if (f.eval(Int(q[0]), Int(q[1]), Int(q[2])) % Int(p) != 0)
    throw detmethod_error("residue point is not on the reduced curve");
  Chart ch = make_chart(f, qstar, p);

  HenselPoly out;
  out.p = p;
  out.n = n;
  mpz_ui_pow_ui(out.pn.get_mpz_t(), p, static_cast<unsigned long>(n));
  out.perm = {ch.unit, ch.dep, ch.free_};

  // Scale so the unit coordinate is 1 mod p, then lift the chart values.
  u64 s = powmod(q[ch.unit], p - 2, p);
  Int z1star((mulmod(q[ch.dep], s, p)));
  Int z2star((mulmod(q[ch.free_], s, p)));
  out.z2star = z2star;

  TruncRing ring{n, out.pn};
  using Poly = TruncRing::Poly;
  // Fixed arguments: y_unit = 1, y_free = z2star + w; y_dep = Z1(w) iterated.
  std::array<Poly, 3> arg;
  arg[ch.unit] = ring.make(Int(1));
  arg[ch.free_] = ring.make(z2star);
  if (n > 1) arg[ch.free_][1] = 1;

  auto eval_poly = [&](const std::array<Int, 10>& cs,
                       const std::array<std::array<int, 3>, 10>& exps, std::size_t terms,
                       const Poly& z1) -> Poly {
    std::array<std::array<Poly, 4>, 3> pw;
    for (int v = 0; v < 3; ++v) {
      pw[v][0] = ring.make(Int(1));
      const Poly& base = v == ch.dep ? z1 : arg[v];
      for (int k = 1; k <= 3; ++k) pw[v][k] = ring.mul(pw[v][k - 1], base);
    }
    Poly acc(n, Int(0));
    for (std::size_t i = 0; i < terms; ++i) {
      if (cs[i] == 0) continue;
      Poly term = ring.make(cs[i]);
      for (int v = 0; v < 3; ++v) term = ring.mul(term, pw[v][exps[i][v]]);
      acc = ring.add(acc, term);
    }
    return acc;
  };
  auto eval_cubic = [&](const Poly& z1) {
    return eval_poly(f.coeffs(), kCubicExponents, 10, z1);
  };
  std::array<Int, 10> dcs{};
  auto dpart = f.partial(ch.dep);
  std::array<std::array<int, 3>, 10> dexps{};
  for (int i = 0; i < 6; ++i) {
    dcs[i] = dpart[i];
    dexps[i] = kQuadExponents[i];
  }
  auto eval_deriv = [&](const Poly& z1) { return eval_poly(dcs, dexps, 6, z1); };

  // Newton iteration; the defect starts in the ideal (p, w) and squares each
  // step, so it hits (p^n, w^n) in O(log n) iterations.
  Poly z1 = ring.make(z1star);
  bool done = false;
  for (int it = 0; it < 200 && !done; ++it) {
    Poly fv = eval_cubic(z1);
    if (ring.is_zero(fv)) {
      done = true;
      break;
    }
    Poly dinv = ring.inverse(eval_deriv(z1), Int(p));
    z1 = ring.sub(z1, ring.mul(fv, dinv));
  }
  if (!done && !ring.is_zero(eval_cubic(z1)))
    throw detmethod_error("implicit Newton iteration did not converge");
  out.c = z1;
  return out;
}

std::vector<ResidueBucket> residue_buckets(const GroupContext& ctx,
                                           const std::vector<XRPair>& pairs, const Int& p) {
  if (!ctx.form().is_good_prime(p)) throw detmethod_error("bucketing requires a good prime");
  u64 pp = as_ulong(p);
  FpCurve fp(ctx.form(), pp, ctx.base());
  for (const XRPair& pr : pairs)
    if (pr.m != pairs.front().m || !(pr.R == pairs.front().R))
      throw detmethod_error("pairs mix different descent data");
  std::map<FpPoint, ResidueBucket> buckets;
  for (const XRPair& pr : pairs) {
    FpPoint qbar = fp.reduce(pr.Q);
    auto [it, fresh] = buckets.try_emplace(qbar);
    if (fresh) {
      Chart ch = make_chart(ctx.form(), qbar, pp);
      it->second.qbar = qbar;
      it->second.unit_coord = ch.unit;
      it->second.dependent_coord = ch.dep;
      it->second.free_coord = ch.free_;
    }
    it->second.pairs.push_back(pr);
  }
  std::vector<ResidueBucket> out;
  out.reserve(buckets.size());
  for (auto& [key, b] : buckets) out.push_back(std::move(b));
  return out;
}

EvalMatrix build_matrix(const ResidueBucket& bucket, const MonomialBasis& basis) {
  EvalMatrix out;
  out.cols = basis.elems;
  out.entries.reserve(bucket.pairs.size());
  for (const XRPair& pr : bucket.pairs) {
    std::vector<Int> row;
    row.reserve(basis.elems.size());
    for (const BiMonomial& m : basis.elems) row.push_back(eval_bimonomial(m, pr.P, pr.Q));
    out.entries.push_back(std::move(row));
  }
  return out;
}

MinorValuation minor_valuation(const IntMat& delta, const Int& p) {
  std::size_t e = delta.size();
  for (const auto& row : delta)
    if (row.size() != e) throw detmethod_error("minor must be square");
  MinorValuation out;
  out.det = bareiss_det(delta);
  if (out.det == 0) {
    out.zero = true;
    return out;
  }
  out.valuation = padic_valuation(out.det, p);
  unsigned long need = e * (e - 1) / 2;
  if (out.valuation < need)
    throw detmethod_error("determinant valuation " + std::to_string(out.valuation) +
                          " below E(E-1)/2 = " + std::to_string(need));
  return out;
}

bool archimedean_bound(const IntMat& delta, long B, long a, long b, double A) {
  Int det = bareiss_det(delta);
  if (det == 0) return true;
  double e = static_cast<double>(delta.size());
  double bound = e * std::log(e) + e * (a + A * b) * std::log(static_cast<double>(B));
  return log_abs(det) <= bound + 1e-9;
}

PrimeChoice choose_prime(long B, long a, long b, std::size_t E, double A, double c0,
                         const CubicForm& f) {
  if (E < 3) throw detmethod_error("prime threshold needs E >= 3");
  if (B < 3) throw detmethod_error("prime threshold needs B >= 3");
  double expnt = 2.0 * (a + A * b) / static_cast<double>(E - 1);
  double thr = c0 * std::log(static_cast<double>(B)) +
               4.0 * std::pow(static_cast<double>(B), expnt);
  if (!std::isfinite(thr) || thr > 1e18) throw detmethod_error("prime threshold overflow");
  PrimeChoice out;
  out.threshold = thr;
  for (int widen = 0; widen < 2; ++widen) {
    Int limit(std::ceil(thr * (widen ? 4.0 : 2.0)));
    Int cand(std::floor(thr));
    while (true) {
      mpz_nextprime(cand.get_mpz_t(), cand.get_mpz_t());
      if (cand > limit) break;
      if (cand >= 5 && f.is_good_prime(cand)) {
        out.p = cand;
        out.widened = widen > 0;
        return out;
      }
    }
  }
  throw detmethod_error("no good prime up to four times the threshold");
}

AuxiliaryForm auxiliary_form(const EvalMatrix& matrix, const MonomialBasis& basis) {
  if (!matrix.entries.empty() && matrix.entries.front().size() != basis.elems.size())
    throw detmethod_error("matrix columns do not match the monomial basis");
  AuxiliaryForm out;
  out.support = basis.elems;
  if (matrix.entries.empty()) {
    // Empty bucket: any basis monomial works; pick the first.
    out.coeffs.assign(basis.elems.size(), Int(0));
    out.coeffs[0] = 1;
    return out;
  }
  out.coeffs = integer_kernel_vector(matrix.entries);
  if (out.coeffs.empty())
    throw detmethod_error("bucket matrix has full column rank; no auxiliary form");
  for (const auto& row : matrix.entries) {
    Int acc = 0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * out.coeffs[j];
    if (acc != 0) throw detmethod_error("kernel vector fails to annihilate the bucket");
  }
  return out;
}

Int eval_auxiliary(const AuxiliaryForm& g, const PlanePoint& p, const PlanePoint& q) {
  Int acc = 0;
  for (std::size_t j = 0; j < g.support.size(); ++j)
    acc += g.coeffs[j] * eval_bimonomial(g.support[j], p, q);
  return acc;
}

unsigned long eval_auxiliary_mod(const AuxiliaryForm& g, const FpPoint& p, const FpPoint& q,
                                 unsigned long mod) {
  Int acc = 0;
  for (std::size_t j = 0; j < g.support.size(); ++j)
    acc += (g.coeffs[j] % Int(mod)) * Int(eval_bimonomial_mod(g.support[j], p, q, mod));
  acc %= Int(mod);
  if (acc < 0) acc += Int(mod);
  return acc.get_ui();
}

std::vector<XRPair> bucket_family(const GroupContext& ctx, const PlanePoint& t,
                                  const PlanePoint& r, long m, const Int& p,
                                  std::size_t count) {
  if (!ctx.form().is_good_prime(p)) throw detmethod_error("family requires a good prime");
  u64 pp = as_ulong(p);
  FpCurve fp(ctx.form(), pp, ctx.base());
  long k = static_cast<long>(fp.order_of(fp.reduce(t)));
  std::vector<XRPair> out;
  FpPoint rbar = fp.reduce(r);
  for (std::size_t j = 0; j < count; ++j) {
    PlanePoint qj = ctx.add(r, ctx.smul(static_cast<long>(j) * k, t));
    PlanePoint pj = ctx.sub(ctx.smul(m, qj), ctx.smul(m - 1, r));
    if (!(fp.reduce(qj) == rbar))
      throw detmethod_error("family member leaves the residue class");
    for (const XRPair& prev : out)
      if (prev.Q == qj) throw detmethod_error("family repeats; generator must be non-torsion");
    out.push_back(XRPair{pj, qj, r, m});
  }
  return out;
}

ClassBoundReport class_bound(const GroupContext& ctx, const MordellWeilBasis& basis,
                             const DescentClass& k, const PlanePoint& r, long m, long a,
                             long b, long B, std::optional<double> a_exponent, double c0,
                             std::optional<Int> force_prime) {
  ClassBoundReport rep;
  rep.m = m;
  rep.a = a;
  rep.b = b;
  rep.B = B;
  long e3 = dimension_formula(a, b, m);

  auto pairs = xr_pairs_for_class(ctx, basis, k, r, m, B);
  if (a_exponent)
    rep.A = *a_exponent;
  else if (pairs.empty())
    rep.A = 1.0;
  else
    rep.A = crude_height_audit(ctx, pairs, B) * 1.1;  // measured, with head room

  MonomialBasis mb = monomial_basis(ctx, r, m, a, b);
  rep.E = mb.E();

  if (force_prime) {
    if (!ctx.form().is_good_prime(*force_prime))
      throw detmethod_error("forced prime has bad reduction");
    rep.p = *force_prime;
    rep.forced = true;
  } else {
    PrimeChoice pc = choose_prime(B, a, b, rep.E, rep.A, c0, ctx.form());
    rep.p = pc.p;
    rep.widened = pc.widened;
  }

  bool all_ok = true;
  for (const ResidueBucket& bucket : residue_buckets(ctx, pairs, rep.p)) {
    BucketReport br;
    br.qbar = bucket.qbar;
    br.size = bucket.pairs.size();
    try {
      AuxiliaryForm g = auxiliary_form(build_matrix(bucket, mb), mb);
      br.aux_coeffs = g.coeffs;
      br.aux_ok = true;
      if (br.size > static_cast<std::size_t>(e3)) {
        br.aux_ok = false;
        br.note = "bucket exceeds 3(m^2 a + b)";
      }
    } catch (const detmethod_error& e) {
      br.aux_ok = false;
      br.note = e.what();
    }
    all_ok = all_ok && br.aux_ok;
    rep.buckets.push_back(std::move(br));
  }
  rep.ok = all_ok;
  rep.per_class_bound = rep.p * e3;
  Int mr = 1;
  for (std::size_t i = 0; i < basis.rank(); ++i) mr *= m;
  rep.overall_bound = mr * rep.per_class_bound;
  return rep;
}

}  // namespace cubic
