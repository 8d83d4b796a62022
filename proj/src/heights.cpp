#include "cubic/heights.hpp"

#include <cmath>
#include <stdexcept>

#include "cubic/linalg.hpp"

namespace cubic {

namespace {

double log_abs(const Int& x) {
  if (x == 0) throw std::domain_error("log_abs: zero");
  signed long e;
  double d = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log(std::fabs(d)) + static_cast<double>(e) * std::log(2.0);
}

double log_abs(const mpf_class& x) {
  signed long e;
  double d = mpf_get_d_2exp(&e, x.get_mpf_t());
  return std::log(std::fabs(d)) + static_cast<double>(e) * std::log(2.0);
}

constexpr int kMaxDoublings = 40;
constexpr unsigned long kMaxPrecBits = 1ul << 22;

}  // namespace

double hx(const WeierstrassModel& /*model*/, const ECPoint& pt) {
  if (pt.infinite) return 0.0;
  Int n = pt.x.get_num();
  Int d = pt.x.get_den();
  Int m = std::max(Int(abs(n)), d);
  if (m == 1) return 0.0;
  return log_abs(m);
}

HeightMachine::HeightMachine(const GroupContext& ctx) : ctx_(&ctx) {
  const Rat& alpha = ctx.model().alpha;
  const Rat& beta = ctx.model().beta;
  scale_ = lcm(Int(alpha.get_den()), Int(beta.get_den()));
  Int s2 = scale_ * scale_;
  Rat av = alpha * s2 * s2;
  Rat bv = beta * s2 * s2 * s2;
  av.canonicalize();
  bv.canonicalize();
  if (av.get_den() != 1 || bv.get_den() != 1)
    throw std::logic_error("HeightMachine: model scaling failed");
  a_ = av.get_num();
  b_ = bv.get_num();

  // x-coordinate duplication on y^2 = x^3 + a x + b, as a pair of binary
  // quartics in (n, d), coefficients in descending n-degree:
  //   num: n^4 - 2a n^2 d^2 - 8b n d^3 + a^2 d^4
  //   den: 4 n^3 d + 4a n d^3 + 4b d^4
  std::array<Int, 5> phi{Int(1), Int(0), Int(-2 * a_), Int(-8 * b_), Int(a_ * a_)};
  std::array<Int, 5> psi{Int(0), Int(4), Int(0), Int(4 * a_), Int(4 * b_)};

  // Cofactor identities A*num + B*den = R n^7 and C*num + D*den = R d^7
  // (A..D cubic forms).  The step gcd divides R, and the cofactor 1-norms
  // give the one-step height drop bound.
  RatMat m(8, std::vector<Rat>(8, Rat(0)));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      m[i + j][i] += Rat(phi[j]);
      m[i + j][4 + i] += Rat(psi[j]);
    }
  std::vector<Rat> e0(8, Rat(0)), e7(8, Rat(0));
  e0[0] = 1;
  e7[7] = 1;
  auto xn = solve_rational(m, e0);
  auto xd = solve_rational(m, e7);
  Int r(1);
  for (const auto& q : xn) r = lcm(r, Int(q.get_den()));
  for (const auto& q : xd) r = lcm(r, Int(q.get_den()));
  res_ = r;
  Int c1n(0), c1d(0);
  for (const auto& q : xn) c1n += abs(Int(q.get_num() * (r / q.get_den())));
  for (const auto& q : xd) c1d += abs(Int(q.get_num() * (r / q.get_den())));
  Int c1 = std::max(c1n, c1d);
  Int l1p(0), l1q(0);
  for (const auto& c : phi) l1p += abs(c);
  for (const auto& c : psi) l1q += abs(c);
  Int l1 = std::max(l1p, l1q);

  log_l1_ = log_abs(l1);
  log_c1_ = log_abs(c1);
  // Certified relative-error growth per floating step.
  double l2 = std::log(2.0);
  step_bits_ = std::max(8.0, 3.0 + log_l1_ / l2 + log_c1_ / l2 - log_abs(r) / l2);
}

double HeightMachine::canonical_height(const PlanePoint& pt, double tol) const {
  if (tol <= 0) throw std::invalid_argument("canonical_height: tol must be positive");
  if (!ctx_->on_curve(pt)) throw form_error("canonical_height: point not on curve");
  if (pt == ctx_->base()) return 0.0;

  // Exact torsion screen (orders are at most 12): torsion has height 0.
  {
    PlanePoint q = pt;
    for (int n = 2; n <= 12; ++n) {
      q = ctx_->add(q, pt);
      if (q == ctx_->base()) return 0.0;
    }
  }

  ECPoint e = ctx_->to_ec(pt);
  if (e.infinite) return 0.0;
  Rat xi = e.x * scale_ * scale_;
  xi.canonicalize();
  Int n0 = xi.get_num();
  Int d0 = xi.get_den();

  const double c = std::max(log_l1_, log_c1_);
  int kk = static_cast<int>(std::ceil(std::log(2.0 * c / (3.0 * tol)) / std::log(4.0)));
  if (kk < 1) kk = 1;
  if (kk > kMaxDoublings)
    throw std::runtime_error("canonical_height: tolerance needs more than 40 doublings");

  double prec_d = 128.0 + (kk + 2) * step_bits_;
  if (prec_d > static_cast<double>(kMaxPrecBits))
    throw std::runtime_error("canonical_height: required precision out of range");
  auto prec = static_cast<unsigned long>(prec_d);

  const Int rabs = abs(res_);
  const bool track = rabs != 1;
  Int mod(1), nr(0), dr(0);
  if (track) {
    mpz_pow_ui(mod.get_mpz_t(), rabs.get_mpz_t(), static_cast<unsigned long>(kk));
    nr = n0 % mod;
    if (nr < 0) nr += mod;
    dr = d0 % mod;
  }

  mpf_class fn(n0, prec), fd(d0, prec);
  mpf_class fa(a_, prec), fb(b_, prec), fa2(a_ * a_, prec);

  for (int k = 0; k < kk; ++k) {
    mpf_class n2(fn * fn, prec), d2(fd * fd, prec), nd(fn * fd, prec);
    mpf_class u(n2 * n2 - 2 * fa * n2 * d2 - 8 * fb * nd * d2 + fa2 * d2 * d2, prec);
    mpf_class v(4 * fd * (fn * n2 + fa * fn * d2 + fb * fd * d2), prec);
    Int g(1);
    if (track) {
      Int n2r = nr * nr % mod, d2r = dr * dr % mod, ndr = nr * dr % mod;
      Int ur = (n2r * n2r - 2 * a_ * n2r * d2r - 8 * b_ * ndr * d2r + a_ * a_ * d2r * d2r) % mod;
      Int vr = (4 * dr * ((nr * n2r + a_ * nr * d2r + b_ * dr * d2r) % mod)) % mod;
      if (ur < 0) ur += mod;
      if (vr < 0) vr += mod;
      g = gcd(gcd(Int(ur % rabs), rabs), gcd(Int(vr % rabs), rabs));
      if (g > 1) {
        // g divides the true values and the modulus, hence the residues.
        mpz_divexact(ur.get_mpz_t(), ur.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(vr.get_mpz_t(), vr.get_mpz_t(), g.get_mpz_t());
      }
      mod /= rabs;
      if (mod > 1) {
        nr = ur % mod;
        dr = vr % mod;
      } else {
        nr = 0;
        dr = 0;
      }
    }
    if (g > 1) {
      mpf_class fg(g, prec);
      fn = mpf_class(u / fg, prec);
      fd = mpf_class(v / fg, prec);
    } else {
      fn = u;
      fd = v;
    }
  }

  mpf_class an(abs(fn), prec), ad(abs(fd), prec);
  mpf_class top = std::max(an, ad);
  if (top == 0) throw std::logic_error("canonical_height: iteration collapsed to zero");
  double h = log_abs(top);
  if (h < 0) h = 0;
  double out = h * std::pow(0.25, kk);
  return out < 0 ? 0.0 : out;
}

double HeightMachine::pairing(const PlanePoint& p, const PlanePoint& q, double tol) const {
  double t = tol / 2;
  return (canonical_height(ctx_->add(p, q), t) - canonical_height(p, t) -
          canonical_height(q, t)) /
         2.0;
}

std::vector<std::vector<double>> HeightMachine::gram(const std::vector<PlanePoint>& pts,
                                                     double tol) const {
  std::size_t n = pts.size();
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double v = (i == j) ? canonical_height(pts[i], tol) : pairing(pts[i], pts[j], tol);
      g[i][j] = v;
      g[j][i] = v;
    }
  return g;
}

double canonical_height(const GroupContext& ctx, const PlanePoint& pt, double tol) {
  return HeightMachine(ctx).canonical_height(pt, tol);
}

double height_pairing(const GroupContext& ctx, const PlanePoint& p, const PlanePoint& q,
                      double tol) {
  return HeightMachine(ctx).pairing(p, q, tol);
}

std::vector<std::vector<double>> gram(const GroupContext& ctx, const std::vector<PlanePoint>& pts,
                                      double tol) {
  return HeightMachine(ctx).gram(pts, tol);
}

HeightReport height_report(const GroupContext& ctx, const PlanePoint& pt, double tol) {
  HeightReport rep;
  rep.tol = tol;
  Int h = pt.height();
  rep.h_naive = (h == 1) ? 0.0 : log_abs(h);
  rep.h_x = hx(ctx.model(), ctx.to_ec(pt));
  rep.h_hat = HeightMachine(ctx).canonical_height(pt, tol);
  return rep;
}

double crude_height_audit(const GroupContext& ctx, const std::vector<XRPair>& pairs, long B) {
  if (pairs.empty()) throw std::invalid_argument("crude_height_audit: no pairs");
  if (B < 2) throw std::invalid_argument("crude_height_audit: B must be >= 2");
  double logB = std::log(static_cast<double>(B));
  double a = 0.0;
  for (const auto& pr : pairs) {
    if (pr.m < 1) throw std::invalid_argument("crude_height_audit: m must be >= 1");
    if (pr.P.height() > B || pr.R.height() > B)
      throw std::invalid_argument("crude_height_audit: P or R exceeds height bound");
    PlanePoint lhs = ctx.sub(ctx.smul(pr.m, pr.Q), ctx.smul(pr.m - 1, pr.R));
    if (!(lhs == pr.P)) throw std::invalid_argument("crude_height_audit: pair not in X_R");
    Int hq = pr.Q.height();
    double contrib = (hq == 1) ? 0.0 : log_abs(hq) / logB;
    if (contrib > a) a = contrib;
  }
  return a;
}

}  // namespace cubic
