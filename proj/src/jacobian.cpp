#include "cubic/jacobian.hpp"

#include <stdexcept>

namespace cubic {

namespace {

using Mat3 = std::array<std::array<Int, 3>, 3>;
using RMat3 = std::array<std::array<Rat, 3>, 3>;
using Vec3 = std::array<Int, 3>;
using RVec3 = std::array<Rat, 3>;

Mat3 mat_identity() {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return m;
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Vec3 mat_apply(const Mat3& a, const Vec3& v) {
  Vec3 r{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) r[i] += a[i][k] * v[k];
  return r;
}

Int mat_det(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 mat_adjugate(const Mat3& m) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      std::size_t c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      r[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  return r;
}

// Inverse of a matrix with det = +-1.
Mat3 mat_inv_unimodular(const Mat3& m) {
  Int d = mat_det(m);
  Mat3 adj = mat_adjugate(m);
  if (d == 1) return adj;
  if (d == -1) {
    for (auto& row : adj)
      for (auto& x : row) x = -x;
    return adj;
  }
  throw std::logic_error("mat_inv_unimodular: determinant not a unit");
}

RMat3 rmat_from(const Mat3& m) {
  RMat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r[i][j] = Rat(m[i][j]);
  return r;
}

RMat3 rmat_mul(const RMat3& a, const RMat3& b) {
  RMat3 r{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Rat acc = 0;
      for (std::size_t k = 0; k < 3; ++k) acc += a[i][k] * b[k][j];
      acc.canonicalize();
      r[i][j] = acc;
    }
  return r;
}

RVec3 rmat_apply(const RMat3& a, const RVec3& v) {
  RVec3 r;
  for (std::size_t i = 0; i < 3; ++i) {
    Rat acc = 0;
    for (std::size_t k = 0; k < 3; ++k) acc += a[i][k] * v[k];
    acc.canonicalize();
    r[i] = acc;
  }
  return r;
}

RMat3 rmat_inv(const RMat3& m) {
  // Adjugate over a common denominator.
  Rat det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
            m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
            m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  det.canonicalize();
  if (det == 0) throw std::logic_error("rmat_inv: singular matrix");
  RMat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      std::size_t c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      Rat v = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
      v.canonicalize();
      r[i][j] = v;
    }
  return r;
}

PlanePoint point_from_rat(const RVec3& v) {
  Int den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  return PlanePoint(Int(v[0].get_num() * (den / v[0].get_den())),
                    Int(v[1].get_num() * (den / v[1].get_den())),
                    Int(v[2].get_num() * (den / v[2].get_den())));
}

// SL3(Z) matrix sending the primitive vector o to e_target.
Mat3 move_to_axis(const Vec3& o, int target) {
  Mat3 m = mat_identity();
  Vec3 v = o;
  auto reduce_pair = [&](std::size_t i, std::size_t j) {
    // Unimodular row operation making v[j] = 0, v[i] = gcd.
    if (v[i] == 0 && v[j] == 0) return;
    Int g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v[i].get_mpz_t(), v[j].get_mpz_t());
    Int a = v[i] / g, b = v[j] / g;
    Mat3 e = mat_identity();
    e[i][i] = s;  e[i][j] = t;
    e[j][i] = -b; e[j][j] = a;
    m = mat_mul(e, m);
    v = mat_apply(e, v);
  };
  reduce_pair(0, 1);
  reduce_pair(0, 2);
  if (v[0] == -1) {
    Mat3 e = mat_identity();
    e[0][0] = -1; e[1][1] = -1;
    m = mat_mul(e, m);
    v = mat_apply(e, v);
  }
  if (!(v[0] == 1 && v[1] == 0 && v[2] == 0))
    throw std::logic_error("move_to_axis: vector not primitive");
  if (target == 1) {
    Mat3 e{};
    e[0][1] = -1; e[1][0] = 1; e[2][2] = 1;
    m = mat_mul(e, m);
  } else if (target == 2) {
    Mat3 e{};
    e[0][2] = -1; e[1][1] = 1; e[2][0] = 1;
    m = mat_mul(e, m);
  }
  if (mat_det(m) != 1) throw std::logic_error("move_to_axis: not unimodular");
  return m;
}

Rat rat_canon(Rat x) {
  x.canonicalize();
  return x;
}

// poly evaluated at t, coefficients in ascending degree order.
template <std::size_t N>
Rat poly_eval(const std::array<Rat, N>& c, const Rat& t) {
  Rat acc = 0;
  for (std::size_t i = N; i-- > 0;) acc = acc * t + c[i];
  return rat_canon(acc);
}

}  // namespace

PlanePoint third_intersection(const CubicForm& f, const PlanePoint& a, const PlanePoint& b) {
  const Vec3 u{a.x0, a.x1, a.x2};
  Vec3 v, w;
  auto eval3 = [&](const Vec3& x) { return f.eval(x[0], x[1], x[2]); };
  if (eval3(u) != 0) throw form_error("third_intersection: first point not on curve");

  if (a == b) {
    Vec3 g{f.eval_partial(0, a.x0, a.x1, a.x2), f.eval_partial(1, a.x0, a.x1, a.x2),
           f.eval_partial(2, a.x0, a.x1, a.x2)};
    if (g[0] == 0 && g[1] == 0 && g[2] == 0)
      throw form_error("third_intersection: singular point");
    auto crossv = [](const Vec3& p, const Vec3& q) -> Vec3 {
      return {p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]};
    };
    bool found = false;
    for (int i = 0; i < 3 && !found; ++i) {
      Vec3 e{};
      e[static_cast<std::size_t>(i)] = 1;
      Vec3 cand = crossv(g, e);
      if (cand[0] == 0 && cand[1] == 0 && cand[2] == 0) continue;
      Vec3 indep = crossv(cand, u);
      if (indep[0] == 0 && indep[1] == 0 && indep[2] == 0) continue;
      v = cand;
      found = true;
    }
    if (!found) throw std::logic_error("third_intersection: no tangent direction");
    // F(sU + tV) = c12 s t^2 + c03 t^3 on the tangent line.
    Vec3 up{u[0] + v[0], u[1] + v[1], u[2] + v[2]};
    Vec3 um{u[0] - v[0], u[1] - v[1], u[2] - v[2]};
    Int g11 = eval3(up), g1m1 = eval3(um);
    Int c12 = (g11 + g1m1) / 2, c03 = (g11 - g1m1) / 2;
    for (std::size_t i = 0; i < 3; ++i) w[i] = c03 * u[i] - c12 * v[i];
  } else {
    v = {b.x0, b.x1, b.x2};
    if (eval3(v) != 0) throw form_error("third_intersection: second point not on curve");
    // F(sU + tV) = c21 s^2 t + c12 s t^2 through two distinct curve points.
    Vec3 up{u[0] + v[0], u[1] + v[1], u[2] + v[2]};
    Vec3 um{u[0] - v[0], u[1] - v[1], u[2] - v[2]};
    Int g11 = eval3(up), g1m1 = eval3(um);
    Int c21 = (g11 - g1m1) / 2, c12 = (g11 + g1m1) / 2;
    if (c21 == 0 && c12 == 0)
      throw form_error("third_intersection: line contained in cubic");
    for (std::size_t i = 0; i < 3; ++i) w[i] = c12 * u[i] - c21 * v[i];
  }
  if (w[0] == 0 && w[1] == 0 && w[2] == 0)
    throw std::logic_error("third_intersection: degenerate result");
  PlanePoint r(w[0], w[1], w[2]);
  if (f.eval(r.x0, r.x1, r.x2) != 0)
    throw std::logic_error("third_intersection: result off curve");
  return r;
}

bool WeierstrassModel::ec_on_curve(const ECPoint& pt) const {
  if (pt.infinite) return true;
  return rat_canon(pt.y * pt.y - (pt.x * pt.x * pt.x + alpha * pt.x + beta)) == 0;
}

ECPoint WeierstrassModel::ec_neg(const ECPoint& pt) const {
  if (pt.infinite) return pt;
  return ECPoint::at(pt.x, rat_canon(-pt.y));
}

ECPoint WeierstrassModel::ec_add(const ECPoint& a, const ECPoint& b) const {
  if (a.infinite) return b;
  if (b.infinite) return a;
  if (a.x == b.x && rat_canon(a.y + b.y) == 0) return ECPoint::infinity();
  Rat lam;
  if (a.x == b.x) {
    lam = rat_canon((3 * a.x * a.x + alpha) / (2 * a.y));
  } else {
    lam = rat_canon((b.y - a.y) / (b.x - a.x));
  }
  Rat x3 = rat_canon(lam * lam - a.x - b.x);
  Rat y3 = rat_canon(lam * (a.x - x3) - a.y);
  return ECPoint::at(x3, y3);
}

ECPoint WeierstrassModel::ec_sub(const ECPoint& a, const ECPoint& b) const {
  return ec_add(a, ec_neg(b));
}

ECPoint WeierstrassModel::ec_smul(long n, const ECPoint& a) const {
  bool flip = n < 0;
  unsigned long m = flip ? static_cast<unsigned long>(-(n + 1)) + 1 : static_cast<unsigned long>(n);
  ECPoint acc = ECPoint::infinity();
  ECPoint q = a;
  while (m) {
    if (m & 1) acc = ec_add(acc, q);
    m >>= 1;
    if (m) q = ec_add(q, q);
  }
  return flip ? ec_neg(acc) : acc;
}

std::optional<ECPoint> WeierstrassModel::phi_raw(const PlanePoint& pt) const {
  if (flex_base) {
    RVec3 v = rmat_apply(lmap_, {Rat(pt.x0), Rat(pt.x1), Rat(pt.x2)});
    if (v[2] == 0) return ECPoint::infinity();  // flex tangent meets C only at O
    Rat xa = rat_canon(v[0] / v[2]);
    Rat ya = rat_canon(v[1] / v[2]);
    ECPoint r = ECPoint::at(rat_canon(scale_a_ * xa + shift_b_ / 3), rat_canon(scale_a_ * ya));
    if (!ec_on_curve(r)) throw std::logic_error("phi: image off Weierstrass curve");
    return r;
  }
  Vec3 w = mat_apply(umap_, {pt.x0, pt.x1, pt.x2});
  if (w[2] == 0) return std::nullopt;
  Rat X = rat_canon(Rat(w[0]) / Rat(w[2]));
  Rat Y = rat_canon(Rat(w[1]) / Rat(w[2]));
  if (X == 0) return std::nullopt;
  Rat t = rat_canon(Y / X);
  if (t == t0_) return ECPoint::infinity();  // only the base point has the base slope
  Rat u = rat_canon(2 * poly_eval(f3_, t) * X + poly_eval(f2_, t));
  Rat s = rat_canon(1 / (t - t0_));
  Rat x1 = rat_canon(g_[3] * s);
  ECPoint r = ECPoint::at(rat_canon(x1 + g_[2] / 3), rat_canon(g_[3] * u * s * s));
  if (!ec_on_curve(r)) throw std::logic_error("phi: image off Weierstrass curve");
  return r;
}

std::optional<PlanePoint> WeierstrassModel::phi_inv_raw(const ECPoint& pt) const {
  if (flex_base) {
    if (pt.infinite) return std::nullopt;  // handled by caller via the base point
    Rat xa = rat_canon((pt.x - shift_b_ / 3) / scale_a_);
    Rat ya = rat_canon(pt.y / scale_a_);
    return point_from_rat(rmat_apply(lmap_inv_, {xa, ya, Rat(1)}));
  }
  if (pt.infinite) return std::nullopt;
  Rat x1 = rat_canon(pt.x - g_[2] / 3);
  Rat s = rat_canon(x1 / g_[3]);
  if (s == 0) return std::nullopt;
  Rat t = rat_canon(t0_ + 1 / s);
  Rat u = rat_canon(pt.y / (g_[3] * s * s));
  Rat f3t = poly_eval(f3_, t);
  Rat X;
  if (f3t != 0) {
    X = rat_canon((u - poly_eval(f2_, t)) / (2 * f3t));
  } else {
    Rat f2t = poly_eval(f2_, t);
    if (f2t == 0 || u != f2t) return std::nullopt;
    X = rat_canon(-poly_eval(f1_, t) / f2t);
  }
  Rat Y = rat_canon(t * X);
  RVec3 plane = rmat_apply(rmat_from(umap_inv_), {X, Y, Rat(1)});
  return point_from_rat(plane);
}

WeierstrassModel WeierstrassModel::build(const CubicForm& f, const PlanePoint& base,
                                         const PlanePoint& tangent_third) {
  WeierstrassModel m;
  const Vec3 o{base.x0, base.x1, base.x2};

  if (tangent_third == base) {
    m.flex_base = true;
    // Move O to [0:1:0].
    Mat3 m1 = move_to_axis(o, 1);
    CubicForm g1 = f.transformed(mat_inv_unimodular(m1));
    // Tangent at [0:1:0] is g0 X + g2 Z = 0 (the Y component vanishes by Euler).
    Int ga = g1.eval_partial(0, 0, 1, 0);
    Int gc = g1.eval_partial(2, 0, 1, 0);
    Int gg, s, t;
    mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), ga.get_mpz_t(), gc.get_mpz_t());
    Mat3 m2 = mat_identity();
    m2[0][0] = t;       m2[0][2] = -s;
    m2[2][0] = ga / gg; m2[2][2] = gc / gg;
    if (mat_det(m2) != 1) throw std::logic_error("build_model: tangent move not unimodular");
    Mat3 um = mat_mul(m2, m1);
    CubicForm g2 = f.transformed(mat_inv_unimodular(um));
    const auto& c = g2.coeffs();
    if (c[1] != 0 || c[3] != 0 || c[6] != 0)
      throw std::logic_error("build_model: flex normal form failed");
    Int a = c[0], q = c[7], l1 = c[4], l3 = c[8];
    if (a == 0 || q == 0) throw std::logic_error("build_model: degenerate flex chart");
    // Complete the square in Y: Y -> Y + (l1 X + l3 Z) / (2q).
    RMat3 shift = rmat_from(mat_identity());
    shift[1][0] = rat_canon(Rat(l1) / (2 * Rat(q)));
    shift[1][2] = rat_canon(Rat(l3) / (2 * Rat(q)));
    m.lmap_ = rmat_mul(shift, rmat_from(um));
    m.lmap_inv_ = rmat_inv(m.lmap_);
    Rat cc = rat_canon(Rat(c[2]) - Rat(l1 * l1) / (4 * Rat(q)));
    Rat dd = rat_canon(Rat(c[5]) - Rat(l1 * l3) / (2 * Rat(q)));
    Rat ee = rat_canon(Rat(c[9]) - Rat(l3 * l3) / (4 * Rat(q)));
    Rat A = rat_canon(Rat(-a) / Rat(q));
    Rat B = rat_canon(-cc / Rat(q));
    Rat C = rat_canon(-dd / Rat(q));
    Rat D = rat_canon(-ee / Rat(q));
    m.scale_a_ = A;
    m.shift_b_ = B;
    m.alpha = rat_canon(C * A - B * B / 3);
    m.beta = rat_canon(2 * B * B * B / 27 - B * C * A / 3 + A * A * D);
  } else {
    m.flex_base = false;
    // Move the third tangent intersection to the affine origin [0:0:1].
    Mat3 m1 = move_to_axis({tangent_third.x0, tangent_third.x1, tangent_third.x2}, 2);
    // Small chart adjustments fixing [0:0:1], keeping O affine with
    // well-defined slope from the origin.
    bool placed = false;
    Mat3 um{};
    Vec3 oc{};
    for (long a2 = -2; a2 <= 2 && !placed; ++a2)
      for (long b2 = -2; b2 <= 2 && !placed; ++b2)
        for (long c2 = -2; c2 <= 2 && !placed; ++c2)
          for (long d2 = -2; d2 <= 2 && !placed; ++d2) {
            if (a2 * d2 - b2 * c2 != 1) continue;
            Mat3 v = mat_identity();
            v[0][0] = a2; v[0][1] = b2;
            v[1][0] = c2; v[1][1] = d2;
            Mat3 w = mat_mul(v, m1);
            Vec3 cand = mat_apply(w, o);
            if (cand[2] == 0 || cand[0] == 0) continue;
            um = w;
            oc = cand;
            placed = true;
          }
    if (!placed) throw std::logic_error("build_model: no usable affine chart");
    m.umap_ = um;
    m.umap_inv_ = mat_inv_unimodular(um);
    CubicForm g = f.transformed(m.umap_inv_);
    const auto& c = g.coeffs();
    if (c[9] != 0) throw std::logic_error("build_model: origin not on chart curve");
    // Degree parts of G(X, Y, 1): linear f1, quadratic f2, cubic f3 in the slope t.
    m.f1_ = {Rat(c[5]), Rat(c[8])};
    m.f2_ = {Rat(c[2]), Rat(c[4]), Rat(c[7])};
    m.f3_ = {Rat(c[0]), Rat(c[1]), Rat(c[3]), Rat(c[6])};
    m.t0_ = rat_canon(Rat(oc[1]) / Rat(oc[0]));
    // E(t) = f2^2 - 4 f1 f3; the base slope is a root because the tangent
    // at O passes through the origin.
    std::array<Rat, 5> e{};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) e[i + j] += m.f2_[i] * m.f2_[j];
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 4; ++j) e[i + j] -= 4 * m.f1_[i] * m.f3_[j];
    for (auto& x : e) x.canonicalize();
    if (poly_eval(e, m.t0_) != 0)
      throw std::logic_error("build_model: base slope is not a root of the quartic");
    // Taylor shift to t = t0 + w; coefficient of w^k lands at s^(4-k).
    std::array<Rat, 5> sh = e;
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t i = 4; i-- > k;) sh[i] = rat_canon(sh[i] + m.t0_ * sh[i + 1]);
    m.g_ = {sh[4], sh[3], sh[2], sh[1]};
    if (m.g_[3] == 0) throw std::logic_error("build_model: quartic has a repeated root");
    const Rat& g3 = m.g_[3];
    const Rat& g2 = m.g_[2];
    const Rat& g1 = m.g_[1];
    const Rat& g0 = m.g_[0];
    m.alpha = rat_canon(g1 * g3 - g2 * g2 / 3);
    m.beta = rat_canon(2 * g2 * g2 * g2 / 27 - g2 * g1 * g3 / 3 + g0 * g3 * g3);
  }
  if (rat_canon(4 * m.alpha * m.alpha * m.alpha + 27 * m.beta * m.beta) == 0)
    throw std::logic_error("build_model: singular Weierstrass model");
  return m;
}

GroupContext::GroupContext(const CubicForm& f, const PlanePoint& base)
    : f_(f.normalized()), base_(base) {
  if (!f_.is_smooth()) throw form_error("GroupContext: singular form");
  if (!on_curve(base_)) throw form_error("GroupContext: base point not on curve");
  base_tangent_third_ = cubic::third_intersection(f_, base_, base_);
  model_ = WeierstrassModel::build(f_, base_, base_tangent_third_);
}

bool GroupContext::on_curve(const PlanePoint& pt) const {
  return !pt.is_zero() && f_.eval(pt.x0, pt.x1, pt.x2) == 0;
}

PlanePoint GroupContext::add(const PlanePoint& a, const PlanePoint& b) const {
  return cubic::third_intersection(f_, base_, cubic::third_intersection(f_, a, b));
}

PlanePoint GroupContext::neg(const PlanePoint& a) const {
  return cubic::third_intersection(f_, a, base_tangent_third_);
}

PlanePoint GroupContext::sub(const PlanePoint& a, const PlanePoint& b) const {
  return add(a, neg(b));
}

PlanePoint GroupContext::smul(long n, const PlanePoint& a) const {
  bool flip = n < 0;
  unsigned long m = flip ? static_cast<unsigned long>(-(n + 1)) + 1 : static_cast<unsigned long>(n);
  PlanePoint acc = base_;
  PlanePoint q = a;
  bool have = false;
  while (m) {
    if (m & 1) {
      acc = have ? add(acc, q) : q;
      have = true;
    }
    m >>= 1;
    if (m) q = add(q, q);
  }
  if (!have) return base_;
  return flip ? neg(acc) : acc;
}

const std::vector<PlanePoint>& GroupContext::fallback_pool() const {
  if (fallback_pool_.empty()) {
    fallback_pool_ = enumerate_points(f_, 8);
    if (fallback_pool_.size() < 4) {
      auto more = enumerate_points(f_, 40);
      fallback_pool_ = std::move(more);
    }
  }
  return fallback_pool_;
}

ECPoint GroupContext::to_ec(const PlanePoint& pt) const {
  if (!on_curve(pt)) throw form_error("to_ec: point not on curve");
  if (pt == base_) return ECPoint::infinity();
  if (auto r = model_.phi_raw(pt)) return *r;
  // Exceptional point of the coordinate formulas: translate around it.
  for (const auto& d : fallback_pool()) {
    auto bd = model_.phi_raw(d);
    if (!bd || bd->infinite) continue;
    auto ad = model_.phi_raw(add(pt, d));
    if (!ad) continue;
    return model_.ec_sub(*ad, *bd);
  }
  throw std::logic_error("to_ec: no usable translation");
}

PlanePoint GroupContext::from_ec(const ECPoint& pt) const {
  if (!model_.ec_on_curve(pt)) throw form_error("from_ec: point not on model");
  if (pt.infinite) return base_;
  if (auto r = model_.phi_inv_raw(pt)) {
    if (!on_curve(*r)) throw std::logic_error("from_ec: preimage off curve");
    return *r;
  }
  for (const auto& d : fallback_pool()) {
    auto bd = model_.phi_raw(d);
    if (!bd || bd->infinite) continue;
    auto q = model_.phi_inv_raw(model_.ec_add(pt, *bd));
    if (!q) continue;
    if (!on_curve(*q)) throw std::logic_error("from_ec: preimage off curve");
    return sub(*q, d);
  }
  throw std::logic_error("from_ec: no usable translation");
}

}  // namespace cubic
