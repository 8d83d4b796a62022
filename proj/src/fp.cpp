#include "cubic/fp.hpp"

#include <stdexcept>

namespace cubic {

namespace {

using u64 = unsigned long;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((u128)a * b % p); }
u64 addmod(u64 a, u64 b, u64 p) { return (a + b) % p; }
u64 submod(u64 a, u64 b, u64 p) { return (a + p - b) % p; }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) {
  if (a % p == 0) throw std::domain_error("invmod: zero");
  return powmod(a % p, p - 2, p);
}

u64 mod_of(const Int& x, u64 p) {
  Int r = x % Int(p);
  if (r < 0) r += Int(p);
  return r.get_ui();
}

std::array<u64, 3> cross(const std::array<u64, 3>& a, const std::array<u64, 3>& b, u64 p) {
  return {submod(mulmod(a[1], b[2], p), mulmod(a[2], b[1], p), p),
          submod(mulmod(a[2], b[0], p), mulmod(a[0], b[2], p), p),
          submod(mulmod(a[0], b[1], p), mulmod(a[1], b[0], p), p)};
}

bool is_zero3(const std::array<u64, 3>& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

}  // namespace

FpCurve::FpCurve(const CubicForm& f, unsigned long p, const PlanePoint& base) : p_(p) {
  if (p < 5) throw form_error("FpCurve: p must be >= 5");
  if (!f.is_good_prime(Int(p))) throw form_error("FpCurve: p is a prime of bad reduction");
  const CubicForm g = f.normalized();
  for (int i = 0; i < 10; ++i) c_[static_cast<std::size_t>(i)] = mod_of(g.coeff(i), p);
  if (g.eval(base.x0, base.x1, base.x2) != 0)
    throw form_error("FpCurve: base point not on curve");
  base_ = reduce(base);
  base_tangent_third_ = third_intersection(base_, base_);
}

unsigned long FpCurve::eval_form(u64 a, u64 b, u64 c) const {
  u64 acc = 0;
  const u64 x[3] = {a % p_, b % p_, c % p_};
  for (int i = 0; i < 10; ++i) {
    u64 t = c_[static_cast<std::size_t>(i)];
    if (t == 0) continue;
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < kCubicExponents[i][v]; ++k) t = mulmod(t, x[v], p_);
    acc = addmod(acc, t, p_);
  }
  return acc;
}

FpPoint FpCurve::normalize(u64 a, u64 b, u64 c) const {
  a %= p_; b %= p_; c %= p_;
  u64 s;
  if (a != 0) s = invmod(a, p_);
  else if (b != 0) s = invmod(b, p_);
  else if (c != 0) s = invmod(c, p_);
  else throw std::logic_error("FpCurve: zero triple");
  return {mulmod(a, s, p_), mulmod(b, s, p_), mulmod(c, s, p_)};
}

bool FpCurve::on_curve(const FpPoint& a) const { return eval_form(a.x0, a.x1, a.x2) == 0; }

FpPoint FpCurve::reduce(const PlanePoint& pt) const {
  u64 a = mod_of(pt.x0, p_), b = mod_of(pt.x1, p_), c = mod_of(pt.x2, p_);
  if (a == 0 && b == 0 && c == 0)
    throw form_error("FpCurve: point reduces to zero triple (not primitive mod p)");
  FpPoint r = normalize(a, b, c);
  if (!on_curve(r)) throw form_error("FpCurve: reduced point not on curve");
  return r;
}

std::vector<FpPoint> FpCurve::points() const {
  std::vector<FpPoint> out;
  // Charts [1:b:c], [0:1:c], [0:0:1] cover P^2(F_p) exactly once.
  for (u64 b = 0; b < p_; ++b)
    for (u64 c = 0; c < p_; ++c)
      if (eval_form(1, b, c) == 0) out.push_back({1, b, c});
  for (u64 c = 0; c < p_; ++c)
    if (eval_form(0, 1, c) == 0) out.push_back({0, 1, c});
  if (eval_form(0, 0, 1) == 0) out.push_back({0, 0, 1});
  return out;
}

std::array<unsigned long, 3> FpCurve::gradient(const FpPoint& a) const {
  const u64 x[3] = {a.x0, a.x1, a.x2};
  std::array<u64, 3> g{0, 0, 0};
  for (int i = 0; i < 10; ++i) {
    u64 ci = c_[static_cast<std::size_t>(i)];
    if (ci == 0) continue;
    for (int v = 0; v < 3; ++v) {
      int e = kCubicExponents[i][v];
      if (e == 0) continue;
      u64 t = mulmod(ci, static_cast<u64>(e), p_);
      for (int w = 0; w < 3; ++w) {
        int ew = kCubicExponents[i][w] - (w == v ? 1 : 0);
        for (int k = 0; k < ew; ++k) t = mulmod(t, x[w], p_);
      }
      g[static_cast<std::size_t>(v)] = addmod(g[static_cast<std::size_t>(v)], t, p_);
    }
  }
  return g;
}

FpPoint FpCurve::third_intersection(const FpPoint& a, const FpPoint& b) const {
  const std::array<u64, 3> U{a.x0, a.x1, a.x2};
  const u64 inv2 = invmod(2, p_);
  std::array<u64, 3> V;
  std::array<u64, 3> W;
  if (a == b) {
    auto g = gradient(a);
    if (is_zero3(g)) throw std::logic_error("FpCurve: singular reduction point");
    // Pick a second point of the tangent line, independent of U.
    const std::array<std::array<u64, 3>, 3> basis{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    bool ok = false;
    for (const auto& e : basis) {
      V = cross(g, e, p_);
      if (!is_zero3(V) && !is_zero3(cross(V, U, p_))) { ok = true; break; }
    }
    if (!ok) throw std::logic_error("FpCurve: no tangent direction");
    u64 g11 = eval_form(addmod(U[0], V[0], p_), addmod(U[1], V[1], p_), addmod(U[2], V[2], p_));
    u64 g1m1 = eval_form(submod(U[0], V[0], p_), submod(U[1], V[1], p_), submod(U[2], V[2], p_));
    u64 c12 = mulmod(addmod(g11, g1m1, p_), inv2, p_);
    u64 c03 = mulmod(submod(g11, g1m1, p_), inv2, p_);
    for (int i = 0; i < 3; ++i) {
      auto k = static_cast<std::size_t>(i);
      W[k] = submod(mulmod(c03, U[k], p_), mulmod(c12, V[k], p_), p_);
    }
  } else {
    V = {b.x0, b.x1, b.x2};
    u64 g11 = eval_form(addmod(U[0], V[0], p_), addmod(U[1], V[1], p_), addmod(U[2], V[2], p_));
    u64 g1m1 = eval_form(submod(U[0], V[0], p_), submod(U[1], V[1], p_), submod(U[2], V[2], p_));
    u64 c21 = mulmod(submod(g11, g1m1, p_), inv2, p_);
    u64 c12 = mulmod(addmod(g11, g1m1, p_), inv2, p_);
    if (c21 == 0 && c12 == 0) throw std::logic_error("FpCurve: line contained in cubic");
    for (int i = 0; i < 3; ++i) {
      auto k = static_cast<std::size_t>(i);
      W[k] = submod(mulmod(c12, U[k], p_), mulmod(c21, V[k], p_), p_);
    }
  }
  if (is_zero3(W)) throw std::logic_error("FpCurve: degenerate third intersection");
  FpPoint r = normalize(W[0], W[1], W[2]);
  if (!on_curve(r)) throw std::logic_error("FpCurve: third intersection off curve");
  return r;
}

FpPoint FpCurve::add(const FpPoint& a, const FpPoint& b) const {
  return third_intersection(base_, third_intersection(a, b));
}

FpPoint FpCurve::neg(const FpPoint& a) const {
  return third_intersection(a, base_tangent_third_);
}

FpPoint FpCurve::smul(long n, const FpPoint& a) const {
  FpPoint q = a;
  bool flip = n < 0;
  unsigned long m = flip ? static_cast<unsigned long>(-(n + 1)) + 1 : static_cast<unsigned long>(n);
  FpPoint acc = base_;
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

unsigned long FpCurve::order_of(const FpPoint& a) const {
  FpPoint q = a;
  unsigned long n = 1;
  while (!(q == base_)) {
    q = add(q, a);
    ++n;
    if (n > 3 * (p_ + 1)) throw std::logic_error("FpCurve: order search overran Hasse bound");
  }
  return n;
}

FpPoint reduce_point(const PlanePoint& pt, const CubicForm& f, const Int& p,
                     const PlanePoint& base) {
  if (!p.fits_ulong_p()) throw form_error("reduce_point: prime too large");
  FpCurve curve(f, p.get_ui(), base);
  return curve.reduce(pt);
}

}  // namespace cubic
