#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cubic/forms.hpp"
#include "cubic/points.hpp"

namespace cubic {

// Affine/infinite point on a short Weierstrass curve y^2 = x^3 + alpha x + beta.
struct ECPoint {
  bool infinite = true;
  Rat x, y;

  static ECPoint infinity() { return {}; }
  static ECPoint at(Rat xx, Rat yy) { return {false, std::move(xx), std::move(yy)}; }
  bool operator==(const ECPoint& o) const {
    if (infinite || o.infinite) return infinite == o.infinite;
    return x == o.x && y == o.y;
  }
};

// Short Weierstrass model together with the birational map from the plane
// cubic.  phi_raw / phi_inv_raw work away from a finite exceptional set and
// return nullopt there; GroupContext wraps them with a translation fallback.
class WeierstrassModel {
 public:
  Rat alpha, beta;

  bool flex_base = false;  // base point is a flex

  bool ec_on_curve(const ECPoint& pt) const;
  ECPoint ec_neg(const ECPoint& pt) const;
  ECPoint ec_add(const ECPoint& a, const ECPoint& b) const;
  ECPoint ec_sub(const ECPoint& a, const ECPoint& b) const;
  ECPoint ec_smul(long n, const ECPoint& a) const;

  std::optional<ECPoint> phi_raw(const PlanePoint& pt) const;
  std::optional<PlanePoint> phi_inv_raw(const ECPoint& pt) const;

  static WeierstrassModel build(const CubicForm& f, const PlanePoint& base,
                                const PlanePoint& tangent_third);

 private:

  // Flex path: total projective-linear map L into coordinates where the
  // curve is a X^3 + q Y^2 Z + Z(...), then an affine rescaling.
  std::array<std::array<Rat, 3>, 3> lmap_, lmap_inv_;
  Rat scale_a_, shift_b_;  // X_E = A x + B/3, Y_E = A y

  // Slope-substitution path: integer chart map U with the third tangent
  // intersection at the affine origin, plus the quartic data.
  std::array<std::array<Int, 3>, 3> umap_, umap_inv_;
  std::array<Rat, 2> f1_;  // F_1(1,t) coefficients, constant first
  std::array<Rat, 3> f2_;
  std::array<Rat, 4> f3_;
  Rat t0_;
  std::array<Rat, 4> g_;  // g_[k] = coefficient of s^k in g(s)
};

// The Mordell-Weil group of a smooth plane cubic with a chosen rational base
// point: exact chord-tangent arithmetic plus the Weierstrass change of model.
class GroupContext {
 public:
  GroupContext(const CubicForm& f, const PlanePoint& base);

  const CubicForm& form() const { return f_; }
  const PlanePoint& base() const { return base_; }
  const WeierstrassModel& model() const { return model_; }

  bool on_curve(const PlanePoint& pt) const;
  PlanePoint add(const PlanePoint& a, const PlanePoint& b) const;
  PlanePoint neg(const PlanePoint& a) const;
  PlanePoint sub(const PlanePoint& a, const PlanePoint& b) const;  // psi(P,Q) = P - Q
  PlanePoint smul(long n, const PlanePoint& a) const;

  // Total maps: translation fallback covers the exceptional set of the
  // raw coordinate formulas.
  ECPoint to_ec(const PlanePoint& pt) const;
  PlanePoint from_ec(const ECPoint& pt) const;

 private:
  CubicForm f_;
  PlanePoint base_;
  PlanePoint base_tangent_third_;  // O*O
  WeierstrassModel model_;
  mutable std::vector<PlanePoint> fallback_pool_;

  const std::vector<PlanePoint>& fallback_pool() const;
};

// Third intersection of the line through a and b (tangent when a == b)
// with the cubic, exact over Z.
PlanePoint third_intersection(const CubicForm& f, const PlanePoint& a, const PlanePoint& b);

}  // namespace cubic
