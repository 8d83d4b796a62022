#pragma once

#include <array>
#include <vector>

#include "cubic/forms.hpp"
#include "cubic/points.hpp"

namespace cubic {

// Projective point over F_p, normalized so the first nonzero coordinate is 1.
struct FpPoint {
  unsigned long x0 = 0, x1 = 0, x2 = 0;
  bool operator==(const FpPoint& o) const = default;
  bool operator<(const FpPoint& o) const {
    if (x0 != o.x0) return x0 < o.x0;
    if (x1 != o.x1) return x1 < o.x1;
    return x2 < o.x2;
  }
};

// The reduction of a smooth plane cubic mod a good prime, with the same
// chord-tangent group law run verbatim over F_p.
class FpCurve {
 public:
  FpCurve(const CubicForm& f, unsigned long p, const PlanePoint& base);

  unsigned long p() const { return p_; }
  const FpPoint& base() const { return base_; }

  bool on_curve(const FpPoint& a) const;
  FpPoint reduce(const PlanePoint& pt) const;

  std::vector<FpPoint> points() const;  // all of C(F_p), exhaustive

  FpPoint third_intersection(const FpPoint& a, const FpPoint& b) const;
  FpPoint add(const FpPoint& a, const FpPoint& b) const;
  FpPoint neg(const FpPoint& a) const;
  FpPoint smul(long n, const FpPoint& a) const;
  unsigned long order_of(const FpPoint& a) const;  // order in the group

 private:
  unsigned long p_;
  std::array<unsigned long, 10> c_;
  FpPoint base_;
  FpPoint base_tangent_third_;

  unsigned long eval_form(unsigned long a, unsigned long b, unsigned long c) const;
  std::array<unsigned long, 3> gradient(const FpPoint& a) const;
  FpPoint normalize(unsigned long a, unsigned long b, unsigned long c) const;
};

FpPoint reduce_point(const PlanePoint& pt, const CubicForm& f, const Int& p,
                     const PlanePoint& base);

}  // namespace cubic
