#pragma once

#include <vector>

#include "cubic/jacobian.hpp"

namespace cubic {

struct HeightReport {
  double h_naive = 0;
  double h_x = 0;
  double h_hat = 0;
  double tol = 0;
};

// Witness pair for the descent curve X_R: P = m*Q - (m-1)*R in the plane
// group law, held exactly.  Constructed by the descent module.
struct XRPair {
  PlanePoint P, Q, R;
  long m = 1;
};

inline constexpr double kDefaultHeightTol = 1e-8;

// log max(|num|, |den|) of the x-coordinate; infinity -> 0 by convention.
double hx(const WeierstrassModel& model, const ECPoint& pt);

// Canonical-height engine for one curve: precomputes the duplication
// resultant and cofactor bounds once, then each height runs the doubling
// limit 4^{-n} h_x(2^n P) with a certified geometric tail.
class HeightMachine {
 public:
  explicit HeightMachine(const GroupContext& ctx);

  double canonical_height(const PlanePoint& pt, double tol = kDefaultHeightTol) const;
  double pairing(const PlanePoint& p, const PlanePoint& q,
                 double tol = kDefaultHeightTol) const;
  std::vector<std::vector<double>> gram(const std::vector<PlanePoint>& pts,
                                        double tol = kDefaultHeightTol) const;

  const GroupContext& ctx() const { return *ctx_; }

 private:
  const GroupContext* ctx_;
  Int a_, b_;       // integral model y^2 = x^3 + a x + b
  Int scale_;       // x_int = scale^2 * x_model
  Int res_;         // gcd of each duplication step divides this
  double log_l1_;   // one-step height increase bound
  double log_c1_;   // one-step height decrease bound
  double step_bits_;  // certified precision loss per floating step
};

double canonical_height(const GroupContext& ctx, const PlanePoint& pt,
                        double tol = kDefaultHeightTol);
double height_pairing(const GroupContext& ctx, const PlanePoint& p, const PlanePoint& q,
                      double tol = kDefaultHeightTol);
std::vector<std::vector<double>> gram(const GroupContext& ctx,
                                      const std::vector<PlanePoint>& pts,
                                      double tol = kDefaultHeightTol);

HeightReport height_report(const GroupContext& ctx, const PlanePoint& pt,
                           double tol = kDefaultHeightTol);

// Measured exponent A = max log H(Q) / log B over exact descent pairs.
double crude_height_audit(const GroupContext& ctx, const std::vector<XRPair>& pairs, long B);

}  // namespace cubic
