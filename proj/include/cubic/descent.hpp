#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cubic/heights.hpp"
#include "cubic/jacobian.hpp"

namespace cubic {

struct descent_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct not_in_span_error : descent_error {
  using descent_error::descent_error;
};

// Generators and an explicit torsion group table for the Mordell-Weil group.
// The torsion list always starts with the identity (the base point) and is
// closed under the group law.
class MordellWeilBasis {
 public:
  static MordellWeilBasis from_points(const GroupContext& ctx,
                                      std::vector<PlanePoint> generators,
                                      std::vector<PlanePoint> torsion,
                                      double tol = kDefaultHeightTol,
                                      bool verified = true);

  std::size_t rank() const { return generators_.size(); }
  const std::vector<PlanePoint>& generators() const { return generators_; }
  const std::vector<PlanePoint>& torsion() const { return torsion_; }
  const std::vector<std::vector<double>>& gram() const { return gram_; }
  double tol() const { return tol_; }
  bool verified() const { return verified_; }  // false for bounded-search fallback

  // Finite-group helpers on torsion indices.
  std::size_t torsion_index(const PlanePoint& pt) const;  // throws if absent
  std::size_t torsion_add(std::size_t i, std::size_t j) const;
  std::size_t torsion_neg(std::size_t i) const;
  std::size_t torsion_mul(long m, std::size_t i) const;

 private:
  std::vector<PlanePoint> generators_;
  std::vector<PlanePoint> torsion_;  // index 0 = identity
  std::vector<std::vector<std::size_t>> add_table_;
  std::vector<std::vector<double>> gram_;
  double tol_ = kDefaultHeightTol;
  bool verified_ = true;
};

// Parses lines "gen x0 x1 x2" / "tor x0 x1 x2" ('#' comments) and validates.
MordellWeilBasis load_mw_basis(const std::string& path, const GroupContext& ctx,
                               double tol = kDefaultHeightTol);

// Bounded point search up to height b0; certifies only a rank lower bound.
MordellWeilBasis bounded_search_basis(const GroupContext& ctx, long b0 = 100,
                                      double tol = kDefaultHeightTol);

struct MWCoordinates {
  std::vector<long> n;          // generator exponents
  std::size_t torsion = 0;      // index into the torsion table
};

// Exact decomposition D = sum n_i g_i + t, found by rounding the
// pairing-vector solve and verified exactly in the plane group law.
MWCoordinates coordinates(const GroupContext& ctx, const MordellWeilBasis& basis,
                          const PlanePoint& d);

// P ~_m Q iff psi(P,Q) = P - Q lies in m * Jac(C)(Q).
bool equivalent_m(const GroupContext& ctx, const MordellWeilBasis& basis,
                  const PlanePoint& p, const PlanePoint& q, long m);

struct DescentClass {
  std::vector<long> n_mod;      // generator exponents mod m
  std::size_t torsion_coset;    // coset id of the torsion part in T / mT
  PlanePoint representative;    // lexicographically least member
  std::vector<PlanePoint> members;
};

std::vector<DescentClass> partition(const GroupContext& ctx, const MordellWeilBasis& basis,
                                    const std::vector<PlanePoint>& points, long m);

// Q with smul(m, Q) = D, when D is divisible; deterministic preimage choice.
std::optional<PlanePoint> divide_by_m(const GroupContext& ctx, const MordellWeilBasis& basis,
                                      const PlanePoint& d, long m);

// For each P in the class of R, the exact pair (P, Q) with
// P = m Q - (m-1) R in the plane group law.
std::vector<XRPair> xr_pairs_for_class(const GroupContext& ctx, const MordellWeilBasis& basis,
                                       const DescentClass& k, const PlanePoint& r, long m,
                                       long b);

}  // namespace cubic
