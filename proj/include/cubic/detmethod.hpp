#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "cubic/descent.hpp"
#include "cubic/fp.hpp"
#include "cubic/heights.hpp"
#include "cubic/jacobian.hpp"
#include "cubic/linalg.hpp"

namespace cubic {

struct detmethod_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Monomial x^e y^f on P^2 x P^2 with |e| = a, |f| = b.  The global order is
// descending lexicographic on (e, f) within fixed bi-degree.
struct BiMonomial {
  std::array<int, 3> e{};
  std::array<int, 3> f{};
  bool operator==(const BiMonomial& o) const = default;
};

// All bi-degree (a,b) monomials in the fixed global order.
std::vector<BiMonomial> all_bimonomials(int a, int b);

Int eval_bimonomial(const BiMonomial& m, const PlanePoint& p, const PlanePoint& q);
unsigned long eval_bimonomial_mod(const BiMonomial& m, const FpPoint& p, const FpPoint& q,
                                  unsigned long mod);

struct MonomialBasis {
  int a = 0, b = 0;
  long m = 1;
  std::vector<BiMonomial> elems;  // pivot monomials, global order
  std::size_t E() const { return elems.size(); }
};

// dim of bi-degree (a,b) forms modulo those vanishing on the descent curve:
// 3(m^2 a + b) under the hypothesis 1/a + m^2/b < 3.
long dimension_formula(long a, long b, long m);

// Pairs (P', Q') over F_q with P' = m Q' - (m-1) R in the reduced group law;
// Q' ranges over distinct points of C(F_q), at most `count` of them.
std::vector<std::pair<FpPoint, FpPoint>> xr_samples_mod_q(const GroupContext& ctx,
                                                          const PlanePoint& r, long m,
                                                          unsigned long q, std::size_t count);

// Pivot monomials of the evaluation-rank column reduction at >= E+10 samples
// mod a deterministic good prime; retried with a new prime on dimension
// mismatch, then an error.
MonomialBasis monomial_basis(const GroupContext& ctx, const PlanePoint& r, long m, int a,
                             int b);

// Index i in {1,2} with dF/dy_i(qstar) a p-unit; requires qstar.x0 a unit.
int partials_unit(const CubicForm& f, const FpPoint& qstar, unsigned long p);

// Truncated implicit solution z1 = f_n(z2) mod p^n around the residue point,
// in the chart perm[0] = unit coordinate, perm[1] = z1, perm[2] = z2.
struct HenselPoly {
  unsigned long p = 0;
  int n = 0;
  Int pn;
  std::array<int, 3> perm{0, 1, 2};
  Int z2star;            // mod p^n lift of the base z2
  std::vector<Int> c;    // coefficients of (z2 - z2star)^k, k < n, mod p^n

  Int eval(const Int& z2) const;  // representative mod p^n
  // v_p(z1 - f_n(z2)) for a rational point in the residue class, capped at n.
  unsigned long defect_valuation(const PlanePoint& q) const;
};
HenselPoly hensel_implicit(const CubicForm& f, const FpPoint& qstar, unsigned long p, int n);

struct ResidueBucket {
  FpPoint qbar;
  int unit_coord = 0;       // coordinate of Q* that is a p-unit
  int dependent_coord = 1;  // z1 (unit partial), after partials_unit
  int free_coord = 2;       // z2
  std::vector<XRPair> pairs;
};

// Buckets the pairs by the reduction of Q mod p, recording the chart data
// that fixes the representative normalization.  Primitive integer triples
// differ from the normalized representatives by p-adic units, which rescale
// determinant rows by units and leave v_p(det) unchanged.
std::vector<ResidueBucket> residue_buckets(const GroupContext& ctx,
                                           const std::vector<XRPair>& pairs, const Int& p);

struct EvalMatrix {
  IntMat entries;                  // bucket order x basis order
  std::vector<BiMonomial> cols;
};
EvalMatrix build_matrix(const ResidueBucket& bucket, const MonomialBasis& basis);

struct MinorValuation {
  Int det;
  bool zero = false;
  unsigned long valuation = 0;  // meaningful when det != 0
};
// Exact determinant and p-adic valuation; asserts v_p >= E(E-1)/2 or det = 0.
MinorValuation minor_valuation(const IntMat& delta, const Int& p);

// |det| <= E^E B^(E(a+Ab)), compared through logarithms.
bool archimedean_bound(const IntMat& delta, long B, long a, long b, double A);

struct PrimeChoice {
  Int p;
  double threshold = 0;  // P = c0 log B + 4 B^(2(a+Ab)/(E-1))
  bool widened = false;  // had to search (P, 4P]
};
PrimeChoice choose_prime(long B, long a, long b, std::size_t E, double A, double c0,
                         const CubicForm& f);

struct AuxiliaryForm {
  std::vector<BiMonomial> support;
  std::vector<Int> coeffs;  // primitive integer kernel vector
};
// Exact kernel vector of the bucket matrix; throws when rank = E.
AuxiliaryForm auxiliary_form(const EvalMatrix& matrix, const MonomialBasis& basis);

Int eval_auxiliary(const AuxiliaryForm& g, const PlanePoint& p, const PlanePoint& q);
unsigned long eval_auxiliary_mod(const AuxiliaryForm& g, const FpPoint& p, const FpPoint& q,
                                 unsigned long mod);

// Pairs whose Q all share one residue class mod p: Q_j = R + j*k*T with
// k = order of the reduction of T, and P_j = m Q_j - (m-1) R exactly.
std::vector<XRPair> bucket_family(const GroupContext& ctx, const PlanePoint& t,
                                  const PlanePoint& r, long m, const Int& p, std::size_t count);

struct BucketReport {
  FpPoint qbar;
  std::size_t size = 0;
  bool aux_ok = false;
  std::vector<Int> aux_coeffs;
  std::string note;
};

struct ClassBoundReport {
  long m = 1, a = 1, b = 1, B = 3;
  double A = 1.0;      // applied crude-height exponent
  Int p;
  bool widened = false;
  bool forced = false; // debug forced prime (vanishing guarantee void)
  std::size_t E = 0;
  std::vector<BucketReport> buckets;
  bool ok = false;
  Int per_class_bound;  // p * 3(m^2 a + b)
  Int overall_bound;    // m^r * p * 3(m^2 a + b)
};

// Full per-class pipeline: pairs -> buckets at the chosen prime -> per-bucket
// auxiliary forms, with the bucket-size bound asserted on the actual data.
ClassBoundReport class_bound(const GroupContext& ctx, const MordellWeilBasis& basis,
                             const DescentClass& k, const PlanePoint& r, long m, long a,
                             long b, long B, std::optional<double> a_exponent = std::nullopt,
                             double c0 = 30.0, std::optional<Int> force_prime = std::nullopt);

}  // namespace cubic
