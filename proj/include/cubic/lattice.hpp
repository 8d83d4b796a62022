#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubic/descent.hpp"
#include "cubic/linalg.hpp"
#include "cubic/points.hpp"

namespace cubic {

struct lattice_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Positive-definite quadratic form on the Mordell-Weil lattice.  The gram
// matrix carries the height tolerance it was computed at; when the form is
// known exactly (test oracles, unit examples) the rational matrix is kept and
// boundary ties are resolved exactly.
struct HeightForm {
  std::size_t r = 0;
  std::vector<std::vector<double>> gram;
  double tol = 0;
  std::optional<RatMat> exact;
  std::string source;

  static HeightForm from_rational(RatMat g, std::string source = "");
  static HeightForm from_gram(std::vector<std::vector<double>> g, double tol,
                              std::string source = "");

  double value(const std::vector<long>& n) const;
};

struct EllipsoidCount {
  long long count = 0;      // integer vectors with Q(n) <= rho
  long long ambiguous = 0;  // vectors within the tolerance margin of the boundary
};

// Exact depth-first count with interval pruning from the decomposition
// Q = sum d_i (n_i + sum_{j>i} u_ij n_j)^2.
EllipsoidCount ellipsoid_count(const HeightForm& form, double rho);
EllipsoidCount ellipsoid_count(const HeightForm& form, const Rat& rho);  // needs exact gram

struct MinimaReport {
  std::vector<double> M;                      // M_1 <= ... <= M_r, minima of sqrt(Q)
  std::vector<std::vector<long>> witnesses;   // independent integer vectors
};

// Expanding-radius enumeration; r <= 6 (desk scale).
MinimaReport successive_minima(const HeightForm& form);

struct DavenportCheck {
  long long count = 0;
  double bound = 0;   // prod max{1, 4 sqrt(rho)/M_j}
  bool ok = false;    // theorem; false is a bug detector
};
DavenportCheck davenport_check(const HeightForm& form, double rho);

struct DavidRow {
  int j = 0;
  double exponent = 0;
  double ratio = 0;  // M_j / (log|D|)^exponent, reported only
};
struct DavidReport {
  std::vector<DavidRow> rows;
  double exponent_sum = 0;  // 7/16 + 1/6 + 7/96 + 1/40
  bool footer_ok = false;   // exponent_sum < 1
};
DavidReport david_report(const MinimaReport& minima, const Int& d);

struct GrowthRow {
  long B = 0;
  std::size_t N = 0;
  double h_max = 0;          // max canonical height among enumerated points
  long long lattice_bound = 0;  // #torsion * ellipsoid_count(form, h_max)
  long long calibrated = 0;     // ellipsoid_count(form, c_cal log B), comparison only
  double log_pow = 0;           // (log B)^{1 + r/2}, comparison only
  bool ok = false;              // N <= lattice_bound
};
struct GrowthReport {
  std::vector<GrowthRow> rows;
  std::size_t torsion = 1;
  bool ok = false;
};

// Asserts the lattice-side chain N(B) <= #torsion * ellipsoid_count at the
// measured max height; the calibrated and (log B)^{1+r/2} columns are shown
// for comparison only.
GrowthReport growth_report(const GroupContext& ctx, const MordellWeilBasis& basis,
                           const std::vector<CountRow>& table, double c_cal);

}  // namespace cubic
