#pragma once

#include <optional>
#include <vector>

#include "cubic/detmethod.hpp"

namespace cubic {

struct pipeline_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TheoremOneReport {
  long B = 3;
  long m = 1;
  long a = 1, b = 1;           // defaults a = 1 + [log B], b = m^2
  std::size_t r = 0;
  std::size_t N = 0;
  double envelope = 0;          // m^{r+2} (log^2 B + B^{2/(3 m^2)} log B)
  double ratio = 0;             // N / envelope, the fitted implied constant
  long m_star = 1;              // 1 + [sqrt(log B)]
  double corollary_envelope = 0;  // (log B)^{3 + r/2}
  std::vector<ClassBoundReport> classes;
  bool ok = false;
};

double theorem_one_envelope(long b_height, long m, std::size_t r);

TheoremOneReport theorem_one_report(const GroupContext& ctx, const MordellWeilBasis& basis,
                                    long m, long B, double c0 = 30.0,
                                    std::optional<double> a_exponent = std::nullopt);

}  // namespace cubic
