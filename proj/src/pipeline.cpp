#include "cubic/pipeline.hpp"

#include <cmath>

namespace cubic {

double theorem_one_envelope(long b_height, long m, std::size_t r) {
  double lb = std::log(static_cast<double>(b_height));
  double md = static_cast<double>(m);
  return std::pow(md, static_cast<double>(r) + 2) *
         (lb * lb + std::pow(static_cast<double>(b_height), 2.0 / (3.0 * md * md)) * lb);
}

TheoremOneReport theorem_one_report(const GroupContext& ctx, const MordellWeilBasis& basis,
                                    long m, long B, double c0,
                                    std::optional<double> a_exponent) {
  if (B < 3) throw pipeline_error("B must be at least 3");
  if (m < 1) throw pipeline_error("m must be positive");
  TheoremOneReport rep;
  rep.B = B;
  rep.m = m;
  rep.r = basis.rank();
  double lb = std::log(static_cast<double>(B));
  rep.a = 1 + static_cast<long>(lb);
  rep.b = m * m;
  rep.envelope = theorem_one_envelope(B, m, rep.r);
  rep.m_star = 1 + static_cast<long>(std::sqrt(lb));
  rep.corollary_envelope = std::pow(lb, 3.0 + static_cast<double>(rep.r) / 2.0);

  auto pts = enumerate_points(ctx.form(), B);
  rep.N = pts.size();
  rep.ratio = static_cast<double>(rep.N) / rep.envelope;

  bool all_ok = true;
  for (const DescentClass& k : partition(ctx, basis, pts, m)) {
    rep.classes.push_back(class_bound(ctx, basis, k, k.representative, m, rep.a, rep.b, B,
                                      a_exponent, c0));
    all_ok = all_ok && rep.classes.back().ok;
  }
  rep.ok = all_ok;
  return rep;
}

}  // namespace cubic
