#include "cubic/points.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace cubic {

PlanePoint::PlanePoint(Int a, Int b, Int c) : x0(std::move(a)), x1(std::move(b)), x2(std::move(c)) {
  Int g = gcd(gcd(x0, x1), x2);
  if (g > 1) {
    x0 /= g;
    x1 /= g;
    x2 /= g;
  }
  int sign = 0;
  if (x0 != 0) sign = sgn(x0);
  else if (x1 != 0) sign = sgn(x1);
  else if (x2 != 0) sign = sgn(x2);
  if (sign < 0) {
    x0 = -x0;
    x1 = -x1;
    x2 = -x2;
  }
}

Int PlanePoint::height() const {
  Int h = abs(x0);
  h = std::max(h, Int(abs(x1)));
  h = std::max(h, Int(abs(x2)));
  return h;
}

std::string PlanePoint::to_string() const {
  std::ostringstream os;
  os << "[" << x0.get_str() << "," << x1.get_str() << "," << x2.get_str() << "]";
  return os.str();
}

namespace {

using i128 = __int128;

constexpr long double kPi = 3.14159265358979323846264338327950288L;

i128 to_i128(const Int& x) {
  // Assumes |x| < 2^100 or so; callers guarantee this.
  bool neg = x < 0;
  mpz_class a = abs(x);
  i128 r = 0;
  mpz_class q = a;
  int shift = 0;
  while (q != 0 && shift < 128) {
    unsigned long limb = mpz_class(q & mpz_class(0xffffffff)).get_ui();
    r |= static_cast<i128>(limb) << shift;
    q >>= 32;
    shift += 32;
  }
  return neg ? -r : r;
}

// Integer roots of c3 t^3 + c2 t^2 + c1 t + c0 in [-B, B], exact.
// Approximate roots come from long-double arithmetic; each candidate is
// verified with exact 128-bit evaluation in a +-2 window.
void integer_roots(i128 c3, i128 c2, i128 c1, i128 c0, long B, std::vector<long>& out) {
  out.clear();
  auto eval = [&](i128 t) { return ((c3 * t + c2) * t + c1) * t + c0; };
  auto push_window = [&](long double center) {
    long base = static_cast<long>(std::llroundl(center));
    for (long t = base - 2; t <= base + 2; ++t) {
      if (t < -B || t > B) continue;
      if (eval(t) == 0) out.push_back(t);
    }
  };

  if (c3 == 0 && c2 == 0 && c1 == 0) return;  // constant (zero handled by caller)

  if (c3 == 0 && c2 == 0) {
    if (c0 % c1 == 0) {
      i128 t = -c0 / c1;
      if (t >= -B && t <= B) out.push_back(static_cast<long>(t));
    }
    return;
  }

  long double a = static_cast<long double>(c3);
  long double b = static_cast<long double>(c2);
  long double c = static_cast<long double>(c1);
  long double d = static_cast<long double>(c0);

  if (c3 == 0) {
    long double disc = c * c - 4 * b * d;
    if (disc >= 0) {
      long double s = std::sqrt(disc);
      push_window((-c + s) / (2 * b));
      push_window((-c - s) / (2 * b));
    } else {
      // Rounding may hide a tangential double root.
      push_window(-c / (2 * b));
    }
  } else {
    // Depressed-cubic closed form in long double.
    long double p = (3 * a * c - b * b) / (3 * a * a);
    long double q = (2 * b * b * b - 9 * a * b * c + 27 * a * a * d) / (27 * a * a * a);
    long double shift = -b / (3 * a);
    long double disc = q * q / 4 + p * p * p / 27;
    if (disc > 0) {
      long double s = std::sqrt(disc);
      long double u = std::cbrt(-q / 2 + s);
      long double v = std::cbrt(-q / 2 - s);
      push_window(u + v + shift);
    } else {
      long double r = 2 * std::sqrt(std::max<long double>(-p / 3, 0));
      long double arg = (p == 0) ? 0 : 3 * q / (p * r == 0 ? 1 : (p * r));
      arg = std::clamp<long double>(arg, -1, 1);
      long double phi = std::acos(arg);
      for (int k = 0; k < 3; ++k)
        push_window(r * std::cos((phi - 2 * kPi * k) / 3) + shift);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

bool fits_fast_path(const CubicForm& f, long B) {
  // |c| * 10 * B^3 must stay well inside 128 bits.
  Int bound = f.coeff_height();
  bound *= 10;
  bound *= Int(B) * B * B;
  return mpz_sizeinbase(bound.get_mpz_t(), 2) < 100;
}

}  // namespace

std::vector<PlanePoint> enumerate_points(const CubicForm& f, long B) {
  if (B < 1) throw form_error("enumerate_points: B must be >= 1");
  if (!f.is_smooth()) throw form_error("enumerate_points: singular form");
  const CubicForm g = f.normalized();

  std::set<PlanePoint> found;
  const auto& c = g.coeffs();

  if (fits_fast_path(g, B)) {
    i128 cc[10];
    for (int i = 0; i < 10; ++i) cc[i] = to_i128(c[static_cast<std::size_t>(i)]);
    std::vector<long> roots;
    // Negating the whole triple fixes a point, so x0 >= 0 suffices.
    for (long x0 = 0; x0 <= B; ++x0) {
      long x1lo = (x0 == 0) ? 0 : -B;
      for (long x1 = x1lo; x1 <= B; ++x1) {
        if (x0 == 0 && x1 == 0) {
          if (g.eval(Int(0), Int(0), Int(1)) == 0) found.insert(PlanePoint(0, 0, 1));
          continue;
        }
        i128 a = x0, b = x1;
        // F(x0, x1, t) as a cubic in t.
        i128 k3 = cc[9];
        i128 k2 = cc[5] * a + cc[8] * b;
        i128 k1 = cc[2] * a * a + cc[4] * a * b + cc[7] * b * b;
        i128 k0 = ((cc[0] * a + cc[1] * b) * a + cc[3] * b * b) * a + cc[6] * b * b * b;
        if (k3 == 0 && k2 == 0 && k1 == 0 && k0 == 0)
          throw form_error("enumerate_points: line contained in smooth cubic");
        integer_roots(k3, k2, k1, k0, B, roots);
        for (long t : roots) found.insert(PlanePoint(Int(x0), Int(x1), Int(t)));
      }
    }
  } else {
    // Big-coefficient fallback: same loop in exact arithmetic via divisor
    // search on the trailing coefficient.
    for (long x0 = 0; x0 <= B; ++x0) {
      long x1lo = (x0 == 0) ? 0 : -B;
      for (long x1 = x1lo; x1 <= B; ++x1) {
        if (x0 == 0 && x1 == 0) {
          if (g.eval(Int(0), Int(0), Int(1)) == 0) found.insert(PlanePoint(0, 0, 1));
          continue;
        }
        for (long t = -B; t <= B; ++t) {
          if (g.eval(Int(x0), Int(x1), Int(t)) == 0)
            found.insert(PlanePoint(Int(x0), Int(x1), Int(t)));
        }
      }
    }
  }

  std::vector<PlanePoint> out(found.begin(), found.end());
  // Exact on-curve check on everything we emit.
  for (const auto& pt : out) {
    if (g.eval(pt.x0, pt.x1, pt.x2) != 0)
      throw std::logic_error("enumerate_points: emitted point not on curve");
  }
  return out;
}

std::vector<PlanePoint> enumerate_points_bruteforce(const CubicForm& f, long B) {
  const CubicForm g = f.normalized();
  std::set<PlanePoint> found;
  for (long a = -B; a <= B; ++a)
    for (long b = -B; b <= B; ++b)
      for (long c = -B; c <= B; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        if (g.eval(Int(a), Int(b), Int(c)) == 0) found.insert(PlanePoint(Int(a), Int(b), Int(c)));
      }
  return {found.begin(), found.end()};
}

std::vector<CountRow> count_table(const CubicForm& f, const std::vector<long>& b_list) {
  for (std::size_t i = 1; i < b_list.size(); ++i)
    if (b_list[i] <= b_list[i - 1]) throw form_error("count_table: B list must be increasing");
  std::vector<CountRow> rows;
  for (long B : b_list) rows.push_back({B, enumerate_points(f, B).size()});
  return rows;
}

TrentaReport trenta_diagnostic(const CubicForm& f, long B) {
  if (B < 3) throw form_error("trenta_diagnostic: B must be >= 3");
  auto pts = enumerate_points(f, B);
  TrentaReport rep{B, pts.size(), false, 0.0};
  if (pts.size() >= 10) {
    double logF = std::log(f.coeff_height().get_d());
    rep.ratio_emitted = true;
    rep.ratio = logF / (30.0 * std::log(static_cast<double>(B)));
  }
  return rep;
}

}  // namespace cubic
