#pragma once

#include <string>
#include <vector>

#include "cubic/forms.hpp"

namespace cubic {

// Primitive integer triple with first nonzero coordinate positive.
struct PlanePoint {
  Int x0, x1, x2;

  PlanePoint() : x0(0), x1(0), x2(0) {}
  PlanePoint(Int a, Int b, Int c);  // normalizes

  Int height() const;  // H(P) = max |x_i|
  bool is_zero() const { return x0 == 0 && x1 == 0 && x2 == 0; }

  bool operator==(const PlanePoint& o) const {
    return x0 == o.x0 && x1 == o.x1 && x2 == o.x2;
  }
  bool operator<(const PlanePoint& o) const {
    if (x0 != o.x0) return x0 < o.x0;
    if (x1 != o.x1) return x1 < o.x1;
    return x2 < o.x2;
  }
  std::string to_string() const;
};

// All rational points with H(P) <= B, lexicographically sorted.  O(B^2)
// outer loop with exact integer root extraction in the third coordinate.
std::vector<PlanePoint> enumerate_points(const CubicForm& f, long B);

// Exhaustive O(B^3) scan, used as the independent oracle in tests.
std::vector<PlanePoint> enumerate_points_bruteforce(const CubicForm& f, long B);

struct CountRow {
  long B;
  std::size_t N;
};
std::vector<CountRow> count_table(const CubicForm& f, const std::vector<long>& b_list);

struct TrentaReport {
  long B;
  std::size_t N;
  bool ratio_emitted;       // only when N >= 10
  double ratio;             // log||F|| / (30 log B)
};
TrentaReport trenta_diagnostic(const CubicForm& f, long B);

}  // namespace cubic
