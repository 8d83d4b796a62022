#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace cubic {

using Int = mpz_class;
using Rat = mpq_class;

// Fixed storage order for the ten coefficients of a ternary cubic:
//   x0^3, x0^2 x1, x0^2 x2, x0 x1^2, x0 x1 x2, x0 x2^2, x1^3, x1^2 x2, x1 x2^2, x2^3
inline constexpr std::array<std::array<int, 3>, 10> kCubicExponents = {{
    {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1},
    {1, 0, 2}, {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3},
}};

// Ternary quadratic coefficient order: x0^2, x0 x1, x0 x2, x1^2, x1 x2, x2^2
inline constexpr std::array<std::array<int, 3>, 6> kQuadExponents = {{
    {2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2},
}};

struct parse_error : std::runtime_error {
  std::size_t pos;
  parse_error(const std::string& msg, std::size_t at)
      : std::runtime_error(msg + " (at position " + std::to_string(at) + ")"), pos(at) {}
};

struct form_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularWitness {
  // p == 0 means a rational singular point; otherwise a residue witness mod p.
  unsigned long p = 0;
  std::array<Int, 3> point{};
};

class CubicForm {
 public:
  CubicForm() = default;
  explicit CubicForm(std::array<Int, 10> coeffs) : c_(std::move(coeffs)) {}

  // Parses a polynomial in x0,x1,x2 with integer coefficients; every term
  // must have total degree 3.
  static CubicForm parse(const std::string& text);

  const std::array<Int, 10>& coeffs() const { return c_; }
  const Int& coeff(int i) const { return c_[i]; }
  bool is_zero() const;

  Int content() const;
  // Divides out the content and flips the sign so the first nonzero
  // coefficient is positive.
  CubicForm normalized() const;
  bool is_normalized() const;

  Int coeff_height() const;  // ||F|| = max |c_i|

  template <class T>
  T eval(const T& x0, const T& x1, const T& x2) const {
    T acc{};
    for (int i = 0; i < 10; ++i) {
      if (c_[i] == 0) continue;
      T term = static_cast<T>(c_[i]);
      for (int k = 0; k < kCubicExponents[i][0]; ++k) term *= x0;
      for (int k = 0; k < kCubicExponents[i][1]; ++k) term *= x1;
      for (int k = 0; k < kCubicExponents[i][2]; ++k) term *= x2;
      acc += term;
    }
    return acc;
  }
  Int eval(const std::array<Int, 3>& x) const { return eval(x[0], x[1], x[2]); }

  // Coefficients of dF/dx_var in kQuadExponents order.
  std::array<Int, 6> partial(int var) const;
  Int eval_partial(int var, const Int& x0, const Int& x1, const Int& x2) const;

  // Substitute x -> A*x (A integer 3x3), returning F(A x).
  CubicForm transformed(const std::array<std::array<Int, 3>, 3>& a) const;

  // Macaulay resultant of the three partial-derivative quadratics.  Zero
  // exactly when the curve F = 0 is singular.  Cached after first call.
  const Int& discriminant() const;
  bool is_smooth() const { return discriminant() != 0; }

  // For singular forms, tries to exhibit a witness: a rational singular
  // point from a small box scan, else a common zero of the partials mod p.
  std::optional<SingularWitness> singular_witness() const;

  // Primes dividing 6*D_F.  Every prime outside the set has good reduction.
  std::vector<Int> bad_primes() const;
  bool is_good_prime(const Int& p) const;

  std::string to_string() const;

  bool operator==(const CubicForm& o) const { return c_ == o.c_; }

 private:
  std::array<Int, 10> c_{};
  mutable std::optional<Int> disc_;
};

}  // namespace cubic
