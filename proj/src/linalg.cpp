#include "cubic/linalg.hpp"

#include <stdexcept>

namespace cubic {

mpz_class bareiss_det(IntMat m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("bareiss_det: matrix not square");

  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : mpz_class(-m[n - 1][n - 1]);
}

namespace {

// Fraction-free row echelon; returns pivot columns.  The matrix is modified
// in place.
std::vector<std::size_t> echelon_pivots(IntMat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t piv = r;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        m[i][j] = (m[r][col] * m[i][j] - m[i][col] * m[r][j]) / prev;
      }
      m[i][col] = 0;
    }
    prev = m[r][col];
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

}  // namespace

int int_rank(IntMat m) {
  return static_cast<int>(echelon_pivots(m).size());
}

std::vector<mpz_class> integer_kernel_vector(const IntMat& m) {
  if (m.empty() || m[0].empty()) return {};
  const std::size_t cols = m[0].size();
  // Rational Gauss-Jordan with first-nonzero pivoting keeps the choice of
  // kernel vector deterministic.
  RatMat a(m.size(), std::vector<mpq_class>(cols));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = mpq_class(m[i][j]);

  std::vector<long> pivot_of_col(cols, -1);
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < a.size(); ++col) {
    std::size_t piv = r;
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[r], a[piv]);
    mpq_class inv = a[r][col];
    for (std::size_t j = col; j < cols; ++j) a[r][j] /= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][col] == 0) continue;
      mpq_class f = a[i][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_of_col[col] = static_cast<long>(r);
    ++r;
  }

  // First free column gives the kernel vector.
  std::size_t free_col = cols;
  for (std::size_t col = 0; col < cols; ++col) {
    if (pivot_of_col[col] < 0) {
      free_col = col;
      break;
    }
  }
  if (free_col == cols) return {};

  std::vector<mpq_class> v(cols, 0);
  v[free_col] = 1;
  for (std::size_t col = 0; col < free_col; ++col) {
    if (pivot_of_col[col] >= 0) v[col] = -a[static_cast<std::size_t>(pivot_of_col[col])][free_col];
  }

  mpz_class den = 1;
  for (const auto& q : v) den = lcm(den, q.get_den());
  std::vector<mpz_class> out(cols);
  mpz_class g = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    out[j] = v[j].get_num() * (den / v[j].get_den());
    g = gcd(g, out[j]);
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

std::vector<mpq_class> solve_rational(RatMat a, std::vector<mpq_class> b) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) throw std::runtime_error("solve_rational: singular matrix");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      mpq_class f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<mpq_class> x(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    mpq_class s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

unsigned long padic_valuation(mpz_class n, const mpz_class& p) {
  if (n == 0) throw std::invalid_argument("padic_valuation: zero input");
  unsigned long v = 0;
  mpz_class q, r;
  for (;;) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    if (r != 0) return v;
    n = q;
    ++v;
  }
}

}  // namespace cubic
