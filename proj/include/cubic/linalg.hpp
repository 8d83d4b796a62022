#pragma once

#include <vector>

#include <gmpxx.h>

namespace cubic {

// Dense matrices stored row-major; sizes are small (a few dozen rows).
using IntMat = std::vector<std::vector<mpz_class>>;
using RatMat = std::vector<std::vector<mpq_class>>;

// Exact determinant by fraction-free Bareiss elimination.
mpz_class bareiss_det(IntMat m);

// Exact rank over Q of an integer matrix.
int int_rank(IntMat m);

// One exact rational kernel vector of an integer matrix (columns > rank),
// cleared to a primitive integer vector with deterministic pivot order.
// Empty result means the matrix has full column rank.
std::vector<mpz_class> integer_kernel_vector(const IntMat& m);

// Solves a square rational system a*x = b exactly; throws on singular a.
std::vector<mpq_class> solve_rational(RatMat a, std::vector<mpq_class> b);

// p-adic valuation of a nonzero integer.
unsigned long padic_valuation(mpz_class n, const mpz_class& p);

}  // namespace cubic
