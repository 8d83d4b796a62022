#include "cubic/forms.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "cubic/linalg.hpp"

namespace cubic {

namespace {

int cubic_index(int e0, int e1, int e2) {
  for (int i = 0; i < 10; ++i) {
    if (kCubicExponents[i][0] == e0 && kCubicExponents[i][1] == e1 &&
        kCubicExponents[i][2] == e2)
      return i;
  }
  return -1;
}

struct Parser {
  const std::string& s;
  std::size_t i = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool at_end() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }

  Int parse_integer() {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw parse_error("expected integer", i);
    return Int(s.substr(start, i - start));
  }

  int parse_variable() {
    // x0, x1 or x2
    skip_ws();
    if (i + 1 < s.size() && s[i] == 'x' && s[i + 1] >= '0' && s[i + 1] <= '2') {
      int v = s[i + 1] - '0';
      i += 2;
      return v;
    }
    throw parse_error("expected variable x0, x1 or x2", i);
  }

  // term := factor (['*'] factor)*, factor := integer | var ['^' integer]
  void parse_term(int sign, std::array<Int, 10>& coeffs) {
    Int coeff = sign;
    std::array<long, 3> deg{0, 0, 0};
    bool any = false;
    for (;;) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        coeff *= parse_integer();
        any = true;
      } else if (c == 'x') {
        std::size_t at = i;
        int v = parse_variable();
        long e = 1;
        if (peek() == '^') {
          ++i;
          Int ei = parse_integer();
          if (ei < 0 || ei > 3) throw parse_error("exponent out of range", at);
          e = ei.get_si();
        }
        deg[v] += e;
        any = true;
      } else {
        break;
      }
      if (peek() == '*') ++i;
    }
    if (!any) throw parse_error("expected term", i);
    long total = deg[0] + deg[1] + deg[2];
    if (total != 3)
      throw parse_error("term of total degree " + std::to_string(total), i);
    int idx = cubic_index(static_cast<int>(deg[0]), static_cast<int>(deg[1]),
                          static_cast<int>(deg[2]));
    coeffs[static_cast<std::size_t>(idx)] += coeff;
  }

  std::array<Int, 10> parse_expr() {
    std::array<Int, 10> coeffs{};
    int sign = 1;
    char c = peek();
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1 : 1;
      ++i;
    }
    parse_term(sign, coeffs);
    while (!at_end()) {
      c = peek();
      if (c == '+' || c == '-') {
        ++i;
        parse_term(c == '-' ? -1 : 1, coeffs);
      } else {
        throw parse_error(std::string("unexpected character '") + c + "'", i);
      }
    }
    return coeffs;
  }
};

// Small dense trivariate polynomial, exponents bounded by 3 in each slot.
struct TriPoly {
  std::map<std::array<int, 3>, Int> t;

  static TriPoly linear(const Int& a0, const Int& a1, const Int& a2) {
    TriPoly p;
    if (a0 != 0) p.t[{1, 0, 0}] = a0;
    if (a1 != 0) p.t[{0, 1, 0}] = a1;
    if (a2 != 0) p.t[{0, 0, 1}] = a2;
    return p;
  }
  static TriPoly constant(const Int& c) {
    TriPoly p;
    if (c != 0) p.t[{0, 0, 0}] = c;
    return p;
  }
  TriPoly operator*(const TriPoly& o) const {
    TriPoly r;
    for (const auto& [ea, ca] : t)
      for (const auto& [eb, cb] : o.t) {
        std::array<int, 3> e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
        r.t[e] += ca * cb;
      }
    return r;
  }
  TriPoly& operator+=(const TriPoly& o) {
    for (const auto& [e, c] : o.t) t[e] += c;
    return *this;
  }
};

}  // namespace

CubicForm CubicForm::parse(const std::string& text) {
  Parser p(text);
  CubicForm f(p.parse_expr());
  if (f.is_zero()) throw form_error("zero form");
  return f;
}

bool CubicForm::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Int& x) { return x == 0; });
}

Int CubicForm::content() const {
  Int g = 0;
  for (const auto& x : c_) g = gcd(g, x);
  return g;
}

CubicForm CubicForm::normalized() const {
  if (is_zero()) throw form_error("zero form");
  Int g = content();
  for (const auto& x : c_) {
    if (x != 0) {
      if (x < 0) g = -g;
      break;
    }
  }
  std::array<Int, 10> out;
  for (int i = 0; i < 10; ++i) out[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)] / g;
  return CubicForm(std::move(out));
}

bool CubicForm::is_normalized() const {
  if (is_zero()) return false;
  return normalized() == *this;
}

Int CubicForm::coeff_height() const {
  if (is_zero()) throw form_error("zero form");
  Int h = 0;
  for (const auto& x : c_) h = std::max(h, Int(abs(x)));
  return h;
}

std::array<Int, 6> CubicForm::partial(int var) const {
  std::array<Int, 6> out{};
  for (int i = 0; i < 10; ++i) {
    const auto& e = kCubicExponents[i];
    if (e[var] == 0 || c_[static_cast<std::size_t>(i)] == 0) continue;
    std::array<int, 3> d{e[0], e[1], e[2]};
    d[static_cast<std::size_t>(var)] -= 1;
    for (int j = 0; j < 6; ++j) {
      if (kQuadExponents[j][0] == d[0] && kQuadExponents[j][1] == d[1] &&
          kQuadExponents[j][2] == d[2]) {
        out[static_cast<std::size_t>(j)] += e[var] * c_[static_cast<std::size_t>(i)];
        break;
      }
    }
  }
  return out;
}

Int CubicForm::eval_partial(int var, const Int& x0, const Int& x1, const Int& x2) const {
  auto q = partial(var);
  Int acc = 0;
  const Int* xs[3] = {&x0, &x1, &x2};
  for (int j = 0; j < 6; ++j) {
    if (q[static_cast<std::size_t>(j)] == 0) continue;
    Int term = q[static_cast<std::size_t>(j)];
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < kQuadExponents[j][v]; ++k) term *= *xs[v];
    acc += term;
  }
  return acc;
}

CubicForm CubicForm::transformed(const std::array<std::array<Int, 3>, 3>& a) const {
  // Rows of a are the linear forms substituted for x0,x1,x2.
  TriPoly lin[3];
  for (int v = 0; v < 3; ++v)
    lin[v] = TriPoly::linear(a[static_cast<std::size_t>(v)][0], a[static_cast<std::size_t>(v)][1],
                             a[static_cast<std::size_t>(v)][2]);
  TriPoly acc;
  for (int i = 0; i < 10; ++i) {
    if (c_[static_cast<std::size_t>(i)] == 0) continue;
    TriPoly term = TriPoly::constant(c_[static_cast<std::size_t>(i)]);
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < kCubicExponents[i][v]; ++k) term = term * lin[v];
    acc += term;
  }
  std::array<Int, 10> out{};
  for (const auto& [e, coeff] : acc.t) {
    int idx = cubic_index(e[0], e[1], e[2]);
    out[static_cast<std::size_t>(idx)] = coeff;
  }
  return CubicForm(std::move(out));
}

namespace {

// Macaulay resultant of three ternary quadratics: critical degree 4, a
// 15x15 numerator determinant and the classical 3x3 extraneous minor.
std::vector<std::array<int, 3>> degree4_monomials() {
  std::vector<std::array<int, 3>> mons;
  for (int e0 = 4; e0 >= 0; --e0)
    for (int e1 = 4 - e0; e1 >= 0; --e1) mons.push_back({e0, e1, 4 - e0 - e1});
  return mons;
}

bool macaulay_try(const std::array<std::array<Int, 6>, 3>& quads, Int& out) {
  auto mons = degree4_monomials();
  auto index_of = [&](const std::array<int, 3>& e) -> std::size_t {
    for (std::size_t k = 0; k < mons.size(); ++k)
      if (mons[k] == e) return k;
    throw std::logic_error("monomial index");
  };

  IntMat d(15, std::vector<Int>(15, 0));
  std::vector<bool> non_reduced(15, false);
  for (std::size_t row = 0; row < mons.size(); ++row) {
    const auto& m = mons[row];
    int assigned = -1;
    int div_count = 0;
    for (int v = 0; v < 3; ++v) {
      if (m[static_cast<std::size_t>(v)] >= 2) {
        ++div_count;
        if (assigned < 0) assigned = v;
      }
    }
    non_reduced[row] = div_count >= 2;
    std::array<int, 3> quo = m;
    quo[static_cast<std::size_t>(assigned)] -= 2;
    for (int j = 0; j < 6; ++j) {
      const Int& coeff = quads[static_cast<std::size_t>(assigned)][static_cast<std::size_t>(j)];
      if (coeff == 0) continue;
      std::array<int, 3> e{quo[0] + kQuadExponents[j][0], quo[1] + kQuadExponents[j][1],
                           quo[2] + kQuadExponents[j][2]};
      d[row][index_of(e)] += coeff;
    }
  }

  IntMat dprime;
  for (std::size_t r = 0; r < 15; ++r) {
    if (!non_reduced[r]) continue;
    std::vector<Int> row;
    for (std::size_t cidx = 0; cidx < 15; ++cidx)
      if (non_reduced[cidx]) row.push_back(d[r][cidx]);
    dprime.push_back(std::move(row));
  }
  Int minor = bareiss_det(dprime);
  if (minor == 0) return false;
  Int det = bareiss_det(d);
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), det.get_mpz_t(), minor.get_mpz_t());
  if (r != 0) throw std::logic_error("macaulay: extraneous minor does not divide");
  out = q;
  return true;
}

std::array<std::array<Int, 3>, 3> sl3(long a00, long a01, long a02, long a10, long a11,
                                      long a12, long a20, long a21, long a22) {
  return {{{Int(a00), Int(a01), Int(a02)},
           {Int(a10), Int(a11), Int(a12)},
           {Int(a20), Int(a21), Int(a22)}}};
}

}  // namespace

const Int& CubicForm::discriminant() const {
  if (disc_) return *disc_;
  if (is_zero()) throw form_error("zero form");

  // The resultant of the partials is invariant under SL3(Z) substitutions,
  // so when the extraneous Macaulay minor degenerates we retry on a sheared
  // copy of the form.
  static const std::vector<std::array<std::array<Int, 3>, 3>> kTransforms = {
      sl3(1, 0, 0, 0, 1, 0, 0, 0, 1), sl3(1, 1, 0, 0, 1, 0, 0, 0, 1),
      sl3(1, 0, 1, 0, 1, 0, 0, 0, 1), sl3(1, 0, 0, 0, 1, 1, 0, 0, 1),
      sl3(1, 1, 1, 0, 1, 1, 0, 0, 1), sl3(1, 2, 0, 0, 1, 3, 0, 0, 1),
      sl3(1, 0, 0, 1, 1, 0, 1, 0, 1), sl3(2, 1, 0, 1, 1, 0, 0, 0, 1),
      sl3(1, 2, 3, 0, 1, 2, 0, 0, 1), sl3(3, 2, 0, 1, 1, 0, 2, 1, 1),
  };

  for (const auto& t : kTransforms) {
    CubicForm g = transformed(t);
    std::array<std::array<Int, 6>, 3> quads{g.partial(0), g.partial(1), g.partial(2)};
    Int res;
    if (macaulay_try(quads, res)) {
      disc_ = res;
      return *disc_;
    }
  }
  throw form_error("discriminant: Macaulay minor degenerate for all transforms");
}

std::optional<SingularWitness> CubicForm::singular_witness() const {
  if (is_smooth()) return std::nullopt;

  // Small rational box scan first.
  const long box = 20;
  for (long x0 = 0; x0 <= box; ++x0)
    for (long x1 = -box; x1 <= box; ++x1)
      for (long x2 = -box; x2 <= box; ++x2) {
        if (x0 == 0 && x1 == 0 && x2 == 0) continue;
        if (x0 == 0 && x1 < 0) continue;
        if (x0 == 0 && x1 == 0 && x2 < 0) continue;
        Int a(x0), b(x1), c(x2);
        if (eval_partial(0, a, b, c) == 0 && eval_partial(1, a, b, c) == 0 &&
            eval_partial(2, a, b, c) == 0) {
          Int g = gcd(gcd(a, b), c);
          return SingularWitness{0, {a / g, b / g, c / g}};
        }
      }

  // Residue witness: common projective zero of the partials mod p.
  static const unsigned long small_primes[] = {2,  3,  5,  7,  11, 13, 17,  19,  23,  29,
                                               31, 37, 41, 43, 47, 53, 59,  61,  67,  71,
                                               73, 79, 83, 89, 97, 101, 103, 107, 109, 113};
  for (unsigned long p : small_primes) {
    Int pz(static_cast<long>(p));
    auto try_point = [&](long x0, long x1, long x2) -> bool {
      Int a(x0), b(x1), c(x2);
      return eval_partial(0, a, b, c) % pz == 0 && eval_partial(1, a, b, c) % pz == 0 &&
             eval_partial(2, a, b, c) % pz == 0;
    };
    for (long y = 0; y < static_cast<long>(p); ++y)
      for (long z = 0; z < static_cast<long>(p); ++z)
        if (try_point(1, y, z)) return SingularWitness{p, {Int(1), Int(y), Int(z)}};
    for (long z = 0; z < static_cast<long>(p); ++z)
      if (try_point(0, 1, z)) return SingularWitness{p, {Int(0), Int(1), Int(z)}};
    if (try_point(0, 0, 1)) return SingularWitness{p, {Int(0), Int(0), Int(1)}};
  }
  return SingularWitness{0, {Int(0), Int(0), Int(0)}};
}

namespace {

mpz_class nextprime_wrap(const mpz_class& n) {
  mpz_class r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

void factor_into(mpz_class n, std::vector<Int>& out) {
  if (n <= 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
    out.push_back(n);
    return;
  }
  // Trial division covers everything our small-coefficient corpus needs;
  // Pollard rho handles the occasional large discriminant.
  for (long d : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
    while (n % d == 0) {
      out.push_back(Int(d));
      n /= d;
    }
    if (n == 1) return;
  }
  if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
    out.push_back(n);
    return;
  }
  mpz_class d(41);
  while (d * d <= n) {
    if (n % d == 0) {
      factor_into(d, out);
      n /= d;
      if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
        out.push_back(n);
        return;
      }
      continue;
    }
    // Pollard rho with a deterministic sequence of offsets.
    if (d > 100000) {
      mpz_class x(2), y(2), c(1), g(1);
      while (true) {
        x = (x * x + c) % n;
        y = (y * y + c) % n;
        y = (y * y + c) % n;
        g = gcd(abs(x - y), n);
        if (g == n) {
          c += 1;
          x = 2;
          y = 2;
          continue;
        }
        if (g > 1) break;
      }
      factor_into(g, out);
      factor_into(n / g, out);
      return;
    }
    d = nextprime_wrap(d);
  }
  if (n > 1) out.push_back(n);
}

}  // namespace

std::vector<Int> CubicForm::bad_primes() const {
  if (!is_smooth()) throw form_error("bad_primes: singular form");
  if (content() != 1) throw form_error("bad_primes: form must be primitive");
  mpz_class n = 6 * abs(discriminant());
  std::vector<Int> factors;
  factor_into(n, factors);
  std::sort(factors.begin(), factors.end());
  factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
  return factors;
}

bool CubicForm::is_good_prime(const Int& p) const {
  mpz_class n = 6 * abs(discriminant());
  return n % p != 0;
}

std::string CubicForm::to_string() const {
  static const char* names[10] = {"x0^3",   "x0^2*x1", "x0^2*x2", "x0*x1^2", "x0*x1*x2",
                                  "x0*x2^2", "x1^3",    "x1^2*x2", "x1*x2^2", "x2^3"};
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < 10; ++i) {
    const Int& coeff = c_[static_cast<std::size_t>(i)];
    if (coeff == 0) continue;
    if (!first) os << (coeff > 0 ? " + " : " - ");
    else if (coeff < 0) os << "-";
    Int a = abs(coeff);
    if (a != 1) os << a.get_str() << "*";
    os << names[i];
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace cubic
