#include "cubic/descent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cubic {

namespace {

double det_double(std::vector<std::vector<double>> m) {
  std::size_t n = m.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r2 = c + 1; r2 < n; ++r2)
      if (std::fabs(m[r2][c]) > std::fabs(m[piv][c])) piv = r2;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r2 = c + 1; r2 < n; ++r2) {
      double f = m[r2][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r2][k] -= f * m[c][k];
    }
  }
  return det;
}

std::vector<double> solve_double(std::vector<std::vector<double>> m, std::vector<double> b) {
  std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r2 = c + 1; r2 < n; ++r2)
      if (std::fabs(m[r2][c]) > std::fabs(m[piv][c])) piv = r2;
    if (m[piv][c] == 0.0) throw descent_error("coordinates: singular gram matrix");
    std::swap(m[piv], m[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r2 = c + 1; r2 < n; ++r2) {
      double f = m[r2][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r2][k] -= f * m[c][k];
      b[r2] -= f * b[c];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= m[i][k] * x[k];
    x[i] = acc / m[i][i];
  }
  return x;
}

PlanePoint combine(const GroupContext& ctx, const MordellWeilBasis& basis,
                   const std::vector<long>& n, std::size_t torsion_idx) {
  PlanePoint acc = basis.torsion()[torsion_idx];
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0) continue;
    acc = ctx.add(acc, ctx.smul(n[i], basis.generators()[i]));
  }
  return acc;
}

long mod_pos(long a, long m) { return ((a % m) + m) % m; }

}  // namespace

MordellWeilBasis MordellWeilBasis::from_points(const GroupContext& ctx,
                                               std::vector<PlanePoint> generators,
                                               std::vector<PlanePoint> torsion,
                                               double tol, bool verified) {
  MordellWeilBasis b;
  b.tol_ = tol;
  b.verified_ = verified;

  // Torsion table: identity first, then lexicographic.
  std::set<PlanePoint> tset(torsion.begin(), torsion.end());
  tset.insert(ctx.base());
  for (const auto& t : tset)
    if (!ctx.on_curve(t)) throw descent_error("basis: torsion point off curve");
  if (tset.size() > 16) throw descent_error("basis: torsion list larger than 16");
  b.torsion_.push_back(ctx.base());
  for (const auto& t : tset)
    if (!(t == ctx.base())) b.torsion_.push_back(t);

  std::size_t ts = b.torsion_.size();
  b.add_table_.assign(ts, std::vector<std::size_t>(ts, 0));
  for (std::size_t i = 0; i < ts; ++i)
    for (std::size_t j = 0; j < ts; ++j) {
      PlanePoint s = ctx.add(b.torsion_[i], b.torsion_[j]);
      auto it = std::find(b.torsion_.begin(), b.torsion_.end(), s);
      if (it == b.torsion_.end()) throw descent_error("basis: torsion list not closed");
      b.add_table_[i][j] = static_cast<std::size_t>(it - b.torsion_.begin());
    }

  HeightMachine hm(ctx);
  for (const auto& g : generators) {
    if (!ctx.on_curve(g)) throw descent_error("basis: generator off curve");
    if (std::find(b.torsion_.begin(), b.torsion_.end(), g) != b.torsion_.end())
      throw descent_error("basis: generator is torsion");
    if (hm.canonical_height(g, tol) <= tol)
      throw descent_error("basis: generator has vanishing canonical height");
  }
  b.generators_ = std::move(generators);
  b.gram_ = hm.gram(b.generators_, tol);
  if (!b.generators_.empty()) {
    double r = static_cast<double>(b.generators_.size());
    double det = det_double(b.gram_);
    // Entry errors of order tol smear a singular determinant up to about
    // r! * tol * (max diagonal)^(r-1); widen the tol^r floor accordingly.
    double diag = 1.0;
    for (std::size_t i = 0; i < b.generators_.size(); ++i)
      diag = std::max(diag, b.gram_[i][i]);
    double floor = std::max(std::pow(tol, r),
                            std::tgamma(r + 1) * tol * std::pow(diag, r - 1) * 8.0);
    if (det <= floor)
      throw descent_error("basis: dependent generators (gram not positive definite)");
  }
  return b;
}

std::size_t MordellWeilBasis::torsion_index(const PlanePoint& pt) const {
  auto it = std::find(torsion_.begin(), torsion_.end(), pt);
  if (it == torsion_.end()) throw descent_error("torsion_index: point not in table");
  return static_cast<std::size_t>(it - torsion_.begin());
}

std::size_t MordellWeilBasis::torsion_add(std::size_t i, std::size_t j) const {
  return add_table_.at(i).at(j);
}

std::size_t MordellWeilBasis::torsion_neg(std::size_t i) const {
  for (std::size_t j = 0; j < torsion_.size(); ++j)
    if (add_table_[i][j] == 0) return j;
  throw std::logic_error("torsion_neg: no inverse in closed table");
}

std::size_t MordellWeilBasis::torsion_mul(long m, std::size_t i) const {
  std::size_t x = i;
  if (m < 0) {
    x = torsion_neg(i);
    m = -m;
  }
  std::size_t acc = 0;
  for (long k = 0; k < m; ++k) acc = add_table_[acc][x];
  return acc;
}

MordellWeilBasis load_mw_basis(const std::string& path, const GroupContext& ctx, double tol) {
  std::ifstream in(path);
  if (!in) throw descent_error("load_mw_basis: cannot open " + path);
  std::vector<PlanePoint> gens, tors;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string tag;
    if (!(is >> tag)) continue;
    std::string a, b, c;
    if (!(is >> a >> b >> c))
      throw descent_error("load_mw_basis: malformed line " + std::to_string(lineno));
    PlanePoint pt{Int(a), Int(b), Int(c)};
    if (tag == "gen") gens.push_back(pt);
    else if (tag == "tor") tors.push_back(pt);
    else throw descent_error("load_mw_basis: unknown tag '" + tag + "' on line " +
                             std::to_string(lineno));
  }
  return MordellWeilBasis::from_points(ctx, std::move(gens), std::move(tors), tol, true);
}

MordellWeilBasis bounded_search_basis(const GroupContext& ctx, long b0, double tol) {
  HeightMachine hm(ctx);
  auto pts = enumerate_points(ctx.form(), b0);

  std::vector<PlanePoint> torsion;
  std::vector<std::pair<double, PlanePoint>> free_pts;
  for (const auto& p : pts) {
    double h = hm.canonical_height(p, tol);
    if (h < tol) {
      // Confirm finite order exactly (orders are at most 12).
      PlanePoint q = p;
      bool tors = p == ctx.base();
      for (int n = 2; !tors && n <= 12; ++n) {
        q = ctx.add(q, p);
        if (q == ctx.base()) tors = true;
      }
      if (tors) {
        torsion.push_back(p);
        continue;
      }
    }
    free_pts.push_back({h, p});
  }
  // Close the torsion subgroup under the group law.
  {
    std::set<PlanePoint> closed(torsion.begin(), torsion.end());
    closed.insert(ctx.base());
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<PlanePoint> cur(closed.begin(), closed.end());
      for (const auto& a : cur)
        for (const auto& c : cur) {
          PlanePoint s = ctx.add(a, c);
          if (closed.insert(s).second) grew = true;
          if (closed.size() > 16) throw std::logic_error("bounded_search_basis: torsion overflow");
        }
    }
    torsion.assign(closed.begin(), closed.end());
  }

  std::sort(free_pts.begin(), free_pts.end(),
            [](const auto& a, const auto& c) {
              return a.first != c.first ? a.first < c.first : a.second < c.second;
            });

  std::vector<PlanePoint> gens;
  MordellWeilBasis basis = MordellWeilBasis::from_points(ctx, gens, torsion, tol, false);
  for (const auto& [h, p] : free_pts) {
    (void)h;
    try {
      coordinates(ctx, basis, p);
      continue;  // already in the span
    } catch (const not_in_span_error&) {
    }
    if (gens.size() >= 3) continue;  // rank cap for the fallback search
    // Size-reduce against the current generators before adopting.
    PlanePoint cand = p;
    for (const auto& g : gens) {
      double num = hm.pairing(cand, g, tol);
      double den = hm.canonical_height(g, tol);
      long k = std::lround(num / den);
      if (k != 0) cand = ctx.sub(cand, ctx.smul(k, g));
    }
    if (std::find(basis.torsion().begin(), basis.torsion().end(), cand) !=
        basis.torsion().end())
      continue;
    gens.push_back(cand);
    basis = MordellWeilBasis::from_points(ctx, gens, torsion, tol, false);
  }
  return basis;
}

MWCoordinates coordinates(const GroupContext& ctx, const MordellWeilBasis& basis,
                          const PlanePoint& d) {
  if (!ctx.on_curve(d)) throw descent_error("coordinates: point not on curve");
  std::size_t r = basis.rank();
  MWCoordinates out;
  out.n.assign(r, 0);
  if (r == 0) {
    auto it = std::find(basis.torsion().begin(), basis.torsion().end(), d);
    if (it == basis.torsion().end())
      throw not_in_span_error("coordinates: point not in span of basis");
    out.torsion = static_cast<std::size_t>(it - basis.torsion().begin());
    return out;
  }
  HeightMachine hm(ctx);
  std::vector<double> v(r);
  for (std::size_t i = 0; i < r; ++i) v[i] = hm.pairing(d, basis.generators()[i], basis.tol());
  std::vector<double> x = solve_double(basis.gram(), v);
  for (std::size_t i = 0; i < r; ++i) {
    double rounded = std::round(x[i]);
    if (std::fabs(x[i] - rounded) >= 0.25)
      throw not_in_span_error("coordinates: rounding verification failed");
    out.n[i] = std::lround(rounded);
  }
  PlanePoint rem = ctx.sub(d, combine(ctx, basis, out.n, 0));
  auto it = std::find(basis.torsion().begin(), basis.torsion().end(), rem);
  if (it == basis.torsion().end())
    throw not_in_span_error("coordinates: point not in span of basis");
  out.torsion = static_cast<std::size_t>(it - basis.torsion().begin());
  return out;
}

bool equivalent_m(const GroupContext& ctx, const MordellWeilBasis& basis,
                  const PlanePoint& p, const PlanePoint& q, long m) {
  if (m < 1) throw descent_error("equivalent_m: m must be >= 1");
  if (m == 1) return true;
  MWCoordinates c = coordinates(ctx, basis, ctx.sub(p, q));
  for (long ni : c.n)
    if (ni % m != 0) return false;
  for (std::size_t j = 0; j < basis.torsion().size(); ++j)
    if (basis.torsion_mul(m, j) == c.torsion) return true;
  return false;
}

std::vector<DescentClass> partition(const GroupContext& ctx, const MordellWeilBasis& basis,
                                    const std::vector<PlanePoint>& points, long m) {
  if (m < 1) throw descent_error("partition: m must be >= 1");
  std::size_t r = basis.rank();
  std::size_t ts = basis.torsion().size();

  // Coset id of each torsion index in T / mT: least index in its coset.
  std::set<std::size_t> m_tors;
  for (std::size_t j = 0; j < ts; ++j) m_tors.insert(basis.torsion_mul(m, j));
  std::vector<std::size_t> coset_id(ts);
  for (std::size_t i = 0; i < ts; ++i) {
    std::size_t best = ts;
    for (std::size_t s : m_tors) {
      std::size_t j = basis.torsion_add(i, s);
      best = std::min(best, j);
    }
    coset_id[i] = best;
  }
  std::size_t n_cosets = ts / m_tors.size();

  std::map<std::pair<std::vector<long>, std::size_t>, std::vector<PlanePoint>> classes;
  for (const auto& p : points) {
    MWCoordinates c = coordinates(ctx, basis, p);
    std::vector<long> key(r);
    for (std::size_t i = 0; i < r; ++i) key[i] = mod_pos(c.n[i], m);
    classes[{key, coset_id[c.torsion]}].push_back(p);
  }

  double mr = std::pow(static_cast<double>(m), static_cast<double>(r));
  if (static_cast<double>(classes.size()) > 16.0 * mr ||
      static_cast<double>(classes.size()) > mr * static_cast<double>(n_cosets))
    throw std::logic_error("partition: class count exceeds descent bound");

  std::vector<DescentClass> out;
  for (auto& [key, members] : classes) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    DescentClass k;
    k.n_mod = key.first;
    k.torsion_coset = key.second;
    k.representative = members.front();
    k.members = std::move(members);
    out.push_back(std::move(k));
  }
  return out;
}

std::optional<PlanePoint> divide_by_m(const GroupContext& ctx, const MordellWeilBasis& basis,
                                      const PlanePoint& d, long m) {
  if (m < 1) throw descent_error("divide_by_m: m must be >= 1");
  MWCoordinates c = coordinates(ctx, basis, d);
  std::vector<long> q(c.n.size());
  for (std::size_t i = 0; i < c.n.size(); ++i) {
    if (c.n[i] % m != 0) return std::nullopt;
    q[i] = c.n[i] / m;
  }
  std::size_t preimage = basis.torsion().size();
  for (std::size_t j = 0; j < basis.torsion().size(); ++j)
    if (basis.torsion_mul(m, j) == c.torsion) {
      preimage = j;
      break;  // least torsion index, deterministic
    }
  if (preimage == basis.torsion().size()) return std::nullopt;
  PlanePoint out = combine(ctx, basis, q, preimage);
  if (!(ctx.smul(m, out) == d))
    throw std::logic_error("divide_by_m: reconstructed preimage failed exact check");
  return out;
}

std::vector<XRPair> xr_pairs_for_class(const GroupContext& ctx, const MordellWeilBasis& basis,
                                       const DescentClass& k, const PlanePoint& r, long m,
                                       long b) {
  if (std::find(k.members.begin(), k.members.end(), r) == k.members.end())
    throw descent_error("xr_pairs_for_class: R not in class");
  std::vector<XRPair> out;
  for (const auto& p : k.members) {
    if (p.height() > b) throw descent_error("xr_pairs_for_class: member exceeds height bound");
    auto q = divide_by_m(ctx, basis, ctx.sub(p, r), m);
    if (!q) throw descent_error("xr_pairs_for_class: division failed (basis incomplete)");
    PlanePoint qq = ctx.add(r, *q);
    if (!(ctx.sub(ctx.smul(m, qq), ctx.smul(m - 1, r)) == p))
      throw std::logic_error("xr_pairs_for_class: pair identity failed");
    out.push_back({p, qq, r, m});
  }
  return out;
}

}  // namespace cubic
