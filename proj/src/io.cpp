#include "cubic/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cubic {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string colon_point(const PlanePoint& p) {
  return p.x0.get_str() + ":" + p.x1.get_str() + ":" + p.x2.get_str();
}

std::string fp_point(const FpPoint& p) {
  return std::to_string(p.x0) + ":" + std::to_string(p.x1) + ":" + std::to_string(p.x2);
}

std::string monomial_str(const BiMonomial& m) {
  std::string s;
  for (int v = 0; v < 3; ++v)
    for (int k = 0; k < m.e[v]; ++k) s += "x" + std::to_string(v);
  for (int v = 0; v < 3; ++v)
    for (int k = 0; k < m.f[v]; ++k) s += "y" + std::to_string(v);
  return s.empty() ? "1" : s;
}

}  // namespace

CurveSpec load_curve_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open curve file: " + path);
  CurveSpec spec;
  bool have_form = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    auto fail = [&](const std::string& msg) {
      throw io_error(path + ":" + std::to_string(lineno) + ": " + msg);
    };
    if (tag == "name") {
      if (!(ss >> spec.name)) fail("missing name");
    } else if (tag == "coeffs") {
      std::array<Int, 10> c;
      for (auto& v : c) {
        std::string w;
        if (!(ss >> w)) fail("expected ten coefficients");
        try {
          v = Int(w);
        } catch (const std::invalid_argument&) {
          fail("bad integer '" + w + "'");
        }
      }
      spec.f = CubicForm(c);
      have_form = true;
    } else if (tag == "poly") {
      std::string rest;
      std::getline(ss, rest);
      spec.f = CubicForm::parse(rest);
      have_form = true;
    } else if (tag == "base") {
      long x0, x1, x2;
      if (!(ss >> x0 >> x1 >> x2)) fail("base needs three integers");
      spec.base = PlanePoint(x0, x1, x2);
    } else if (tag == "basis") {
      std::string ref;
      if (!(ss >> ref)) fail("missing basis path");
      spec.basis_ref = ref;
    } else {
      fail("unknown tag '" + tag + "'");
    }
  }
  if (!have_form) throw io_error(path + ": no coeffs/poly line");
  if (spec.name.empty()) spec.name = "curve";
  bool smooth = false;
  try {
    smooth = spec.f.is_smooth();
  } catch (const form_error&) {
    // discriminant degenerate under every shear: the form is singular
  }
  if (!smooth) throw io_error(path + ": form is singular");
  if (spec.base && spec.f.eval(spec.base->x0, spec.base->x1, spec.base->x2) != 0)
    throw io_error(path + ": base point is not on the curve");
  return spec;
}

std::string matrix_hash(const IntMat& m) {
  unsigned long long h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  mix(std::to_string(m.size()));
  for (const auto& row : m) {
    mix("|");
    for (const auto& v : row) {
      mix(v.get_str());
      mix(",");
    }
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

std::string format_count_csv(const std::vector<CountRow>& rows) {
  std::string out = "B,N\n";
  for (const auto& r : rows) out += std::to_string(r.B) + "," + std::to_string(r.N) + "\n";
  return out;
}

std::string format_height_csv(const HeightReport& rep) {
  return "h_naive,h_x,h_hat,tol\n" + fmt(rep.h_naive) + "," + fmt(rep.h_x) + "," +
         fmt(rep.h_hat) + "," + fmt(rep.tol) + "\n";
}

std::string format_class_csv(const std::vector<DescentClass>& classes, long m) {
  std::string out = "label,size,representative\n";
  for (const auto& k : classes) {
    std::string label = "n=(";
    for (std::size_t i = 0; i < k.n_mod.size(); ++i) {
      if (i) label += ";";
      label += std::to_string(k.n_mod[i]);
    }
    label += ")mod" + std::to_string(m) + ";t=" + std::to_string(k.torsion_coset);
    out += label + "," + std::to_string(k.members.size()) + "," +
           colon_point(k.representative) + "\n";
  }
  return out;
}

std::string format_growth_csv(const GrowthReport& rep) {
  std::string out = "B,N,h_max,lattice_bound,calibrated,log_pow,ok\n";
  for (const auto& r : rep.rows)
    out += std::to_string(r.B) + "," + std::to_string(r.N) + "," + fmt(r.h_max) + "," +
           std::to_string(r.lattice_bound) + "," + std::to_string(r.calibrated) + "," +
           fmt(r.log_pow) + "," + (r.ok ? "1" : "0") + "\n";
  return out;
}

std::string format_certificate(const CurveSpec& curve, const ClassBoundReport& rep,
                               const MonomialBasis& basis,
                               const std::vector<ResidueBucket>& buckets) {
  std::ostringstream out;
  out << "class-bound certificate\n";
  out << "curve: " << curve.name << "\n";
  out << "form: " << curve.f.to_string() << "\n";
  out << "coeffs:";
  for (const auto& c : curve.f.coeffs()) out << " " << c.get_str();
  out << "\n";
  out << "discriminant: " << curve.f.discriminant().get_str() << "\n";
  out << "m: " << rep.m << "  a: " << rep.a << "  b: " << rep.b << "  B: " << rep.B << "\n";
  out << "height-exponent A: " << fmt(rep.A) << "\n";
  out << "prime: " << rep.p.get_str();
  if (rep.forced) out << "  (FORCED: vanishing threshold not satisfied)";
  if (rep.widened) out << "  (widened search window)";
  out << "\n";
  out << "E: " << rep.E << "  3(m^2 a + b): " << 3 * (rep.m * rep.m * rep.a + rep.b) << "\n";
  out << "monomial basis:";
  for (const auto& m : basis.elems) out << " " << monomial_str(m);
  out << "\n";
  out << "buckets: " << rep.buckets.size() << "\n";
  for (std::size_t i = 0; i < rep.buckets.size(); ++i) {
    const BucketReport& br = rep.buckets[i];
    out << "bucket " << i << ": Qbar=" << fp_point(br.qbar) << " size=" << br.size << "\n";
    if (i < buckets.size()) {
      EvalMatrix em = build_matrix(buckets[i], basis);
      out << "  matrix-hash: " << matrix_hash(em.entries) << "\n";
      if (buckets[i].pairs.size() >= basis.E()) {
        IntMat minor(em.entries.begin(), em.entries.begin() + basis.E());
        out << "  leading-minor-hash: " << matrix_hash(minor) << "\n";
        try {
          MinorValuation mv = minor_valuation(minor, rep.p);
          if (mv.zero)
            out << "  leading minor: det=0\n";
          else
            out << "  leading minor: v_p(det)=" << mv.valuation
                << " (threshold E(E-1)/2=" << basis.E() * (basis.E() - 1) / 2 << ")\n";
        } catch (const detmethod_error& e) {
          out << "  leading minor: VIOLATION: " << e.what() << "\n";
        }
      }
    }
    if (br.aux_ok) {
      out << "  auxiliary form:";
      for (const auto& c : br.aux_coeffs) out << " " << c.get_str();
      out << "\n  bucket: PASS\n";
    } else {
      out << "  bucket: FAIL (" << br.note << ")\n";
    }
  }
  out << "per-class bound p*3(m^2 a+b): " << rep.per_class_bound.get_str() << "\n";
  out << "overall bound m^r*p*3(m^2 a+b): " << rep.overall_bound.get_str() << "\n";
  out << "result: " << (rep.ok ? "PASS" : "FAIL") << "\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  auto dir = std::filesystem::path(path).parent_path();
  if (!dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot write file: " + path);
  out << content;
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace cubic
