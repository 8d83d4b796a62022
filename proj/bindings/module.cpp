#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cubic/io.hpp"
#include "cubic/pipeline.hpp"

namespace py = pybind11;
using namespace cubic;

namespace {

py::int_ to_py(const Int& v) {
  return py::reinterpret_steal<py::int_>(
      PyLong_FromString(v.get_str().c_str(), nullptr, 10));
}

Int from_py(const py::int_& v) {
  auto s = py::reinterpret_steal<py::str>(PyObject_Str(v.ptr()));
  return Int(s.cast<std::string>());
}

PlanePoint make_point(const py::int_& a, const py::int_& b, const py::int_& c) {
  return PlanePoint(from_py(a), from_py(b), from_py(c));
}

py::tuple point_tuple(const PlanePoint& p) {
  return py::make_tuple(to_py(p.x0), to_py(p.x1), to_py(p.x2));
}

}  // namespace

PYBIND11_MODULE(cubiccurves, m) {
  m.doc() = "exact arithmetic on rational points of smooth plane cubics";

  py::register_exception<form_error>(m, "FormError");
  py::register_exception<parse_error>(m, "ParseError");
  py::register_exception<descent_error>(m, "DescentError");
  py::register_exception<detmethod_error>(m, "DetMethodError");
  py::register_exception<lattice_error>(m, "LatticeError");
  py::register_exception<io_error>(m, "IOError");

  py::class_<PlanePoint>(m, "PlanePoint")
      .def(py::init(&make_point))
      .def_property_readonly("coords", &point_tuple)
      .def("height", [](const PlanePoint& p) { return to_py(p.height()); })
      .def("__eq__", [](const PlanePoint& a, const PlanePoint& b) { return a == b; })
      .def("__hash__",
           [](const PlanePoint& p) { return py::hash(point_tuple(p)); })
      .def("__repr__", &PlanePoint::to_string);

  py::class_<CubicForm>(m, "CubicForm")
      .def(py::init([](const std::vector<py::int_>& cs) {
        if (cs.size() != 10) throw form_error("need ten coefficients");
        std::array<Int, 10> a;
        for (int i = 0; i < 10; ++i) a[i] = from_py(cs[i]);
        return CubicForm(a);
      }))
      .def_static("parse", &CubicForm::parse)
      .def("coeffs",
           [](const CubicForm& f) {
             py::list out;
             for (const auto& c : f.coeffs()) out.append(to_py(c));
             return out;
           })
      .def("discriminant", [](const CubicForm& f) { return to_py(f.discriminant()); })
      .def("is_smooth", &CubicForm::is_smooth)
      .def("bad_primes",
           [](const CubicForm& f) {
             py::list out;
             for (const auto& p : f.bad_primes()) out.append(to_py(p));
             return out;
           })
      .def("__repr__", &CubicForm::to_string);

  m.def("enumerate_points", &enumerate_points, py::arg("form"), py::arg("B"));
  m.def("count_table", [](const CubicForm& f, const std::vector<long>& bs) {
    py::list out;
    for (const auto& row : count_table(f, bs)) out.append(py::make_tuple(row.B, row.N));
    return out;
  });

  py::class_<GroupContext>(m, "GroupContext")
      .def(py::init<const CubicForm&, const PlanePoint&>())
      .def("on_curve", &GroupContext::on_curve)
      .def("add", &GroupContext::add)
      .def("neg", &GroupContext::neg)
      .def("sub", &GroupContext::sub)
      .def("smul", &GroupContext::smul)
      .def_property_readonly("base", &GroupContext::base);

  m.def("third_intersection", &third_intersection);
  m.def(
      "canonical_height",
      [](const GroupContext& ctx, const PlanePoint& p, double tol) {
        return canonical_height(ctx, p, tol);
      },
      py::arg("ctx"), py::arg("point"), py::arg("tol") = kDefaultHeightTol);
  m.def(
      "height_pairing",
      [](const GroupContext& ctx, const PlanePoint& p, const PlanePoint& q, double tol) {
        return height_pairing(ctx, p, q, tol);
      },
      py::arg("ctx"), py::arg("p"), py::arg("q"), py::arg("tol") = kDefaultHeightTol);

  py::class_<MordellWeilBasis>(m, "MordellWeilBasis")
      .def_static("from_points", &MordellWeilBasis::from_points, py::arg("ctx"),
                  py::arg("generators"), py::arg("torsion"),
                  py::arg("tol") = kDefaultHeightTol, py::arg("verified") = true)
      .def_property_readonly("rank", &MordellWeilBasis::rank)
      .def_property_readonly("generators", &MordellWeilBasis::generators)
      .def_property_readonly("torsion", &MordellWeilBasis::torsion)
      .def_property_readonly("gram", &MordellWeilBasis::gram)
      .def_property_readonly("verified", &MordellWeilBasis::verified);

  m.def("load_mw_basis", &load_mw_basis, py::arg("path"), py::arg("ctx"),
        py::arg("tol") = kDefaultHeightTol);
  m.def("bounded_search_basis", &bounded_search_basis, py::arg("ctx"), py::arg("b0") = 100,
        py::arg("tol") = kDefaultHeightTol);

  py::class_<DescentClass>(m, "DescentClass")
      .def_readonly("n_mod", &DescentClass::n_mod)
      .def_readonly("torsion_coset", &DescentClass::torsion_coset)
      .def_readonly("representative", &DescentClass::representative)
      .def_readonly("members", &DescentClass::members);

  m.def("partition", &partition);
  m.def("equivalent_m", &equivalent_m);
  m.def("divide_by_m", &divide_by_m);

  m.def("dimension_formula", &dimension_formula);
  m.def("monomial_basis_size",
        [](const GroupContext& ctx, const PlanePoint& r, long m, int a, int b) {
          return monomial_basis(ctx, r, m, a, b).E();
        });

  py::class_<ClassBoundReport>(m, "ClassBoundReport")
      .def_readonly("ok", &ClassBoundReport::ok)
      .def_readonly("E", &ClassBoundReport::E)
      .def_property_readonly("p", [](const ClassBoundReport& r) { return to_py(r.p); })
      .def_property_readonly(
          "per_class_bound",
          [](const ClassBoundReport& r) { return to_py(r.per_class_bound); })
      .def_property_readonly("overall_bound", [](const ClassBoundReport& r) {
        return to_py(r.overall_bound);
      });

  m.def(
      "class_bound",
      [](const GroupContext& ctx, const MordellWeilBasis& basis, const DescentClass& k,
         long m, long a, long b, long B) {
        return class_bound(ctx, basis, k, k.representative, m, a, b, B);
      },
      py::arg("ctx"), py::arg("basis"), py::arg("cls"), py::arg("m"), py::arg("a"),
      py::arg("b"), py::arg("B"));

  py::class_<HeightForm>(m, "HeightForm")
      .def_static("from_gram", &HeightForm::from_gram, py::arg("gram"), py::arg("tol"),
                  py::arg("source") = "");
  m.def(
      "ellipsoid_count",
      [](const HeightForm& f, double rho) {
        auto ec = ellipsoid_count(f, rho);
        return py::make_tuple(ec.count, ec.ambiguous);
      },
      py::arg("form"), py::arg("rho"));
  m.def("davenport_check", [](const HeightForm& f, double rho) {
    auto dc = davenport_check(f, rho);
    return py::make_tuple(dc.count, dc.bound, dc.ok);
  });

  py::class_<TheoremOneReport>(m, "TheoremOneReport")
      .def_readonly("N", &TheoremOneReport::N)
      .def_readonly("envelope", &TheoremOneReport::envelope)
      .def_readonly("ratio", &TheoremOneReport::ratio)
      .def_readonly("corollary_envelope", &TheoremOneReport::corollary_envelope)
      .def_readonly("ok", &TheoremOneReport::ok);
  m.def("theorem_one_report", &theorem_one_report, py::arg("ctx"), py::arg("basis"),
        py::arg("m"), py::arg("B"), py::arg("c0") = 30.0,
        py::arg("a_exponent") = std::nullopt);
}
