#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ckloci/analysis.hpp"
#include "ckloci/loci.hpp"
#include "ckloci/polylog.hpp"
#include "ckloci/roots.hpp"
#include "ckloci/steinberg.hpp"

namespace py = pybind11;
using namespace ckloci;

namespace {

mpz_class to_mpz(const py::int_& x) { return mpz_class(py::str(x).cast<std::string>()); }

py::int_ to_py(const mpz_class& x) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(x.get_str().c_str(), nullptr, 10))); }

PadicNumber make_padic(Prime p, const py::object& value, int precision) {
  if (py::isinstance<py::int_>(value)) return PadicNumber::from_integer(p, to_mpz(value), precision);
  if (py::isinstance<py::str>(value)) {
    const std::string s = value.cast<std::string>();
    // "a/b" is a rational; anything else is the printer's digit format.
    if (s.find('O') == std::string::npos) return PadicNumber::from_rational(p, mpq_class(s), precision);
    return PadicNumber::parse(s);
  }
  throw py::type_error("expected int, 'a/b' or a p-adic expansion");
}

std::vector<std::pair<std::string, std::string>> terms_of(const SteinbergDecomposition& d) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& t : d.terms) out.emplace_back(t.c.get_str(), t.t.get_str());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "p-adic polylogarithms and refined Chabauty-Kim loci";

  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InsufficientBound>(m, "InsufficientBound", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<PadicNumber>(m, "Padic")
      .def(py::init(&make_padic), py::arg("p"), py::arg("value"), py::arg("precision"))
      .def_static("parse", &PadicNumber::parse)
      .def_property_readonly("p", &PadicNumber::prime)
      .def_property_readonly("precision", &PadicNumber::precision)
      .def_property_readonly("valuation", &PadicNumber::valuation)
      .def_property_readonly("is_zero", &PadicNumber::is_zero)
      .def("digits", &PadicNumber::digits)
      .def("lift", [](const PadicNumber& x) { return to_py(x.lift()); })
      .def("with_precision", &PadicNumber::with_precision)
      .def("indistinguishable_from", &PadicNumber::indistinguishable_from)
      .def(-py::self)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self / py::self)
      .def(py::self == py::self)
      .def("__str__", &PadicNumber::to_string)
      .def("__repr__", [](const PadicNumber& x) { return "Padic(" + x.to_string() + ")"; });

  m.def("teichmuller", &teichmuller, py::arg("p"), py::arg("a"), py::arg("precision"));
  m.def("padic_log", py::overload_cast<const PadicNumber&, int>(&padic_log), py::arg("x"), py::arg("precision"));
  m.def("polylog", &polylog_eval, py::arg("z"), py::arg("m"), py::arg("precision"), "Li_m(z) for a unit z != 1 mod p");

  m.def(
      "zp_roots",
      [](Prime p, const std::vector<py::int_>& coeffs, int order) {
        std::vector<mpz_class> c;
        for (const auto& x : coeffs) c.push_back(to_mpz(x));
        std::vector<PadicNumber> out;
        for (const auto& r : zp_roots(SeriesApprox::from_integers(p, c, order))) out.push_back(r.root);
        return out;
      },
      py::arg("p"), py::arg("coeffs"), py::arg("order"),
      "Roots in Z_p of sum coeffs[k] t^k known modulo p^order.");

  py::class_<SteinbergDecomposition>(m, "SteinbergDecomposition")
      .def_readonly("q", &SteinbergDecomposition::q)
      .def_readonly("p", &SteinbergDecomposition::p)
      .def_readonly("bound", &SteinbergDecomposition::bound)
      .def_property_readonly("terms", &terms_of)
      .def("verify", &verify_decomposition)
      .def("to_json", [](const SteinbergDecomposition& d) { return to_json(d); });
  m.def("steinberg_decompose", &steinberg_decompose, py::arg("l"), py::arg("q"), py::arg("bound"), py::arg("p"));
  m.def("default_decomposition", &default_decomposition, py::arg("q"), py::arg("p"));
  m.def("dcw_coefficient", &dcw_coefficient, py::arg("p"), py::arg("precision"), py::arg("dec"));
  m.def("resolve_a_q2", &resolve_a_q2, py::arg("p"), py::arg("q"), py::arg("precision"));

  py::enum_<PointStatus>(m, "PointStatus")
      .value("ROOT", PointStatus::Root)
      .value("CONFIRMED", PointStatus::Confirmed)
      .value("UNRESOLVED", PointStatus::Unresolved);

  py::class_<LocusPoint>(m, "LocusPoint")
      .def_readonly("disc", &LocusPoint::disc)
      .def_readonly("z", &LocusPoint::z)
      .def_readonly("status", &LocusPoint::status);

  py::class_<CKLocus>(m, "CKLocus")
      .def_readonly("p", &CKLocus::p)
      .def_readonly("q", &CKLocus::q)
      .def_readonly("depth", &CKLocus::depth)
      .def_readonly("precision", &CKLocus::precision)
      .def_readonly("points", &CKLocus::points)
      .def_readonly("escalations", &CKLocus::escalations)
      .def("disc_counts", &CKLocus::disc_counts)
      .def("__len__", &CKLocus::size)
      .def("listing", [](const CKLocus& l) { return render_listing(l); })
      .def("to_json", [](const CKLocus& l) { return to_json(l); });

  py::class_<CoeffSet>(m, "CoeffSet")
      .def_readonly("a_q2", &CoeffSet::a_q2)
      .def_readonly("a", &CoeffSet::a)
      .def_readonly("b", &CoeffSet::b)
      .def_readonly("c", &CoeffSet::c);

  m.def(
      "depth2_locus",
      [](Prime p, unsigned q, int N, std::optional<PadicNumber> a_q2) {
        return depth2_locus(p, q, N, a_q2 ? *a_q2 : resolve_a_q2(p, q, N + 4));
      },
      py::arg("p"), py::arg("q") = 3, py::arg("precision") = 10, py::arg("a_q2") = std::nullopt);
  m.def("coeffs_z16", &coeffs_z16, py::arg("p"), py::arg("precision"));
  m.def("f4_eval", &f4_eval, py::arg("z"), py::arg("precision"), py::arg("coeffs"));
  m.def(
      "depth4_locus",
      [](Prime p, int N, int N_max) { return depth4_locus_adaptive(p, PrecisionPolicy(N, std::max(N, N_max))); },
      py::arg("p"), py::arg("precision") = 10, py::arg("max_precision") = 40);
  m.def(
      "locus_11", [](Prime p, int N, int N_max) { return locus_11(p, PrecisionPolicy(N, std::max(N, N_max))); },
      py::arg("p"), py::arg("precision") = 10, py::arg("max_precision") = 40);

  py::class_<KimReport>(m, "KimReport")
      .def_readonly("p", &KimReport::p)
      .def_readonly("passed", &KimReport::pass)
      .def_readonly("verdict", &KimReport::verdict)
      .def_readonly("precision", &KimReport::precision)
      .def_readonly("depth2_size", &KimReport::depth2_size)
      .def_readonly("depth4_size", &KimReport::depth4_size)
      .def_readonly("escalations", &KimReport::escalations)
      .def_readonly("note", &KimReport::note);
  m.def("verify_kim", &verify_kim, py::arg("p"), py::arg("precision") = 12, py::arg("max_precision") = 40);

  m.def("is_wieferich", &is_wieferich, py::arg("p"), py::arg("b"));

  py::class_<SurveyRecord>(m, "SurveyRecord")
      .def_readonly("p", &SurveyRecord::p)
      .def_readonly("q", &SurveyRecord::q)
      .def_readonly("size", &SurveyRecord::size)
      .def_readonly("histogram", &SurveyRecord::histogram)
      .def_readonly("nu", &SurveyRecord::nu)
      .def_readonly("wieferich2", &SurveyRecord::wieferich2)
      .def_readonly("wieferichq", &SurveyRecord::wieferichq)
      .def_readonly("regime", &SurveyRecord::regime)
      .def_readonly("observed", &SurveyRecord::observed)
      .def_readonly("error", &SurveyRecord::error);
  m.def(
      "survey",
      [](unsigned q, Prime p_min, Prime p_max, int N) {
        SurveyOptions opts;
        opts.precision = N;
        py::gil_scoped_release release;
        return survey(q, p_min, p_max, opts);
      },
      py::arg("q"), py::arg("p_min"), py::arg("p_max"), py::arg("precision") = 10);
}
