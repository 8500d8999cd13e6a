#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gdd/bench.hpp"
#include "gdd/error.hpp"
#include "gdd/gdd.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

gdd::PdfMethod pdf_method(const std::string& name) {
  if (auto m = gdd::parse_pdf_method(name)) return *m;
  throw gdd::Error(gdd::ErrorCode::InvalidArgument, "unknown pdf method '" + name + "'");
}

gdd::CdfMethod cdf_method(const std::string& name) {
  if (auto m = gdd::parse_cdf_method(name.rfind("cdf:", 0) == 0 ? name.substr(4) : name)) return *m;
  throw gdd::Error(gdd::ErrorCode::InvalidArgument, "unknown cdf method '" + name + "'");
}

template <class Eval>
py::object map_points(py::object x, Eval eval) {
  if (py::isinstance<py::float_>(x) || py::isinstance<py::int_>(x)) return py::float_(eval(x.cast<double>()));
  auto in = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(x);
  if (!in) throw py::type_error("x must be a number or an array of numbers");
  py::array_t<double> out(in.request().shape);
  const double* src = in.data();
  double* dst = out.mutable_data();
  for (py::ssize_t i = 0; i < in.size(); ++i) dst[i] = eval(src[i]);
  return std::move(out);
}

}  // namespace

PYBIND11_MODULE(_gddist, m) {
  m.doc() = "Gamma difference distribution: X1 - X2 + theta for independent gamma variables";

  // Messages start with the error code, e.g. "AccuracyNotMet: ...".
  py::register_exception<gdd::Error>(m, "GDDError", PyExc_ValueError);

  py::class_<gdd::GDDParams>(m, "GDDParams")
      .def(py::init<double, double, double, double, double>(), "alpha1"_a, "beta1"_a, "alpha2"_a, "beta2"_a,
           "theta"_a = 0.0)
      .def_property_readonly("alpha1", &gdd::GDDParams::alpha1)
      .def_property_readonly("beta1", &gdd::GDDParams::beta1)
      .def_property_readonly("alpha2", &gdd::GDDParams::alpha2)
      .def_property_readonly("beta2", &gdd::GDDParams::beta2)
      .def_property_readonly("theta", &gdd::GDDParams::theta)
      .def_property_readonly("alpha", &gdd::GDDParams::alpha)
      .def_property_readonly("beta", &gdd::GDDParams::beta)
      .def(py::self == py::self)
      .def("__repr__", [](const gdd::GDDParams& p) {
        return "GDDParams(alpha1=" + py::repr(py::float_(p.alpha1())).cast<std::string>() +
               ", beta1=" + py::repr(py::float_(p.beta1())).cast<std::string>() +
               ", alpha2=" + py::repr(py::float_(p.alpha2())).cast<std::string>() +
               ", beta2=" + py::repr(py::float_(p.beta2())).cast<std::string>() +
               ", theta=" + py::repr(py::float_(p.theta())).cast<std::string>() + ")";
      });

  m.def("reflect", &gdd::reflect, "params"_a, "Parameters of -X.");

  m.def(
      "pdf",
      [](const gdd::GDDParams& p, py::object x, const std::string& method, double eps_r) {
        const auto pm = pdf_method(method);
        return map_points(x, [&](double v) { return gdd::pdf(p, v, pm, eps_r).value; });
      },
      "params"_a, "x"_a, "method"_a = "cf-de", "eps_r"_a = 1e-12,
      "Density at x (a number or an array). Methods: closed-u, closed-w, closed-2f0, conv-de, cf-trapezoid, cf-de.");
  m.def(
      "cdf",
      [](const gdd::GDDParams& p, py::object x, const std::string& method, double eps_r) {
        const auto cm = cdf_method(method);
        return map_points(x, [&](double v) { return gdd::cdf(p, v, cm, eps_r).value; });
      },
      "params"_a, "x"_a, "method"_a = "cf-de", "eps_r"_a = 1e-12,
      "Distribution function at x. Methods: cdf-integral-de, cf-trapezoid, cf-de.");

  m.def("pdf_at_location", &gdd::pdf_at_location, "params"_a);
  m.def("cdf_at_zero", &gdd::cdf_at_zero, "params"_a);
  m.def(
      "moments",
      [](const gdd::GDDParams& p) {
        const auto mo = gdd::moments(p);
        return py::dict("mean"_a = mo.mean, "variance"_a = mo.variance, "skewness"_a = mo.skewness,
                        "kurtosis"_a = mo.kurtosis);
      },
      "params"_a);
  m.def("mode", &gdd::mode, "params"_a, "tol"_a = 1e-13);
  m.def("pdf_derivative", &gdd::pdf_derivative, "params"_a, "x"_a, "eps_r"_a = 1e-13);
  m.def("six_sigma_interval", &gdd::six_sigma_interval, "params"_a);
  m.def(
      "mm_gdd_params",
      [](int n, int k, int l, double v_norm_sq, double s0_sq, double sj_sq) {
        return gdd::mm_gdd_params(gdd::MMContext{n, k, l, v_norm_sq, s0_sq, sj_sq});
      },
      "n"_a, "k"_a, "l"_a, "v_norm_sq"_a, "s0_sq"_a, "sj_sq"_a);

  m.def(
      "reference",
      [](const gdd::GDDParams& p, double lo, double hi, int n, const std::string& quantity) {
        if (quantity != "pdf" && quantity != "cdf") throw py::value_error("quantity must be 'pdf' or 'cdf'");
        const auto r = gdd::bench::cached_reference(
            p, gdd::bench::Grid{lo, hi, n}, quantity == "pdf" ? gdd::bench::Quantity::Pdf : gdd::bench::Quantity::Cdf);
        return py::make_tuple(py::array_t<double>(r.x.size(), r.x.data()),
                              py::array_t<double>(r.value.size(), r.value.data()));
      },
      "params"_a, "lo"_a = -3.0, "hi"_a = 4.0, "n"_a = 1000, "quantity"_a = "pdf",
      "Oracle values on a uniform grid with both endpoints; returns (x, values).");
  m.def(
      "bench",
      [](const gdd::GDDParams& p, const std::string& method, double eps_r, double lo, double hi, int n, int runs) {
        const auto meth = gdd::bench::parse_method(method);
        if (!meth) throw py::value_error("unknown method '" + method + "'");
        const gdd::bench::ExperimentSpec spec{p, gdd::bench::Grid{lo, hi, n}, *meth, eps_r, runs, 1};
        spec.validate();
        const auto ref = gdd::bench::cached_reference(p, spec.grid, gdd::bench::quantity_of(*meth));
        return gdd::bench::to_json(gdd::bench::run_experiment(spec, ref));
      },
      "params"_a, "method"_a = "cf-de", "eps_r"_a = 1e-12, "lo"_a = -3.0, "hi"_a = 4.0, "n"_a = 1000, "runs"_a = 3,
      "Time one method against the reference; returns the report as a JSON string.");
}
