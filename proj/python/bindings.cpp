#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bisz/analysis.hpp"
#include "bisz/deriv.hpp"
#include "bisz/error.hpp"
#include "bisz/fnexpr.hpp"
#include "bisz/kernel.hpp"
#include "bisz/moments.hpp"
#include "bisz/operator.hpp"

namespace py = pybind11;
using namespace bisz;

namespace {

// Accepts an expression string, "builtin:NAME", or a Python callable f(x, y).
BivariateFn to_fn(const py::object& f) {
  if (py::isinstance<py::str>(f)) return function_from_spec(f.cast<std::string>());
  if (!PyCallable_Check(f.ptr())) throw py::type_error("f must be an expression string or a callable");
  auto fn = f.cast<py::function>();
  return BivariateFn("<callable>", [fn](double x, double y) { return fn(x, y).cast<double>(); });
}

EvalConfig config(double tol, std::int64_t max_terms) {
  EvalConfig c;
  c.tail_tol = tol;
  c.max_terms_per_axis = max_terms;
  c.validate();
  return c;
}

py::dict eval_dict(const EvalResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["k1_max"] = r.k1_max;
  d["k2_max"] = r.k2_max;
  d["tail_bound"] = r.tail_bound;
  return d;
}

TablePreset preset_from(const std::string& s) {
  if (s == "table1") return TablePreset::Table1;
  if (s == "table2") return TablePreset::Table2;
  throw InvalidParameter("preset must be table1 or table2");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bivariate Szasz-Mirakjan type operators";

  auto base = py::register_exception<Error>(m, "BiszError", PyExc_RuntimeError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  auto perr = py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<UnknownIdentifier>(m, "UnknownIdentifier", perr.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", base.ptr());
  py::register_exception<UnknownBuiltin>(m, "UnknownBuiltin", base.ptr());
  py::register_exception<TruncationFailure>(m, "TruncationFailure", base.ptr());

  m.def("lambda_factor", &lambda, py::arg("m"), py::arg("a"));
  m.def("poisson_mean", &poisson_mean, py::arg("m"), py::arg("a"), py::arg("x"));
  m.def("builtin_names", &builtin_names);

  m.def(
      "evaluate_expression",
      [](const std::string& src, double x, double y) { return evaluate(parse(src), x, y); },
      py::arg("src"), py::arg("x"), py::arg("y"));
  m.def(
      "pretty_print", [](const std::string& src) { return pretty_print(parse(src)); }, py::arg("src"));

  m.def(
      "apply_yhat",
      [](const py::object& f, int mm, int n, double a, double x, double y, double tol, std::int64_t max_terms) {
        return eval_dict(apply_yhat(OperatorParams(mm, n, a), to_fn(f), x, y, config(tol, max_terms)));
      },
      py::arg("f"), py::arg("m"), py::arg("n"), py::arg("a"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-12,
      py::arg("max_terms") = 1'000'000);
  m.def(
      "apply_szasz",
      [](const py::object& f, int mm, int n, double x, double y, double tol, std::int64_t max_terms) {
        return eval_dict(apply_szasz(mm, n, to_fn(f), x, y, config(tol, max_terms)));
      },
      py::arg("f"), py::arg("m"), py::arg("n"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-12,
      py::arg("max_terms") = 1'000'000);

  m.def(
      "moments",
      [](int mm, int n, double a, double x, double y) {
        const OperatorParams p(mm, n, a);
        const auto s = moment_set(p, x, y);
        const auto dp = delta_prime(p, x, y);
        const auto mixed = mixed_weighted_moments(p, x, y);
        py::dict d;
        d["e10"] = s.raw.e10;
        d["e01"] = s.raw.e01;
        d["e20"] = s.raw.e20;
        d["e02"] = s.raw.e02;
        d["c1x"] = s.central.c1x;
        d["c1y"] = s.central.c1y;
        d["c2x"] = s.central.c2x;
        d["c2y"] = s.central.c2y;
        d["c4x"] = s.central.c4x;
        d["c4y"] = s.central.c4y;
        d["delta_m"] = dp.dm;
        d["delta_n"] = dp.dn;
        d["mixed_self"] = mixed.self;
        d["mixed_cross"] = mixed.cross;
        return d;
      },
      py::arg("m"), py::arg("n"), py::arg("a"), py::arg("x"), py::arg("y"));

  m.def(
      "asymptotic_limits",
      [](double x, double a) {
        const auto l = asymptotic_limits(x, a);
        return py::make_tuple(l.m_c1, l.m_c2, l.c4, l.m_c4, l.m2_c4);
      },
      py::arg("x"), py::arg("a"));

  m.def(
      "deriv",
      [](const py::object& f, int mm, int n, double a, double x, double y, const std::string& axis) {
        const OperatorParams p(mm, n, a);
        if (axis != "x" && axis != "y") throw InvalidParameter("axis must be x or y");
        const auto r = axis == "x" ? dx_yhat(p, to_fn(f), x, y) : dy_yhat(p, to_fn(f), x, y);
        py::dict d;
        d["value"] = r.value;
        d["method"] = r.method == DerivMethod::Identity ? "identity" : "finite-difference";
        d["step"] = r.step ? py::cast(*r.step) : py::none();
        return d;
      },
      py::arg("f"), py::arg("m"), py::arg("n"), py::arg("a"), py::arg("x"), py::arg("y"), py::arg("axis") = "x");

  m.def(
      "error_table",
      [](const std::string& preset, std::optional<double> a, std::optional<std::pair<double, double>> point) {
        const auto p = preset_from(preset);
        const double base = a.value_or(p == TablePreset::Table1 ? kTable1Base : kTable2Base);
        const auto t = error_table(p, base, point);
        py::list rows;
        for (const auto& r : t.rows) {
          for (std::size_t i = 0; i < t.ms.size(); ++i) {
            py::dict d;
            d["x"] = r.x;
            d["y"] = r.y;
            d["m"] = t.ms[i];
            d["n"] = t.ms[i];
            d["a"] = t.a;
            d["error_yhat"] = r.error_yhat[i];
            if (!r.error_szasz.empty()) d["error_szasz"] = r.error_szasz[i];
            rows.append(d);
          }
        }
        return py::make_tuple(rows, t.point_provenance);
      },
      py::arg("preset"), py::arg("a") = py::none(), py::arg("point") = py::none());

  m.def(
      "recover_table2_point",
      [](double a) {
        const auto r = recover_table2_point(a);
        return py::make_tuple(r.x, r.y);
      },
      py::arg("a") = kTable2Base);

  m.def(
      "voronovskaya",
      [](const py::object& f, double x, double y, double a, const std::vector<int>& ms) {
        const auto rep = voronovskaya_check(to_fn(f), x, y, a, ms);
        py::list recs;
        for (const auto& r : rep.records) {
          py::dict d;
          d["m"] = r.m;
          d["value"] = r.scaled;
          d["residual"] = r.residual;
          recs.append(d);
        }
        py::dict out;
        out["limit"] = rep.limit;
        out["order"] = rep.order;
        out["records"] = recs;
        return out;
      },
      py::arg("f"), py::arg("x"), py::arg("y"), py::arg("a"), py::arg("m_list"));

  m.def(
      "order_fit",
      [](const std::vector<std::pair<double, double>>& samples) {
        const auto r = order_fit(samples);
        return py::make_tuple(r.order, r.constant);
      },
      py::arg("samples"));

  m.def(
      "comparison_grid",
      [](const py::object& f, int mm, int n, double a, std::tuple<double, double, double, double> dom, int steps) {
        const auto [x0, x1, y0, y1] = dom;
        py::list out;
        for (const auto& r : comparison_grid(to_fn(f), OperatorParams(mm, n, a), Domain{x0, x1, y0, y1}, steps)) {
          py::dict d;
          d["x"] = r.x;
          d["y"] = r.y;
          d["f"] = r.f;
          d["yhat"] = r.yhat;
          d["szasz"] = r.szasz;
          d["error_yhat"] = r.error_yhat;
          d["error_szasz"] = r.error_szasz;
          out.append(d);
        }
        return out;
      },
      py::arg("f"), py::arg("m"), py::arg("n"), py::arg("a"), py::arg("domain") = std::make_tuple(0.0, 1.0, 0.0, 1.0),
      py::arg("steps") = 11);
}
