#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cset_transport/error.hpp"
#include "cset_transport/hausdorff.hpp"
#include "cset_transport/io.hpp"
#include "cset_transport/relax.hpp"
#include "cset_transport/transport.hpp"

namespace py = pybind11;
using namespace cst;

namespace {

using Matrix = std::vector<std::vector<double>>;

double as_float(ExtReal v) { return v.value(); }

Matrix rows_of(std::size_t rows, std::size_t cols, const std::vector<double>& flat) {
  Matrix out(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[i][j] = flat[i * cols + j];
  return out;
}

std::vector<double> flatten(const Matrix& m, std::size_t cols) {
  std::vector<double> out;
  for (const auto& row : m) {
    if (row.size() != cols) throw DimensionError("ragged matrix");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

FiniteKernel kernel(const Matrix& m) { return FiniteKernel::from_rows(m, m.empty() ? 0 : m.front().size()); }

MetricData metric(const Matrix& m) { return MetricData::from_rows(m); }

// Instances cross the boundary as JSON text, a dict, a file path or "builtin:<name>".
Instance to_instance(const py::object& obj) {
  if (py::isinstance<Instance>(obj)) return obj.cast<Instance>();
  if (py::isinstance<py::dict>(obj)) {
    std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
    return instance_from_json(parse_json(text));
  }
  std::string s = obj.cast<std::string>();
  std::size_t first = s.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && s[first] == '{') return instance_from_json(parse_json(s));
  return load_instance(s);
}

py::dict by_object(const Instance& x, const std::vector<FiniteKernel>& components) {
  py::dict out;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& k = components[c];
    out[py::str(x.theory->objects()[c])] = rows_of(k.rows(), k.cols(), k.entries());
  }
  return out;
}

py::dict by_object(const Instance& x, const Transformation& t) {
  py::dict out;
  for (std::size_t c = 0; c < t.components.size(); ++c) out[py::str(x.theory->objects()[c])] = t.components[c];
  return out;
}

SearchLimits limits(double guard, bool force) { return {guard, force}; }

HausdorffConfig hausdorff_config(double p, const std::string& cls, const std::string& symmetrize, double guard,
                                 bool force) {
  auto c = component_class_from_name(cls);
  if (!c) throw py::value_error("class must be met, mm, md or all");
  auto s = symmetrize_from_name(symmetrize);
  if (!s) throw py::value_error("symmetrize must be none, max or mean");
  return {p, *c, *s, limits(guard, force)};
}

WassersteinClass wasserstein_class(const std::string& name) {
  auto c = wasserstein_class_from_name(name);
  if (!c) throw py::value_error("class must be mm or noshort");
  return *c;
}

}  // namespace

PYBIND11_MODULE(cset_transport, m) {
  m.doc() = "Exact and relaxed matchings between finite C-sets";
  m.attr("SCHEMA") = kSchema;
  m.attr("inf") = std::numeric_limits<double>::infinity();

  static py::exception<Error> base(m, "CsetError");
  static py::exception<ParseError> parse(m, "ParseError", base.ptr());
  static py::exception<ValidationError> validation(m, "ValidationError", base.ptr());
  static py::exception<GuardExceeded> guard(m, "GuardExceeded", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      PyErr_SetString(parse.ptr(), e.what());
    } catch (const ValidationError& e) {
      PyErr_SetString(validation.ptr(), e.what());
    } catch (const GuardExceeded& e) {
      PyErr_SetString(guard.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  py::class_<Instance>(m, "Instance")
      .def(py::init([](const py::object& source) { return to_instance(source); }), py::arg("source"))
      .def_property_readonly("theory", [](const Instance& x) { return x.theory->name(); })
      .def_property_readonly("objects", [](const Instance& x) { return x.theory->objects(); })
      .def_property_readonly("sizes",
                             [](const Instance& x) {
                               py::dict out;
                               for (std::size_t c = 0; c < x.sets.size(); ++c)
                                 out[py::str(x.theory->objects()[c])] = x.sets[c];
                               return out;
                             })
      .def("size", &Instance::size, py::arg("object"))
      .def("map", [](const Instance& x, const std::string& g) { return x.map(g); }, py::arg("generator"))
      .def("to_json", [](const Instance& x) { return instance_to_json(x).dump(); })
      .def("__repr__", [](const Instance& x) {
        std::string s = "<Instance " + x.theory->name();
        for (std::size_t c = 0; c < x.sets.size(); ++c) s += " " + x.theory->objects()[c] + "=" + std::to_string(x.sets[c]);
        return s + ">";
      });

  m.def("builtin_names", &builtin_instance_names);
  m.def("builtin", [](const std::string& name) { return builtin_instance(name); }, py::arg("name"));
  m.def("cycle", &cycle_graph, py::arg("n"));

  m.def(
      "find_homomorphism",
      [](const py::object& x, const py::object& y, double guard, bool force) -> std::optional<py::dict> {
        Instance a = to_instance(x), b = to_instance(y);
        auto t = find_homomorphism(a, b, limits(guard, force));
        if (!t) return std::nullopt;
        return by_object(a, *t);
      },
      py::arg("x"), py::arg("y"), py::arg("guard") = kDefaultGuard, py::arg("force") = false);

  m.def(
      "markov_feasible",
      [](const py::object& x, const py::object& y, bool measure_preserving) -> std::optional<py::dict> {
        Instance a = to_instance(x), b = to_instance(y);
        auto phi = markov_feasible(a, b, measure_preserving);
        if (!phi) return std::nullopt;
        return by_object(a, phi->components);
      },
      py::arg("x"), py::arg("y"), py::arg("measure_preserving") = false);

  m.def(
      "hausdorff",
      [](const py::object& x, const py::object& y, double p, const std::string& cls, const std::string& symmetrize,
         double guard, bool force) {
        Instance a = to_instance(x), b = to_instance(y);
        HausdorffResult r = hausdorff_distance(a, b, hausdorff_config(p, cls, symmetrize, guard, force));
        py::dict out;
        out["distance"] = as_float(r.distance);
        out["forward"] = as_float(r.forward);
        out["backward"] = r.backward ? py::object(py::float_(as_float(*r.backward))) : py::object(py::none());
        out["witness"] = r.witness ? py::object(by_object(a, *r.witness)) : py::object(py::none());
        py::dict weights;
        for (std::size_t g = 0; g < r.per_generator_weights.size(); ++g)
          weights[py::str(a.theory->generators()[g].name)] = as_float(r.per_generator_weights[g]);
        out["weights"] = weights;
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("p") = 1.0, py::arg("cls") = "mm", py::arg("symmetrize") = "none",
      py::arg("guard") = kDefaultGuard, py::arg("force") = false);

  m.def(
      "wasserstein",
      [](const py::object& x, const py::object& y, double p, const std::string& cls) {
        Instance a = to_instance(x), b = to_instance(y);
        WassersteinResult r = wasserstein_cset_distance(a, b, p, wasserstein_class(cls));
        py::object morphism = r.morphism ? py::object(by_object(a, r.morphism->components)) : py::object(py::none());
        return py::make_tuple(as_float(r.distance), morphism);
      },
      py::arg("x"), py::arg("y"), py::arg("p") = 1.0, py::arg("cls") = "mm");

  m.def(
      "gap",
      [](const py::object& x, const py::object& y, double p, const std::string& cls) {
        RelaxationGap g = relaxation_gap(to_instance(x), to_instance(y), p, hausdorff_config(p, cls, "none", kDefaultGuard, false));
        return py::make_tuple(as_float(g.wasserstein), as_float(g.hausdorff));
      },
      py::arg("x"), py::arg("y"), py::arg("p") = 1.0, py::arg("cls") = "mm");

  m.def(
      "export_lp",
      [](const py::object& x, const py::object& y, const std::string& problem, double p, const std::string& cls,
         bool measure_preserving) {
        Instance a = to_instance(x), b = to_instance(y);
        if (problem == "feasibility") return export_lp(markov_feasibility_lp(a, b, measure_preserving));
        if (problem != "wasserstein") throw py::value_error("problem must be feasibility or wasserstein");
        WassersteinProgram prog = wasserstein_cset_lp(a, b, p, wasserstein_class(cls));
        if (prog.infinite_reason) throw Error("no program to export: " + *prog.infinite_reason);
        return export_lp(prog.model);
      },
      py::arg("x"), py::arg("y"), py::arg("problem") = "feasibility", py::arg("p") = 1.0, py::arg("cls") = "mm",
      py::arg("measure_preserving") = false);

  m.def(
      "optimal_coupling",
      [](const std::vector<double>& mu, const std::vector<double>& nu, const Matrix& cost) {
        OtResult r = optimal_coupling(MeasureData(mu), MeasureData(nu), flatten(cost, nu.size()));
        py::object coupling = py::none();
        if (r.coupling) coupling = py::cast(rows_of(r.coupling->rows(), r.coupling->cols(), r.coupling->entries()));
        return py::make_tuple(as_float(r.cost), coupling);
      },
      py::arg("mu"), py::arg("nu"), py::arg("cost"));

  m.def(
      "wasserstein_measures",
      [](const std::vector<double>& mu, const std::vector<double>& nu, const Matrix& d, double p) {
        return as_float(wasserstein_measures(MeasureData(mu), MeasureData(nu), metric(d), p));
      },
      py::arg("mu"), py::arg("nu"), py::arg("metric"), py::arg("p") = 1.0);

  m.def(
      "wasserstein_kernels",
      [](const Matrix& a, const Matrix& b, const std::vector<double>& mu, const Matrix& d, double p) {
        return as_float(wasserstein_kernels(kernel(a), kernel(b), MeasureData(mu), metric(d), p).cost);
      },
      py::arg("m"), py::arg("n"), py::arg("mu"), py::arg("metric"), py::arg("p") = 1.0);

  m.def(
      "compose_kernels",
      [](const Matrix& a, const Matrix& b) {
        FiniteKernel k = compose_kernels(kernel(a), kernel(b));
        return rows_of(k.rows(), k.cols(), k.entries());
      },
      py::arg("m"), py::arg("n"));
}
