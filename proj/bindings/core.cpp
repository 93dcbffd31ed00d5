#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fclt/config.hpp"
#include "fclt/harness.hpp"
#include "fclt/markov.hpp"
#include "fclt/transport.hpp"

namespace py = pybind11;
using namespace fclt;

namespace {

DiscreteMeasure make_measure(std::size_t dim,
                             const std::vector<std::pair<double, std::vector<double>>>& atoms) {
  std::vector<Atom> raw;
  for (const auto& [w, coords] : atoms) raw.push_back({Point(coords), w});
  return DiscreteMeasure::consolidate(dim, std::move(raw));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact transport, functional derivatives and CLT experiments "
            "for empirical measures";

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def_static("create", &make_measure, py::arg("dim"), py::arg("atoms"))
      .def_static("from_text",
                  static_cast<DiscreteMeasure (*)(const std::string&)>(
                      &DiscreteMeasure::from_text))
      .def("to_text", &DiscreteMeasure::to_text)
      .def("dim", &DiscreteMeasure::dim)
      .def("size", &DiscreteMeasure::size)
      .def("moment", &DiscreteMeasure::moment)
      .def("atoms", [](const DiscreteMeasure& mref) {
        std::vector<std::pair<double, std::vector<double>>> out;
        for (const Atom& a : mref.atoms()) {
          std::vector<double> coords;
          for (std::size_t i = 0; i < a.point.dim(); ++i) coords.push_back(a.point[i]);
          out.emplace_back(a.weight, std::move(coords));
        }
        return out;
      });

  m.def("wasserstein",
        [](const DiscreteMeasure& a, const DiscreteMeasure& b, double ell) {
          return wasserstein(a, b, ell).first;
        },
        py::arg("m1"), py::arg("m2"), py::arg("ell") = 2.0);
  m.def("wasserstein0", &wasserstein0);

  m.def("catalog_ids", &catalog_ids);
  m.def("evaluate",
        [](const std::string& id, const DiscreteMeasure& mu) {
          return catalog_lookup(id).evaluate(mu);
        },
        py::arg("functional_id"), py::arg("mu"));
  m.def("derivative",
        [](const std::string& id, const DiscreteMeasure& mu, const std::vector<double>& x) {
          return catalog_lookup(id).derivative(mu, Point(x));
        },
        py::arg("functional_id"), py::arg("mu"), py::arg("x"));

  m.def("poisson_solve",
        [](const std::vector<std::vector<double>>& states,
           const std::vector<std::vector<double>>& kernel, const std::vector<double>& f) {
          std::vector<Point> pts;
          for (const auto& s : states) pts.emplace_back(s);
          MarkovModel model = MarkovModel::create(std::move(pts), kernel);
          PoissonSolution sol = solve_poisson_direct(model, f);
          return py::make_tuple(sol.F, sol.residual, sol.variance);
        },
        py::arg("states"), py::arg("kernel"), py::arg("f"));

  m.def("invariant_weights",
        [](const std::vector<std::vector<double>>& states,
           const std::vector<std::vector<double>>& kernel) {
          std::vector<Point> pts;
          for (const auto& s : states) pts.emplace_back(s);
          return MarkovModel::create(std::move(pts), kernel).invariant_weights();
        });

  m.def("run_experiment_json",
        [](const std::string& config_text, const std::string& base_dir) {
          ParsedConfig parsed = parse_config(config_text, base_dir);
          return report_to_json(run_experiment(parsed.experiment));
        },
        py::arg("config_text"), py::arg("base_dir") = std::string());
}
