#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "lifegoal/commands.hpp"
#include "lifegoal/errors.hpp"
#include "lifegoal/io.hpp"

namespace py = pybind11;
using namespace lifegoal;

namespace {

// A parsed scenario together with its solved curve.
struct Model {
  Scenario scn;
  std::optional<DetCurve> curve;
  std::optional<StochSolution> sol;
  Landmarks marks;

  explicit Model(const std::string& text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("scenario is not valid JSON: ") + e.what());
    }
    scn = parse_scenario(doc);
    if (scn.stochastic()) {
      sol = solve_stoch(*scn.stoch);
      marks = landmarks(*sol);
    } else {
      curve = det_curve(*scn.det);
      marks = landmarks(*curve);
    }
  }

  double value(double w) const {
    if (sol) return value_stoch(*sol, w).value;
    if (!(w >= 0.0)) throw InvalidParameter("wealth must be >= 0");
    return curve->pv.value(w);
  }

  std::string branch(double w) const {
    const std::string id = sol ? sol->pv.branch_id(w) : curve->pv.branch_id(w);
    return id == "above" ? "at_or_above_ideal" : id;
  }

  py::dict action(double w) const {
    py::dict out;
    if (sol) {
      const StochAction a = action_stoch(*sol, w);
      out["purchase"] = a.purchase;
      out["invest"] = a.invest;
    } else {
      out["purchase"] = det_action(*scn.det, w).buy_amount;
      out["invest"] = 0.0;
    }
    out["branch"] = branch(w);
    return out;
  }

  double wealth(const py::object& w) const {
    if (py::isinstance<py::str>(w)) return resolve_wealth(w.cast<std::string>(), marks);
    return w.cast<double>();
  }
};

py::object from_json(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_lifegoal, m) {
  m.doc() = "Goal-reaching probabilities with life insurance purchase";

  static py::exception<InfeasibleScenario> infeasible(m, "InfeasibleScenario", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InfeasibleScenario& e) {
      py::set_error(infeasible, e.what());
    } catch (const DegenerateAnnuity& e) {
      py::set_error(infeasible, e.what());
    } catch (const BracketError& e) {
      py::set_error(infeasible, e.what());
    }
  });

  py::class_<Model>(m, "Model")
      .def(py::init<const std::string&>(), py::arg("scenario_json"))
      .def_property_readonly("mode", [](const Model& s) { return s.scn.mode; })
      .def_property_readonly("stochastic", [](const Model& s) { return s.scn.stochastic(); })
      .def("landmarks",
           [](const Model& s) {
             py::dict out;
             for (const auto& [name, w] : s.marks.points) out[py::str(name)] = w;
             return out;
           })
      .def("wealth", &Model::wealth, py::arg("w"))
      .def("value", [](const Model& s, const py::object& w) { return s.value(s.wealth(w)); }, py::arg("w"))
      .def("values",
           [](const Model& s, py::array_t<double, py::array::c_style | py::array::forcecast> w) {
             py::array_t<double> out(w.request().shape);
             const double* in = w.data();
             double* res = out.mutable_data();
             for (py::ssize_t i = 0; i < w.size(); ++i) res[i] = s.value(in[i]);
             return out;
           },
           py::arg("w"))
      .def("branch", [](const Model& s, const py::object& w) { return s.branch(s.wealth(w)); }, py::arg("w"))
      .def("action", [](const Model& s, const py::object& w) { return s.action(s.wealth(w)); }, py::arg("w"))
      .def("verify",
           [](const Model& s) {
             py::list out;
             for (const Check& c : verify_checks(s.scn)) out.append(from_json(to_json(c)));
             return out;
           })
      .def(
          "simulate",
          [](const Model& s, const py::object& w, std::uint64_t paths, std::uint64_t seed, const std::string& strategy,
             double dt, unsigned threads) {
            SimConfig cfg;
            cfg.w = s.wealth(w);
            cfg.n_paths = paths;
            cfg.seed = seed;
            cfg.strategy = parse_strategy(strategy);
            cfg.dt = dt;
            cfg.threads = threads;
            ComparisonRecord rec;
            {
              py::gil_scoped_release release;
              rec = s.sol ? compare_stoch(*s.sol, cfg) : compare_det(*s.scn.det, cfg);
            }
            return from_json(to_json(rec));
          },
          py::arg("w"), py::arg("paths") = 10000, py::arg("seed") = 0, py::arg("strategy") = "paper_optimal",
          py::arg("dt") = 1e-3, py::arg("threads") = 0);
}
