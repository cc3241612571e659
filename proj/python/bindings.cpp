#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "repliscope/cli.hpp"
#include "repliscope/comms.hpp"
#include "repliscope/config.hpp"
#include "repliscope/metrics.hpp"
#include "repliscope/recursion.hpp"
#include "repliscope/series.hpp"
#include "repliscope/simulation.hpp"

namespace py = pybind11;
using namespace repliscope;

namespace {

py::dict distribution_dict(const TallyDistribution& d) {
  py::dict out;
  py::list kinds;
  for (std::size_t k = 0; k < d.kindCount(); ++k) {
    py::list row;
    for (int s = -d.bound(); s <= d.bound(); ++s) row.append(d.at(k, s));
    kinds.append(row);
  }
  out["bound"] = d.bound();
  out["masses"] = kinds;
  return out;
}

py::list table_rows(const MetricsTable& t) {
  py::list rows;
  for (const auto& r : t.rows) {
    py::dict row;
    row["tally"] = r.tally;
    row["mass_true"] = r.massTrue;
    row["mass_false"] = r.massFalse;
    row["precision"] = r.precision ? py::cast(*r.precision) : py::none();
    row["sensitivity"] = r.sensitivity ? py::cast(*r.sensitivity) : py::none();
    row["specificity"] = r.specificity ? py::cast(*r.specificity) : py::none();
    row["aggregated"] = r.aggregated;
    rows.append(row);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Population dynamics of replication and publication";

  py::register_exception<Error>(m, "ReplicationModelError", PyExc_ValueError);

  py::class_<StudyProfile>(m, "StudyProfile")
      .def(py::init<double, double>(), py::arg("power") = 0.8, py::arg("false_positive_rate") = 0.05)
      .def_readwrite("power", &StudyProfile::power)
      .def_readwrite("false_positive_rate", &StudyProfile::falsePositiveRate);

  py::class_<CommunicationPolicy>(m, "CommunicationPolicy")
      .def(py::init([](double cn, double crn, double crp) { return CommunicationPolicy{cn, crn, crp}; }),
           py::arg("c_new_negative") = 1.0, py::arg("c_rep_negative") = 1.0, py::arg("c_rep_positive") = 1.0)
      .def_readwrite("c_new_negative", &CommunicationPolicy::cNewNegative)
      .def_readwrite("c_rep_negative", &CommunicationPolicy::cRepNegative)
      .def_readwrite("c_rep_positive", &CommunicationPolicy::cRepPositive)
      .def("is_full", &CommunicationPolicy::isFull);

  py::enum_<BoundaryMode>(m, "BoundaryMode")
      .value("reflecting", BoundaryMode::reflecting)
      .value("absorbing", BoundaryMode::absorbing);

  py::class_<ModelParams>(m, "ModelParams")
      .def_static(
          "two_kind",
          [](double b, StudyProfile initial, std::optional<StudyProfile> replication, double r,
             CommunicationPolicy comm) {
            return validate_params(ModelParams::twoKind(b, initial, replication.value_or(initial), r, comm));
          },
          py::arg("base_rate"), py::arg("initial") = StudyProfile{}, py::arg("replication") = py::none(),
          py::arg("replication_rate") = 0.2, py::arg("comm") = CommunicationPolicy{})
      .def_readwrite("replication_rate", &ModelParams::replicationRate)
      .def_readwrite("activity_rate", &ModelParams::activityRate)
      .def_readwrite("comm", &ModelParams::comm)
      .def_readwrite("tally_bound", &ModelParams::tallyBound)
      .def_readwrite("boundary_mode", &ModelParams::boundaryMode)
      .def(
          "with_targeting",
          [](const ModelParams& p, double fraction, std::vector<int> tallies) {
            ModelParams q = p;
            q.targeting = Targeting{fraction, std::move(tallies)};
            return validate_params(q);
          },
          py::arg("fraction"), py::arg("tallies"))
      .def("validated", [](const ModelParams& p) { return validate_params(p); })
      .def("warnings", [](const ModelParams& p) { return params_warnings(p); });

  m.def(
      "fixed_point",
      [](const ModelParams& p, double tol, std::size_t maxIter) {
        FixedPointOptions opt;
        opt.tol = tol;
        opt.maxIter = maxIter;
        const auto r = fixed_point(p, opt);
        py::dict out = distribution_dict(r.distribution);
        out["iterations"] = r.iterations;
        out["residual"] = r.residual;
        out["growth_factor"] = r.growthFactor;
        out["empty_target_mass"] = r.emptyTargetMass;
        out["target_saturated"] = r.targetSaturated;
        return out;
      },
      py::arg("params"), py::arg("tol") = 1e-12, py::arg("max_iter") = 1'000'000);

  m.def(
      "series_distribution",
      [](const ModelParams& p, bool normalized) {
        auto d = series_distribution(p);
        if (normalized) d.normalize();
        return distribution_dict(d);
      },
      py::arg("params"), py::arg("normalized") = true);

  m.def(
      "mass",
      [](const ModelParams& p, std::size_t kind, int s) { return mass_arbitrary(p, kind, s); },
      py::arg("params"), py::arg("kind"), py::arg("tally"));
  m.def("pr_activity", &pr_activity, py::arg("params"));
  m.def("pr_new_given_activity", &pr_new_given_activity, py::arg("params"));
  m.def("analytic_total_mass", &analytic_total_mass, py::arg("params"));
  m.def("growth_factor", &growth_factor, py::arg("params"));

  m.def(
      "metrics",
      [](const ModelParams& p, std::optional<std::pair<int, int>> window) {
        auto table = metrics_table(solve_steady_state(p).distribution);
        if (window) table = tail_aggregate(table, window->first, window->second);
        return table_rows(table);
      },
      py::arg("params"), py::arg("window") = py::none());

  m.def(
      "simulate",
      [](const ModelParams& p, std::uint64_t seed, std::uint64_t events, std::size_t maxLiveRecords) {
        SimOptions opt;
        opt.maxLiveRecords = maxLiveRecords;
        const auto o = run(p, seed, events, opt);
        py::dict out = distribution_dict(o.histogram);
        out["events"] = o.events;
        out["effective_events"] = o.effectiveEvents;
        out["live_records"] = o.liveRecords;
        out["population_size"] = o.populationSize;
        out["empty_target_events"] = o.diagnostics.emptyTargetEvents;
        out["cullings"] = o.diagnostics.cullings;
        out["distance_to_fixed_point"] = distance_to(o, fixed_point(p).distribution);
        return out;
      },
      py::arg("params"), py::arg("seed") = 1, py::arg("events") = 1'000'000,
      py::arg("max_live_records") = 1'000'000);

  m.def(
      "suppression_report",
      [](const ModelParams& p) {
        const auto rep = approx_conditions(p);
        py::dict out;
        for (CommParam which : {CommParam::cNewNeg, CommParam::cRepNeg, CommParam::cRepPos}) {
          const auto i = static_cast<std::size_t>(which);
          py::dict d;
          d["numeric_gradient"] = rep.numericGradients[i];
          d["approx_derivative"] = rep.approxDerivatives[i];
          d["condition"] = std::string(rep.inequalities[i]);
          d["condition_holds"] = rep.conditions[i];
          out[py::str(std::string(to_string(which)))] = d;
        }
        out["regime_valid"] = rep.regimeValid;
        return out;
      },
      py::arg("params"));

  m.def("parse_config", [](const std::string& text) { return parse_config(text).params; }, py::arg("text"));
  m.def("bundled_configs", [] {
    std::vector<std::string> names;
    for (const auto& [name, text] : bundled_configs()) names.push_back(name);
    return names;
  });

  m.def(
      "run_command",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_command(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
