#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "randcurve/experiment.hpp"
#include "randcurve/flow.hpp"
#include "randcurve/silt.hpp"
#include "randcurve/special.hpp"

namespace py = pybind11;
using namespace randcurve;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Brownian curve geometry: paths, local times, transport and flows";

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id") = 0)
      .def("uniform01", &RngStream::uniform01)
      .def("normal", &RngStream::normal)
      .def("substream", &RngStream::substream);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<std::vector<double>>())
      .def_static("uniform", &TimeGrid::uniform)
      .def_readonly("times", &TimeGrid::times);

  py::class_<BrownianPath>(m, "BrownianPath")
      .def_readonly("dim", &BrownianPath::dim)
      .def_readonly("grid", &BrownianPath::grid)
      .def_readonly("points", &BrownianPath::points);

  m.def("sample_path",
        py::overload_cast<std::size_t, const TimeGrid&, RngStream>(&sample_path),
        py::arg("dim"), py::arg("grid"), py::arg("stream"));
  m.def("refine_bridge", &refine_bridge);

  py::class_<PinSet>(m, "PinSet")
      .def(py::init<>())
      .def_readwrite("times", &PinSet::times)
      .def_readwrite("values", &PinSet::values);

  py::class_<Decomposition>(m, "Decomposition")
      .def_readonly("grid", &Decomposition::grid)
      .def_readonly("poly", &Decomposition::poly)
      .def_readonly("residual", &Decomposition::residual)
      .def_readonly("has_tail", &Decomposition::has_tail);

  m.def("decompose",
        py::overload_cast<std::size_t, const PinSet&, RngStream, std::size_t>(&decompose),
        py::arg("dim"), py::arg("pins"), py::arg("stream"), py::arg("points_per_unit") = 256);
  m.def("residual_covariance", &residual_covariance);
  m.def("pin_polyline_at", &pin_polyline_at);

  py::class_<PolygonalLine>(m, "PolygonalLine")
      .def(py::init<>())
      .def_readwrite("vertices", &PolygonalLine::vertices);
  m.def("polyline_eval", &polyline_eval);

  py::class_<TypeSpec>(m, "TypeSpec")
      .def(py::init<>())
      .def_readwrite("centers", &TypeSpec::centers)
      .def_readwrite("radius", &TypeSpec::radius)
      .def_readwrite("sequence", &TypeSpec::sequence);

  py::class_<MatchResult>(m, "MatchResult")
      .def_readonly("matched", &MatchResult::matched)
      .def_readonly("times", &MatchResult::times);
  m.def("match_type", &match_type);
  m.def("match_type_points", &match_type_points);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("std_error", &Estimate::std_error)
      .def_readonly("samples", &Estimate::samples)
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(value=" + std::to_string(e.value) +
               ", std_error=" + std::to_string(e.std_error) + ")";
      });

  py::class_<HitChainQuery>(m, "HitChainQuery")
      .def(py::init<>())
      .def_readwrite("dim", &HitChainQuery::dim)
      .def_readwrite("start", &HitChainQuery::start)
      .def_readwrite("targets", &HitChainQuery::targets)
      .def_readwrite("radius", &HitChainQuery::radius);

  m.def("wiener_hit_constant", &wiener_hit_constant);
  m.def("chain_asymptotic_scale", &chain_asymptotic_scale);
  m.def("gaussian_ball_prob", &gaussian_ball_prob);
  m.def("mc_hit_chain", &mc_hit_chain);
  m.def("type_rate_sequence", &type_rate_sequence);

  m.def("occupation_density", &occupation_density);
  m.def("silt_estimate", &silt_estimate);
  m.def("transformed_silt_prediction", &transformed_silt_prediction);
  m.def("cond_silt_asymptotic", &cond_silt_asymptotic);

  py::class_<PinnedSiltQuery>(m, "PinnedSiltQuery")
      .def(py::init<>())
      .def_readwrite("u", &PinnedSiltQuery::u)
      .def_readwrite("pins", &PinnedSiltQuery::pins);

  py::class_<PinnedSiltDerived>(m, "PinnedSiltDerived")
      .def_readonly("k_star", &PinnedSiltDerived::k_star)
      .def_readonly("v_star", &PinnedSiltDerived::v_star)
      .def_readonly("s_star", &PinnedSiltDerived::s_star);
  m.def("pinned_derived", &pinned_derived);

  py::class_<CondSiltQuadrature>(m, "CondSiltQuadrature")
      .def_readonly("value", &CondSiltQuadrature::value)
      .def_readonly("log_value", &CondSiltQuadrature::log_value)
      .def_readonly("same_interval", &CondSiltQuadrature::same_interval)
      .def_readonly("cross_interval", &CondSiltQuadrature::cross_interval);
  m.def("cond_silt_quadrature", &cond_silt_quadrature, py::arg("query"),
        py::arg("resolution") = 1e-8);
  m.def("cond_silt_mc", &cond_silt_mc, py::arg("query"), py::arg("bandwidth"),
        py::arg("replicas"), py::arg("stream"), py::arg("points_per_unit") = 256);
  m.def("intermittency_probe", &intermittency_probe, py::arg("x_list"), py::arg("bandwidth"),
        py::arg("replicas"), py::arg("stream"), py::arg("grid_steps") = 256);

  py::class_<EmpiricalMeasure>(m, "EmpiricalMeasure")
      .def(py::init<>())
      .def_static("equal_weight", &EmpiricalMeasure::equal_weight)
      .def_readwrite("atoms", &EmpiricalMeasure::atoms)
      .def_readwrite("weights", &EmpiricalMeasure::weights);

  m.def("bounded_cost", &bounded_cost);
  m.def("rho_value", &rho_value);
  m.def("rho", [](const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    const auto [value, plan] = rho(mu, nu);
    return py::make_tuple(value, plan.flows);
  });

  py::class_<Vec2>(m, "Vec2")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Vec2{x, y}; }))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y);

  m.def("field_V_example", &field_V_example);
  m.def("weight_h_default", &weight_h_default);
  m.def("cauchy_closed_form", &cauchy_closed_form);
  m.def("brownian_curve", &brownian_curve);
  m.def("weave_curve", &weave_curve);

  py::enum_<MassCoupling>(m, "MassCoupling")
      .value("PerDomain", MassCoupling::PerDomain)
      .value("Global", MassCoupling::Global);

  // evolve over the worked quadrant configuration and report (t, rho) pairs
  m.def(
      "flow_rho_series",
      [](const std::vector<Vec2>& curve, const std::vector<double>& times, double dt,
         bool oracle_weight, MassCoupling coupling) {
        const FieldSpec field = example_field_spec(oracle_weight);
        const DomainPartition part = quadrant_partition();
        const ParticleSystem sys = particles_from_curve(curve);
        double T = 0.0;
        for (double t : times) T = std::max(T, t);
        const auto traj = evolve(sys, field, part, T, dt, times, coupling);
        const EmpiricalMeasure nu = limit_measure(measure_of(sys), part, field.attractors);
        return rho_to_limit(traj, nu);
      },
      py::arg("curve"), py::arg("times"), py::arg("dt") = 1e-3,
      py::arg("oracle_weight") = false, py::arg("coupling") = MassCoupling::Global);

  m.def("run_experiment_file", [](const std::string& path) {
    const ExperimentConfig config = ExperimentConfig::from_file(path);
    const Report rep = run(config);
    rep.write(config);
    return config.output + ".csv";
  });
  m.def("validate_experiment_file", [](const std::string& path) {
    return validate(ExperimentConfig::from_file(path));
  });
}
