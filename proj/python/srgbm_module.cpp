#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srgbm/analytics.hpp"
#include "srgbm/ensemble_stats.hpp"
#include "srgbm/errors.hpp"
#include "srgbm/params.hpp"
#include "srgbm/rng.hpp"
#include "srgbm/sde.hpp"
#include "srgbm/version.hpp"

namespace py = pybind11;
using namespace srgbm;

PYBIND11_MODULE(_srgbm, m) {
    m.doc() = "Simulation and analytics for geometric Brownian motion under "
              "Poissonian stochastic resetting";
    m.attr("__version__") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<double, double, double, double>(), py::arg("mu"), py::arg("sigma2"),
             py::arg("r"), py::arg("x0") = 1.0)
        .def_readwrite("mu", &ModelParams::mu)
        .def_readwrite("sigma2", &ModelParams::sigma2)
        .def_readwrite("r", &ModelParams::r)
        .def_readwrite("x0", &ModelParams::x0)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(mu=" + std::to_string(p.mu) +
                   ", sigma2=" + std::to_string(p.sigma2) + ", r=" + std::to_string(p.r) +
                   ", x0=" + std::to_string(p.x0) + ")";
        });

    py::class_<SimGrid>(m, "SimGrid")
        .def(py::init<double, std::int64_t>(), py::arg("dt"), py::arg("n_steps"))
        .def_readwrite("dt", &SimGrid::dt)
        .def_readwrite("n_steps", &SimGrid::n_steps)
        .def_property_readonly("horizon", &SimGrid::horizon);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("positions", &Trajectory::positions)
        .def_readonly("reset_steps", &Trajectory::reset_steps)
        .def_readonly("record_stride", &Trajectory::record_stride);

    py::class_<PathPair>(m, "PathPair")
        .def_readonly("times", &PathPair::times)
        .def_readonly("euler", &PathPair::euler)
        .def_readonly("renewal", &PathPair::renewal)
        .def_readonly("reset_steps", &PathPair::reset_steps);

    // sde
    m.def(
        "simulate_euler",
        [](const ModelParams& p, const SimGrid& g, std::uint64_t master_seed,
           std::uint64_t stream_id, std::int64_t record_stride) {
            RngStream stream(master_seed, stream_id);
            return simulate_euler(p, g, stream, record_stride);
        },
        py::arg("params"), py::arg("grid"), py::arg("master_seed"),
        py::arg("stream_id") = 0, py::arg("record_stride") = 1);
    m.def(
        "simulate_with_overlay",
        [](const ModelParams& p, const SimGrid& g, std::uint64_t master_seed,
           std::uint64_t stream_id) {
            RngStream stream(master_seed, stream_id);
            return simulate_with_overlay(p, g, stream);
        },
        py::arg("params"), py::arg("grid"), py::arg("master_seed"),
        py::arg("stream_id") = 0);
    m.def(
        "sample_position_exact",
        [](const ModelParams& p, double t, std::uint64_t master_seed,
           std::uint64_t stream_id) {
            RngStream stream(master_seed, stream_id);
            return sample_position_exact(p, t, stream);
        },
        py::arg("params"), py::arg("t"), py::arg("master_seed"), py::arg("stream_id") = 0);
    m.def("generate_ensemble", &generate_ensemble, py::arg("params"), py::arg("grid"),
          py::arg("n_traj"), py::arg("master_seed"), py::arg("record_stride") = 1,
          py::arg("stream_base") = 0);
    m.def("ensemble_finals_euler", &ensemble_finals_euler, py::arg("params"),
          py::arg("grid"), py::arg("n_traj"), py::arg("master_seed"),
          py::arg("stream_base") = 0);
    m.def("ensemble_finals_exact", &ensemble_finals_exact, py::arg("params"), py::arg("t"),
          py::arg("n_traj"), py::arg("master_seed"), py::arg("stream_base") = 0);

    // analytics
    m.def("threshold_rate", &threshold_rate, py::arg("params"), py::arg("m"));
    m.def("moment", &moment, py::arg("params"), py::arg("m"), py::arg("t"));
    m.def("alpha_exponent", &alpha_exponent, py::arg("params"));
    m.def("beta_exponent", &beta_exponent, py::arg("params"));
    m.def("gbm_propagator", &gbm_propagator, py::arg("params"), py::arg("x"), py::arg("t"));
    m.def("transient_pdf", &transient_pdf, py::arg("params"), py::arg("x"), py::arg("t"));
    m.def("stationary_pdf", &stationary_pdf, py::arg("params"), py::arg("x"));

    py::class_<StationaryLaw>(m, "StationaryLaw")
        .def_readonly("alpha", &StationaryLaw::alpha)
        .def_readonly("left_exponent", &StationaryLaw::left_exponent)
        .def_readonly("norm", &StationaryLaw::norm)
        .def_readonly("x0", &StationaryLaw::x0)
        .def("pdf", &StationaryLaw::pdf)
        .def("cdf", &StationaryLaw::cdf);
    m.def("stationary_law", &stationary_law, py::arg("params"));

    py::class_<LastResetMoments>(m, "LastResetMoments")
        .def_readonly("mean", &LastResetMoments::mean)
        .def_readonly("variance", &LastResetMoments::variance);
    m.def("last_reset_moments", &last_reset_moments, py::arg("r"), py::arg("t"));
    m.def("growth_estimator_mean", &growth_estimator_mean, py::arg("params"), py::arg("t"));
    m.def("growth_estimator_variance", &growth_estimator_variance, py::arg("params"),
          py::arg("t"));
    m.def("analytic_relative_variance", &analytic_relative_variance, py::arg("params"),
          py::arg("n_samples"), py::arg("t"));

    py::enum_<TcMethod>(m, "TcMethod")
        .value("exact_root", TcMethod::exact_root)
        .value("frozen_approx", TcMethod::frozen_approx)
        .value("unstable_approx", TcMethod::unstable_approx)
        .value("never", TcMethod::never);
    py::class_<CriticalTime>(m, "CriticalTime")
        .def_readonly("t_c", &CriticalTime::t_c)
        .def_readonly("method", &CriticalTime::method)
        .def_property_readonly("finite", &CriticalTime::finite);
    m.def("critical_time", &critical_time, py::arg("params"), py::arg("n_samples"));
    m.def("critical_time_frozen_approx", &critical_time_frozen_approx, py::arg("params"),
          py::arg("n_samples"));
    m.def("critical_time_unstable_approx", &critical_time_unstable_approx,
          py::arg("params"), py::arg("n_samples"));
    m.def("min_self_averaging_sample", &min_self_averaging_sample, py::arg("params"));
    m.def("optimal_reset_rate", &optimal_reset_rate, py::arg("params"),
          py::arg("n_samples"));

    py::enum_<RegimeTag>(m, "RegimeTag")
        .value("frozen", RegimeTag::frozen)
        .value("unstable_annealed", RegimeTag::unstable_annealed)
        .value("stable_annealed", RegimeTag::stable_annealed);
    py::class_<Regime>(m, "Regime")
        .def_readonly("tag", &Regime::tag)
        .def_readonly("r_1", &Regime::r_1)
        .def_readonly("r_2", &Regime::r_2)
        .def_readonly("on_boundary", &Regime::on_boundary);
    m.def("classify_regime", &classify_regime, py::arg("params"));

    // ensemble statistics
    py::class_<EnsembleSnapshot>(m, "EnsembleSnapshot")
        .def(py::init([](double t, std::vector<double> positions) {
                 return EnsembleSnapshot{t, std::move(positions)};
             }),
             py::arg("t"), py::arg("positions"))
        .def_readwrite("t", &EnsembleSnapshot::t)
        .def_readwrite("positions", &EnsembleSnapshot::positions);
    py::class_<ShareReport>(m, "ShareReport")
        .def_readonly("p_top", &ShareReport::p_top)
        .def_readonly("cohort_size", &ShareReport::cohort_size);

    m.def("sample_average", &sample_average, py::arg("snapshot"));
    m.def("growth_rate_estimate", &growth_rate_estimate, py::arg("snapshot"), py::arg("x0"));
    m.def(
        "empirical_relative_variance",
        [](const std::vector<double>& xs) {
            return empirical_relative_variance(std::span<const double>(xs));
        },
        py::arg("realizations"));
    m.def("top_share", &top_share, py::arg("snapshot"), py::arg("fraction"));
    m.def(
        "median_over_realizations",
        [](const std::vector<double>& xs) {
            return median_over_realizations(std::span<const double>(xs));
        },
        py::arg("values"));
    m.def(
        "quantile",
        [](const std::vector<double>& xs, double q) {
            return quantile(std::span<const double>(xs), q);
        },
        py::arg("values"), py::arg("q"));
}
