// Python bindings for the main operations: model functions, the fair-game
// pair, exact lattice evolution, wrapped-chain stationary analysis, peak
// statistics and the Monte Carlo sampler. Durations are passed as exact
// rational strings ("2.4" or "12/5"); silent float rounding would corrupt
// the step-count construction.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ratchetlab/games.hpp"
#include "ratchetlab/lattice.hpp"
#include "ratchetlab/mc.hpp"
#include "ratchetlab/model.hpp"
#include "ratchetlab/stationary.hpp"
#include "ratchetlab/stats.hpp"

namespace py = pybind11;
using namespace ratchetlab;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style>& a) {
    return {a.data(), a.data() + a.size()};
}

ExtraStepKind extra_from_string(const std::string& s) {
    if (s == "symmetric") return ExtraStepKind::Symmetric;
    if (s == "ratchet") return ExtraStepKind::Ratchet;
    throw std::invalid_argument("extra_step must be 'symmetric' or 'ratchet'");
}

}  // namespace

PYBIND11_MODULE(_ratchetlab, m) {
    m.doc() = "exact distributions of flashing-ratchet random walks and Parrondo games";
    m.attr("__version__") = "0.1.0";

    py::class_<RatchetParams>(m, "RatchetParams")
        .def_static(
            "from_lambda",
            [](int l, int L, double lam, const std::string& tau1, const std::string& tau2) {
                return RatchetParams::from_lambda(l, L, lam, parse_rational(tau1),
                                                  parse_rational(tau2));
            },
            py::arg("l"), py::arg("L"), py::arg("lam"), py::arg("tau1") = "2.4",
            py::arg("tau2") = "2.4")
        .def_static(
            "from_gamma",
            [](int l, int L, double gamma, const std::string& tau1, const std::string& tau2) {
                return RatchetParams::from_gamma(l, L, gamma, parse_rational(tau1),
                                                 parse_rational(tau2));
            },
            py::arg("l"), py::arg("L"), py::arg("gamma"), py::arg("tau1") = "2.4",
            py::arg("tau2") = "2.4")
        .def_readonly("l", &RatchetParams::l)
        .def_readonly("L", &RatchetParams::L_period)
        .def_readonly("alpha", &RatchetParams::alpha)
        .def_readonly("gamma", &RatchetParams::gamma)
        .def_readonly("lam", &RatchetParams::lam)
        .def_property_readonly("tau1", [](const RatchetParams& p) { return p.tau1.str(); })
        .def_property_readonly("tau2", [](const RatchetParams& p) { return p.tau2.str(); })
        .def("is_symmetric", &RatchetParams::is_symmetric)
        .def("__repr__", [](const RatchetParams& p) {
            return "RatchetParams(l=" + std::to_string(p.l) + ", L=" +
                   std::to_string(p.L_period) + ", lam=" + std::to_string(p.lam) + ", tau1=" +
                   p.tau1.str() + ", tau2=" + p.tau2.str() + ")";
        });

    m.def("sawtooth_potential", &sawtooth_potential, py::arg("x"), py::arg("params"));
    m.def("drift", &drift, py::arg("x"), py::arg("params"));
    m.def("invariant_density", &invariant_density, py::arg("x"), py::arg("params"));
    m.def(
        "compute_m",
        [](const std::string& tau1, const std::string& tau2) {
            return compute_m(parse_rational(tau1), parse_rational(tau2));
        },
        py::arg("tau1"), py::arg("tau2"),
        "smallest m with m^2*tau1 and m^2*tau2 both integers");

    py::class_<FlashingSchedule>(m, "FlashingSchedule")
        .def_static("make", &FlashingSchedule::make, py::arg("params"), py::arg("n"))
        .def_readonly("n", &FlashingSchedule::n)
        .def_readonly("steps_off", &FlashingSchedule::steps_off)
        .def_readonly("steps_on", &FlashingSchedule::steps_on)
        .def_readonly("m", &FlashingSchedule::m)
        .def("cycle_steps", &FlashingSchedule::cycle_steps);

    // fair-game pair
    m.def("p0_p1_from_rho", &p0_p1_from_rho, py::arg("rho"), py::arg("l"), py::arg("L"));
    m.def("solve_p1_from_p0", &solve_p1_from_p0, py::arg("p0"), py::arg("alpha"));
    m.def(
        "invariant_measure_b",
        [](double rho, int l, int L) {
            return to_array(invariant_measure_b(GameBSpec::make(rho, l, L)));
        },
        py::arg("rho"), py::arg("l"), py::arg("L"));
    m.def(
        "game_b_profit",
        [](double rho, int l, int L) {
            return mean_profit_single(game_b_chain(GameBSpec::make(rho, l, L)));
        },
        py::arg("rho"), py::arg("l"), py::arg("L"));
    m.def(
        "mixture_profit",
        [](double c, double rho, int l, int L) {
            return mean_profit_mixture(c, GameBSpec::make(rho, l, L));
        },
        py::arg("c"), py::arg("rho"), py::arg("l"), py::arg("L"));
    m.def(
        "pattern_profit",
        [](int r, int s, double rho, int l, int L) {
            return mean_profit_pattern(r, s, GameBSpec::make(rho, l, L));
        },
        py::arg("r"), py::arg("s"), py::arg("rho"), py::arg("l"), py::arg("L"));

    py::class_<LatticeDistribution>(m, "LatticeDistribution")
        .def_static("point_mass", &LatticeDistribution::point_mass, py::arg("site"),
                    py::arg("n"))
        .def_readonly("offset", &LatticeDistribution::offset)
        .def_readonly("n_scale", &LatticeDistribution::n_scale)
        .def_readonly("steps_taken", &LatticeDistribution::steps_taken)
        .def_property_readonly(
            "masses", [](const LatticeDistribution& d) { return to_array(d.masses); })
        .def("total_mass", &LatticeDistribution::total_mass)
        .def("mean_position", &LatticeDistribution::mean_position)
        .def("mass_at", &LatticeDistribution::mass_at, py::arg("site"))
        .def("single_parity", &LatticeDistribution::single_parity)
        .def("__repr__", [](const LatticeDistribution& d) {
            return "LatticeDistribution(sites [" + std::to_string(d.min_site()) + ", " +
                   std::to_string(d.max_site()) + "], n=" + std::to_string(d.n_scale) +
                   ", steps=" + std::to_string(d.steps_taken) + ")";
        });

    m.def("step_symmetric", &step_symmetric, py::arg("dist"));
    m.def("step_ratchet", &step_ratchet, py::arg("dist"), py::arg("params"), py::arg("n"));
    m.def("evolve_flashing", &evolve_flashing, py::arg("dist"), py::arg("params"),
          py::arg("schedule"), py::arg("total_steps"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "rescaled_density",
        [](const LatticeDistribution& d) {
            const std::vector<DensityPoint> pts = rescaled_density(d);
            std::vector<double> pos, den;
            pos.reserve(pts.size());
            den.reserve(pts.size());
            for (const DensityPoint& p : pts) {
                pos.push_back(p.position);
                den.push_back(p.density);
            }
            return py::make_tuple(to_array(pos), to_array(den));
        },
        py::arg("dist"), "positions and interpolation-ready histogram heights");

    py::class_<PeakStats>(m, "PeakStats")
        .def_readonly("areas", &PeakStats::areas)
        .def_readonly("heights", &PeakStats::heights)
        .def_readonly("mean", &PeakStats::mean)
        .def("__repr__", [](const PeakStats& s) {
            return "PeakStats(mean=" + std::to_string(s.mean) + ")";
        });
    m.def("peak_stats", &peak_stats, py::arg("dist"), py::arg("params"));
    m.def("peak_partition_boundaries", &peak_partition_boundaries, py::arg("params"));
    m.def("normal_reference_areas", &normal_reference_areas, py::arg("tau1"),
          py::arg("params"));

    py::class_<StationaryResult>(m, "StationaryResult")
        .def_property_readonly(
            "pibar", [](const StationaryResult& r) { return to_array(r.pibar); })
        .def_readonly("pibar_recentered", &StationaryResult::pibar_recentered)
        .def_readonly("mubar", &StationaryResult::mubar)
        .def_readonly("residual", &StationaryResult::residual)
        .def_property_readonly(
            "cycle_steps", [](const StationaryResult& r) { return r.matrix.cycle_steps; });
    m.def(
        "analyze_stationary",
        [](const RatchetParams& p, int n, const std::string& extra, int threads) {
            const FlashingSchedule s = FlashingSchedule::make(p, n);
            return analyze_stationary(p, s, {extra_from_string(extra), threads});
        },
        py::arg("params"), py::arg("n"), py::arg("extra_step") = "symmetric",
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
    m.def(
        "mean_displacement_tracked",
        [](const RatchetParams& p, int n, const py::array_t<double, py::array::c_style>& pibar,
           const std::string& extra) {
            const FlashingSchedule s = FlashingSchedule::make(p, n);
            const ExtraStepKind kind =
                needs_parity_fix(p, s) ? extra_from_string(extra) : ExtraStepKind::None;
            return mean_displacement_tracked(p, s, from_array(pibar), kind);
        },
        py::arg("params"), py::arg("n"), py::arg("pibar"), py::arg("extra_step") = "symmetric");

    m.def(
        "simulate_flashing",
        [](const RatchetParams& p, std::int64_t paths, double dt, std::uint64_t seed,
           double t_end, double y0, bool wrap, int threads) {
            McConfig cfg{paths, dt, seed, wrap, threads};
            std::vector<double> samples;
            {
                py::gil_scoped_release release;
                samples = simulate_flashing(p, cfg, t_end, y0);
            }
            return to_array(samples);
        },
        py::arg("params"), py::arg("paths"), py::arg("dt"), py::arg("seed"), py::arg("t_end"),
        py::arg("y0") = 0.0, py::arg("wrap") = false, py::arg("threads") = 0);
    m.def(
        "simulate_ratchet",
        [](const RatchetParams& p, std::int64_t paths, double dt, std::uint64_t seed,
           double t_end, double y0, bool wrap, int threads) {
            McConfig cfg{paths, dt, seed, wrap, threads};
            std::vector<double> samples;
            {
                py::gil_scoped_release release;
                samples = simulate_ratchet(p, cfg, t_end, y0);
            }
            return to_array(samples);
        },
        py::arg("params"), py::arg("paths"), py::arg("dt"), py::arg("seed"), py::arg("t_end"),
        py::arg("y0") = 0.0, py::arg("wrap") = false, py::arg("threads") = 0);
    m.def(
        "ks_distance",
        [](const py::array_t<double, py::array::c_style>& samples,
           const LatticeDistribution& d) { return ks_distance(from_array(samples), d); },
        py::arg("samples"), py::arg("dist"));

    m.def(
        "lambda_sweep",
        [](const std::vector<double>& lambdas, const RatchetParams& base, int n, int threads) {
            std::vector<std::pair<double, PeakStats>> out;
            for (const SweepRow& r : lambda_sweep(lambdas, base, n, threads))
                out.emplace_back(r.key, r.stats);
            return out;
        },
        py::arg("lambdas"), py::arg("base"), py::arg("n"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "n_sweep",
        [](const std::vector<int>& ns, const RatchetParams& base, int threads) {
            std::vector<std::pair<double, PeakStats>> out;
            for (const SweepRow& r : n_sweep(ns, base, threads)) out.emplace_back(r.key, r.stats);
            return out;
        },
        py::arg("ns"), py::arg("base"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
}
