#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rrdps/bounds.hpp"
#include "rrdps/optimizer.hpp"
#include "rrdps/protocol_sim.hpp"
#include "rrdps/rate_model.hpp"
#include "rrdps/verify.hpp"

namespace py = pybind11;
using namespace rrdps;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "RRDPS security bounds, key rates and simulation";

    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);

    m.def("binary_entropy", &binary_entropy, py::arg("x"));
    m.def("omega_minus", &omega_minus, py::arg("L"), py::arg("nu"), py::arg("lam"));
    m.def("omega_plus", &omega_plus, py::arg("L"), py::arg("nu"), py::arg("lam"));
    m.def("omega", &omega, py::arg("L"), py::arg("nu"), py::arg("lam"));
    m.def("e_star", &e_star, py::arg("L"), py::arg("nu"));
    m.def("segment_approx", &segment_approx, py::arg("L"), py::arg("nu"), py::arg("e"));

    py::class_<BoundResult>(m, "BoundResult")
        .def_readonly("f_value", &BoundResult::f_value)
        .def_readonly("lambda_opt", &BoundResult::lambda_opt)
        .def_property_readonly("branch", [](const BoundResult& r) { return std::string(to_string(r.branch)); })
        .def_property_readonly("lambda_at_limit", &BoundResult::lambda_at_limit);
    m.def(
        "phase_error_bound", [](int L, int nu, double e) { return phase_error_bound({L, nu, e}); }, py::arg("L"),
        py::arg("nu"), py::arg("e"));

    py::class_<ProtocolParams>(m, "ProtocolParams")
        .def(py::init<>())
        .def(py::init([](int L, int nu_th, double mu, double eta, double e, double f_ec) {
                 return ProtocolParams{L, nu_th, mu, eta, e, f_ec};
             }),
             py::arg("L") = 6, py::arg("nu_th") = 1, py::arg("mu") = 0.1, py::arg("eta") = 1.0,
             py::arg("e") = 0.03, py::arg("f_ec") = 1.1)
        .def_readwrite("L", &ProtocolParams::L)
        .def_readwrite("nu_th", &ProtocolParams::nu_th)
        .def_readwrite("mu", &ProtocolParams::mu)
        .def_readwrite("eta", &ProtocolParams::eta)
        .def_readwrite("e", &ProtocolParams::e)
        .def_readwrite("f_ec", &ProtocolParams::f_ec);

    py::class_<RatePoint>(m, "RatePoint")
        .def_readonly("eta", &RatePoint::eta)
        .def_readonly("mu", &RatePoint::mu)
        .def_readonly("nu_th", &RatePoint::nu_th)
        .def_readonly("q", &RatePoint::q)
        .def_readonly("e_src", &RatePoint::e_src)
        .def_readonly("delta_tag", &RatePoint::delta_tag)
        .def_readonly("e_unt", &RatePoint::e_unt)
        .def_readonly("ec_cost", &RatePoint::ec_cost)
        .def_readonly("pa_cost", &RatePoint::pa_cost)
        .def_readonly("rate_per_block", &RatePoint::rate_per_block)
        .def_readonly("rate_per_pulse", &RatePoint::rate_per_pulse)
        .def_readonly("degenerate", &RatePoint::degenerate);

    m.def("detection_rate", &detection_rate, py::arg("L"), py::arg("mu"), py::arg("eta"));
    m.def("source_tail", &source_tail, py::arg("L"), py::arg("mu"), py::arg("nu_th"));
    m.def("key_rate", &key_rate, py::arg("params"), py::arg("monitored") = true);

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("L", &SweepConfig::L)
        .def_readwrite("e", &SweepConfig::e)
        .def_readwrite("f_ec", &SweepConfig::f_ec)
        .def_readwrite("eta_grid", &SweepConfig::eta_grid)
        .def_readwrite("nu_th_min", &SweepConfig::nu_th_min)
        .def_readwrite("nu_th_max", &SweepConfig::nu_th_max)
        .def_readwrite("mu_lo", &SweepConfig::mu_lo)
        .def_readwrite("mu_hi", &SweepConfig::mu_hi)
        .def_readwrite("mu_grid_points", &SweepConfig::mu_grid_points)
        .def_readwrite("refine_tol", &SweepConfig::refine_tol)
        .def_readwrite("monitored", &SweepConfig::monitored);
    m.def("optimize_at", &optimize_at, py::arg("eta"), py::arg("config"));
    m.def("sweep", &sweep, py::arg("config"));

    py::class_<ChannelModel>(m, "ChannelModel")
        .def_static("ideal", &ChannelModel::ideal)
        .def_static("phase_flip", &ChannelModel::phase_flip, py::arg("p"))
        .def_static("position_dephase", &ChannelModel::position_dephase, py::arg("d"))
        .def_static("parse", &parse_channel, py::arg("kind"), py::arg("param"))
        .def_property_readonly("name", &ChannelModel::name)
        .def_readonly("param", &ChannelModel::param)
        .def("expected_error_rate", &ChannelModel::expected_error_rate);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("L", &SimConfig::L)
        .def_readwrite("mu", &SimConfig::mu)
        .def_readwrite("eta", &SimConfig::eta)
        .def_readwrite("rounds", &SimConfig::rounds)
        .def_readwrite("sample_fraction", &SimConfig::sample_fraction)
        .def_readwrite("channel", &SimConfig::channel)
        .def_readwrite("seed", &SimConfig::seed);

    py::class_<SimStats>(m, "SimStats")
        .def_readonly("emitted", &SimStats::emitted)
        .def_readonly("detected", &SimStats::detected)
        .def_readonly("q_emp", &SimStats::q_emp)
        .def_readonly("sampled", &SimStats::sampled)
        .def_readonly("errors_in_sample", &SimStats::errors_in_sample)
        .def_readonly("e_emp", &SimStats::e_emp)
        .def_readonly("sifted_bits_alice", &SimStats::sifted_bits_alice)
        .def_readonly("sifted_bits_bob", &SimStats::sifted_bits_bob)
        .def_readonly("seed_used", &SimStats::seed_used);
    m.def("run_rounds", &run_rounds, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("estimate_rate_from_sim", &estimate_rate_from_sim, py::arg("stats"), py::arg("params"),
          py::arg("monitored") = true);

    m.def(
        "run_verification",
        [](const std::string& level) {
            if (level != "fast" && level != "full")
                throw py::value_error("level must be 'fast' or 'full'");
            const VerifyReport rep = run_verification(level == "full" ? VerifyLevel::full : VerifyLevel::fast);
            return py::module_::import("json").attr("loads")(rep.to_json().dump());
        },
        py::arg("level") = "fast");
}
