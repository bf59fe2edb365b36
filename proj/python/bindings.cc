// Copyright 2026 The cvswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvswap/ch_metrics.h"
#include "cvswap/experiments.h"
#include "cvswap/fock_oracle.h"
#include "cvswap/mode_algebra.h"
#include "cvswap/optics_circuit.h"

namespace py = pybind11;
using namespace cvswap;

namespace {

std::map<uint32_t, Complex> to_index_map(const LinearField::CoeffMap &coeffs) {
    std::map<uint32_t, Complex> out;
    for (const auto &[mode, c] : coeffs) {
        out[mode.index] = c;
    }
    return out;
}

py::dict table_to_dict(const Table &table) {
    py::dict out;
    out["header"] = table.header;
    out["rows"] = table.rows;
    return out;
}

ExperimentConfig config_from_kwargs(const py::kwargs &kwargs) {
    ExperimentConfig config;
    std::string text;
    for (const auto &item : kwargs) {
        auto key = py::str(item.first).cast<std::string>();
        std::string value;
        if (py::isinstance<py::list>(item.second) || py::isinstance<py::tuple>(item.second)) {
            for (const auto &v : item.second) {
                value += (value.empty() ? "" : ",") + py::str(v).cast<std::string>();
            }
        } else if (py::isinstance<py::bool_>(item.second)) {
            value = item.second.cast<bool>() ? "true" : "false";
        } else {
            value = py::str(item.second).cast<std::string>();
        }
        text += key + " = " + value + "\n";
    }
    apply_config_text(config, text);
    return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heisenberg-picture model of continuous-variable entanglement swapping";

    py::register_exception<NoCoincidencesError>(m, "NoCoincidencesError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<ModeId>(m, "ModeId")
        .def_readonly("index", &ModeId::index)
        .def(py::self == py::self)
        .def("__hash__", [](const ModeId &id) { return id.index; })
        .def("__repr__", [](const ModeId &id) { return "ModeId(" + std::to_string(id.index) + ")"; });

    py::class_<ModeRegistry>(m, "ModeRegistry")
        .def(py::init<>())
        .def("new_mode", &ModeRegistry::new_mode, py::arg("name"))
        .def("name", &ModeRegistry::name, py::arg("id"))
        .def("modes", &ModeRegistry::modes)
        .def("__len__", &ModeRegistry::size);

    py::class_<LinearField>(m, "LinearField")
        .def(py::init<>())
        .def_static("vacuum", &LinearField::vacuum, py::arg("mode"))
        .def("ann", [](const LinearField &f) { return to_index_map(f.ann()); })
        .def("cre", [](const LinearField &f) { return to_index_map(f.cre()); })
        .def("ann_coeff", &LinearField::ann_coeff)
        .def("cre_coeff", &LinearField::cre_coeff)
        .def("adjoint", &LinearField::adjoint)
        .def("is_zero", &LinearField::is_zero)
        .def("str", [](const LinearField &f, const ModeRegistry *reg) { return f.str(reg); }, py::arg("registry") = nullptr)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(-py::self)
        .def(py::self == py::self)
        .def("__mul__", [](const LinearField &f, Complex c) { return f * c; })
        .def("__rmul__", [](const LinearField &f, Complex c) { return c * f; })
        .def("__repr__", [](const LinearField &f) { return "LinearField(" + f.str() + ")"; });

    m.def("commutator", &commutator, py::arg("f"), py::arg("g"));
    m.def("pair_contraction", &pair_contraction, py::arg("f"), py::arg("g"));
    m.def("quadrature_plus", &quadrature_plus);
    m.def("quadrature_minus", &quadrature_minus);
    m.def(
        "vacuum_expectation", [](const std::vector<LinearField> &p) { return vacuum_expectation(std::span<const LinearField>(p)); },
        py::arg("product"));
    m.def(
        "normal_order_expectation",
        [](const std::vector<LinearField> &p) { return normal_order_expectation(std::span<const LinearField>(p)); },
        py::arg("product"));

    py::class_<PolarizedBeam>(m, "PolarizedBeam").def_readonly("h", &PolarizedBeam::h).def_readonly("v", &PolarizedBeam::v);

    py::class_<SwapParams>(m, "SwapParams")
        .def(py::init([](double chi1, double chi2, double lambda, double eta) { return SwapParams{chi1, chi2, lambda, eta}; }),
             py::arg("chi1") = 0.1, py::arg("chi2") = 0.0, py::arg("lam") = 1.0, py::arg("eta") = 1.0)
        .def_readwrite("chi1", &SwapParams::chi1)
        .def_readwrite("chi2", &SwapParams::chi2)
        .def_readwrite("lam", &SwapParams::lambda)
        .def_readwrite("eta", &SwapParams::eta);

    py::class_<SwapCircuitOutput>(m, "SwapCircuit")
        .def_readonly("beam_a", &SwapCircuitOutput::beam_a)
        .def_readonly("beam_b", &SwapCircuitOutput::beam_b)
        .def_readonly("beam_d_prime", &SwapCircuitOutput::beam_d_prime)
        .def_readonly("registry", &SwapCircuitOutput::registry);

    m.def(
        "build_swap_circuit", [](const SwapParams &p, double sign) { return build_swap_circuit(p, CircuitOptions{sign}); },
        py::arg("params"), py::arg("gain_phase_sign") = kGainPhaseSign);
    m.def(
        "opo_type2",
        [](ModeRegistry &reg, double chi, const std::string &a, const std::string &b) { return opo_type2(reg, chi, a, b); },
        py::arg("registry"), py::arg("chi"), py::arg("first") = "A", py::arg("second") = "B");
    m.attr("GAIN_PHASE_SIGN") = kGainPhaseSign;

    py::class_<AnalyzerAngles>(m, "AnalyzerAngles")
        .def(py::init([](double a, double b, double ap, double bp) { return AnalyzerAngles{a, b, ap, bp}; }), py::arg("theta_a"),
             py::arg("theta_b"), py::arg("theta_a_prime"), py::arg("theta_b_prime"))
        .def_static("maximizing_set", &AnalyzerAngles::maximizing_set)
        .def_static("family", &AnalyzerAngles::family, py::arg("theta_a"))
        .def_readwrite("theta_a", &AnalyzerAngles::theta_a)
        .def_readwrite("theta_b", &AnalyzerAngles::theta_b)
        .def_readwrite("theta_a_prime", &AnalyzerAngles::theta_a_prime)
        .def_readwrite("theta_b_prime", &AnalyzerAngles::theta_b_prime);

    py::class_<CHResult>(m, "CHResult")
        .def_readonly("r_ab", &CHResult::r_ab)
        .def_readonly("r_ab_prime", &CHResult::r_ab_prime)
        .def_readonly("r_a_prime_b", &CHResult::r_a_prime_b)
        .def_readonly("r_a_prime_b_prime", &CHResult::r_a_prime_b_prime)
        .def_readonly("r_singles_a", &CHResult::r_singles_a)
        .def_readonly("r_singles_b", &CHResult::r_singles_b)
        .def_readonly("s", &CHResult::s);

    m.def("ch_s", py::overload_cast<const PolarizedBeam &, const PolarizedBeam &, const AnalyzerAngles &>(&ch_s),
          py::arg("source"), py::arg("relay"), py::arg("angles"));
    m.def("ch_s", py::overload_cast<const SwapCircuitOutput &, const AnalyzerAngles &>(&ch_s), py::arg("circuit"),
          py::arg("angles"));
    m.def(
        "maximize_s", [](const SwapCircuitOutput &c, size_t steps) {
            auto r = maximize_s(c, steps);
            return std::make_pair(r.theta_star, r.s_star);
        },
        py::arg("circuit"), py::arg("steps") = kDefaultAngleSteps);

    m.def(
        "analytic_s_ad",
        [](double s_ab, double chi2, double lambda, double eta) { return analytic_s_ad(AnalyticInputs{s_ab, chi2, lambda, eta}); },
        py::arg("s_ab"), py::arg("chi2"), py::arg("lam"), py::arg("eta") = 1.0);
    m.def("optimal_gain", &optimal_gain, py::arg("chi2"), py::arg("eta") = 1.0);
    m.def("eta_threshold", &eta_threshold, py::arg("s_ab"));
    m.def("squeezing_to_chi", &squeezing_to_chi, py::arg("squeezing"));
    m.def("chi_to_squeezing", &chi_to_squeezing, py::arg("chi"));
    m.def(
        "gain_window", [](double chi2, double eta, double s_ab) {
            auto w = gain_window(chi2, eta, s_ab);
            return std::make_pair(w.lo, w.hi);
        },
        py::arg("chi2"), py::arg("eta"), py::arg("s_ab"));

    m.def(
        "fock_coincidence_rate", [](double chi1, double ta, double tb, int n_max) {
            return fock_coincidence_rate(build_source_state(chi1, n_max, SourceForm::kExactProduct), ta, tb);
        },
        py::arg("chi1"), py::arg("theta_a"), py::arg("theta_b"), py::arg("n_max") = kDefaultCutoff);

    m.def("run_fig3", [](const py::kwargs &kw) { return table_to_dict(run_fig3(config_from_kwargs(kw))); });
    m.def("run_fig4", [](const py::kwargs &kw) { return table_to_dict(run_fig4(config_from_kwargs(kw))); });
    m.def("run_operating_point", [](const py::kwargs &kw) { return table_to_dict(run_operating_point(config_from_kwargs(kw))); });
    m.def("run_threshold_scan", [](const py::kwargs &kw) {
        auto scan = run_threshold_scan(config_from_kwargs(kw));
        auto out = table_to_dict(scan.table);
        out["crossings"] = scan.crossings;
        return out;
    });
    m.def(
        "run_selftest", [](double sign) {
            auto report = run_selftest(SelfTestOptions{sign});
            return std::make_pair(report.passed, report.text);
        },
        py::arg("gain_phase_sign") = kGainPhaseSign);
}
