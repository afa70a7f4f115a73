/**
 * Copyright 2026 The fusionloss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fusionloss/bsm.hpp"
#include "fusionloss/circuit.hpp"
#include "fusionloss/errors.hpp"
#include "fusionloss/fbqc.hpp"
#include "fusionloss/fock.hpp"
#include "fusionloss/loss.hpp"
#include "fusionloss/report.hpp"
#include "fusionloss/sweep.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
namespace fl = fusionloss;

namespace {

fl::FockState state_from_dict(int modes, const std::map<std::vector<int>, fl::Complex>& terms) {
  fl::FockState s(modes);
  for (const auto& [occ, amp] : terms) s.add(fl::FockPattern(occ), amp);
  return s;
}

// Occupations come back as tuples so they can key a dict.
py::dict state_to_dict(const fl::FockState& s) {
  py::dict out;
  for (const auto& [p, a] : s) out[py::tuple(py::cast(p.occupations()))] = a;
  return out;
}

}  // namespace

PYBIND11_MODULE(_fusionloss, m) {
  m.doc() = "Linear-optical Bell measurement loss analysis";

  // Translators run newest first, so the derived ConfigError goes last.
  py::register_exception<fl::ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<fl::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<fl::IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);

  // Fock algebra.
  m.def("permanent", &fl::permanent, py::arg("matrix"));
  m.def(
      "evolve",
      [](const fl::Matrix& u, const std::map<std::vector<int>, fl::Complex>& terms) {
        const auto kind = fl::is_unitary(u) ? fl::MatrixKind::unitary : fl::MatrixKind::subunitary;
        const fl::TransferMatrix t(u, kind);
        return state_to_dict(fl::evolve_state(t, state_from_dict(t.size(), terms)));
      },
      py::arg("matrix"), py::arg("state"),
      "Evolve {occupation tuple: amplitude} through a transfer matrix.");

  // Circuits.
  py::enum_<fl::ElementKind>(m, "ElementKind")
      .value("beamsplitter", fl::ElementKind::beamsplitter)
      .value("swap", fl::ElementKind::swap)
      .value("loss", fl::ElementKind::loss);
  py::class_<fl::Element>(m, "Element")
      .def_static("beamsplitter", &fl::Element::beamsplitter)
      .def_static("swap", &fl::Element::swap)
      .def_static("loss", &fl::Element::loss)
      .def_readonly("kind", &fl::Element::kind)
      .def_readonly("mode_a", &fl::Element::mode_a)
      .def_readonly("mode_b", &fl::Element::mode_b)
      .def_readonly("eta", &fl::Element::eta);
  py::class_<fl::CircuitLayout>(m, "CircuitLayout")
      .def(py::init<int>())
      .def(py::init<int, std::vector<fl::Layer>>())
      .def("add_layer", &fl::CircuitLayout::add_layer)
      .def_property_readonly("mode_count", &fl::CircuitLayout::mode_count)
      .def_property_readonly("layer_count", &fl::CircuitLayout::layer_count)
      .def_property_readonly("layers", &fl::CircuitLayout::layers)
      .def("count", &fl::CircuitLayout::count)
      .def("to_text", [](const fl::CircuitLayout& c) { return fl::to_text(c); })
      .def_static("from_text", [](const std::string& text) {
        std::istringstream in(text);
        return fl::parse_layout(in);
      });
  m.def(
      "compile",
      [](const fl::CircuitLayout& c, bool extended) {
        return fl::compile(c, extended ? fl::Space::extended : fl::Space::reduced).matrix.entries();
      },
      py::arg("layout"), py::arg("extended") = false);
  m.def(
      "survival_probability",
      [](const fl::CircuitLayout& c, const std::map<std::vector<int>, fl::Complex>& terms) {
        return fl::survival_probability(c, state_from_dict(c.mode_count(), terms));
      },
      py::arg("layout"), py::arg("state"));
  m.def(
      "surviving_photon_distribution",
      [](const fl::CircuitLayout& c, const std::map<std::vector<int>, fl::Complex>& terms) {
        return fl::surviving_photon_distribution(c, state_from_dict(c.mode_count(), terms));
      },
      py::arg("layout"), py::arg("state"));

  // Bell measurements.
  py::enum_<fl::Operator>(m, "Operator").value("XX", fl::Operator::XX).value("ZZ", fl::Operator::ZZ);
  py::class_<fl::BsmScheme>(m, "BsmScheme")
      .def_readonly("name", &fl::BsmScheme::name)
      .def_readonly("layout", &fl::BsmScheme::layout)
      .def_readonly("qubit_modes", &fl::BsmScheme::qubit_modes)
      .def_readonly("ancilla_modes", &fl::BsmScheme::ancilla_modes)
      .def_readonly("failure_basis", &fl::BsmScheme::failure_basis)
      .def_property_readonly("ancilla", [](const fl::BsmScheme& s) { return s.ancilla.label; })
      .def_property_readonly("mode_count", &fl::BsmScheme::mode_count)
      .def_property_readonly("photon_count", &fl::BsmScheme::photon_count)
      .def("export", [](const fl::BsmScheme& s) {
        std::ostringstream out;
        fl::export_scheme(out, s);
        return out.str();
      });
  m.def("catalog_names", &fl::catalog_names);
  m.def("catalog_scheme", &fl::catalog_scheme, py::arg("name"), py::arg("failure_basis") = fl::Operator::XX);
  m.def("success_probability", &fl::success_probability, py::arg("scheme"));
  m.def(
      "success_per_bell",
      [](const fl::BsmScheme& s) { return fl::classify_patterns(s).success_per_bell; }, py::arg("scheme"),
      "Success probability for inputs Phi+, Phi-, Psi+, Psi-.");

  // Loss.
  py::class_<fl::LossParams>(m, "LossParams")
      .def(py::init([](double p_eff, double bs_loss_db, double prop_loss_db_per_cm, double layer_length_um) {
             return fl::LossParams::combined(p_eff, bs_loss_db, prop_loss_db_per_cm, layer_length_um);
           }),
           py::arg("p_eff") = 1.0, py::arg("bs_loss_db") = 0.0, py::arg("prop_loss_db_per_cm") = 0.0,
           py::arg("layer_length_um") = 500.0)
      .def_readwrite("p_gen", &fl::LossParams::p_gen)
      .def_readwrite("p_det", &fl::LossParams::p_det)
      .def_readwrite("bs_loss_db", &fl::LossParams::bs_loss_db)
      .def_readwrite("prop_loss_db_per_cm", &fl::LossParams::prop_loss_db_per_cm)
      .def_readwrite("layer_length_um", &fl::LossParams::layer_length_um)
      .def_property_readonly("p_eff", &fl::LossParams::p_eff)
      .def_property_readonly("eta_bs", &fl::LossParams::eta_bs)
      .def_property_readonly("eta_layer", &fl::LossParams::eta_layer);
  m.def("db_to_transmission", &fl::db_to_transmission);
  m.def(
      "p_loss",
      [](const fl::BsmScheme& s, const fl::LossParams& p, bool extended) {
        const auto inst = fl::instrument(s, p);
        return extended ? fl::compute_p_loss_extended(inst, fl::plus_plus()) : fl::compute_p_loss(inst);
      },
      py::arg("scheme"), py::arg("params"), py::arg("extended") = false);
  m.def(
      "p_loss_max",
      [](const fl::BsmScheme& s, const fl::LossParams& p) {
        return fl::p_loss_profile(fl::instrument(s, p)).maximum;
      },
      py::arg("scheme"), py::arg("params"));
  m.def("static_bias_p_loss", &fl::static_bias_p_loss);

  // Fusion networks.
  m.def(
      "threshold_p_er",
      [](const std::string& net) {
        auto kind = fl::parse_network(net);
        if (!kind) throw fl::ConfigError("unknown network '" + net + "'");
        return fl::network(*kind).threshold_p_er;
      },
      py::arg("network"));
  m.def("erasure_p0", &fl::erasure_p0, py::arg("p_succ"), py::arg("p_loss"));
  m.def("erasure_shor", &fl::erasure_shor, py::arg("p_0"));
  m.def(
      "min_p_succ",
      [](const std::string& net, const std::string& enc) {
        auto kind = fl::parse_network(net);
        auto mode = fl::parse_encoding(enc);
        if (!kind || !mode) throw fl::ConfigError("unknown network or encoding");
        return fl::min_p_succ(fl::network(*kind), *mode);
      },
      py::arg("network"), py::arg("encoding"));

  // Sweeps.
  m.def(
      "marginal_threshold",
      [](const std::string& scheme, const std::string& net, const std::string& enc, const std::string& axis,
         double tolerance, double layer_length_um) -> std::optional<double> {
        auto kind = fl::parse_network(net);
        auto mode = fl::parse_encoding(enc);
        auto a = fl::parse_axis(axis);
        if (!kind || !mode || !a) throw fl::ConfigError("unknown network, encoding or axis");
        fl::SchemeEvaluator ev(scheme);
        return fl::marginal_threshold(ev, fl::network(*kind), *mode, *a, tolerance, layer_length_um);
      },
      py::arg("scheme"), py::arg("network"), py::arg("encoding"), py::arg("axis"), py::arg("tolerance") = 1e-4,
      py::arg("layer_length_um") = 500.0, "Marginal threshold, or None when even the lossless point fails.");
  m.def(
      "sweep_json",
      [](const std::string& config_json) {
        const auto config = fl::parse_config(config_json);
        std::vector<fl::ThresholdResult> results;
        {
          py::gil_scoped_release release;
          results = fl::sweep_slices(config);
        }
        return fl::results_to_json(results);
      },
      py::arg("config_json"), "Run a sweep from a JSON configuration and return results JSON.");
}
