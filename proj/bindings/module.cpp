// Copyright 2026 The spsfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spsfilter/limits.hpp"
#include "spsfilter/oracles.hpp"
#include "spsfilter/sweep.hpp"

namespace py = pybind11;
using namespace spsfilter;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Metrics for a spectrally filtered, incoherently pumped "
              "two-level single-photon source";
    m.attr("__version__") = kEngineVersion;

    py::register_exception<DegenerateInputError>(m, "DegenerateInputError");

    py::class_<RateSet>(m, "RateSet")
        .def(py::init<>())
        .def_readwrite("gamma_pump", &RateSet::gamma_pump)
        .def_readwrite("gamma_diss", &RateSet::gamma_diss)
        .def_readwrite("gamma_deph", &RateSet::gamma_deph)
        .def_readwrite("pulse_T", &RateSet::pulse_T)
        .def_readwrite("detuning", &RateSet::detuning)
        .def("validate", &RateSet::validate);

    py::class_<FilterSpec>(m, "FilterSpec")
        .def(py::init<>())
        .def_readwrite("gamma_f", &FilterSpec::gamma_f)
        .def_readwrite("detuning", &FilterSpec::detuning)
        .def("validate", &FilterSpec::validate);

    py::class_<MetricResult>(m, "MetricResult")
        .def_readonly("value", &MetricResult::value)
        .def_readonly("error", &MetricResult::error)
        .def("__repr__", [](const MetricResult& r) {
            return "MetricResult(value=" + std::to_string(r.value) +
                   ", error=" + std::to_string(r.error) + ")";
        });

    m.def("indistinguishability",
          [](const RateSet& r, const FilterSpec& f) {
              return indistinguishability(r, f);
          },
          py::arg("rates"), py::arg("filter"),
          "Two-photon indistinguishability of the filtered emission.");
    m.def("g2_filtered_at_T",
          [](const RateSet& r, const FilterSpec& f) {
              return g2_filtered_at_T(r, f);
          },
          py::arg("rates"), py::arg("filter"),
          "Filtered same-time second-order correlation, gated at the pulse "
          "end.");
    m.def("g2_infinity",
          [](const RateSet& r) { return g2_infinity(r); }, py::arg("rates"),
          "Pulse-wise second-order correlation for a slow detector.");
    m.def("qy_ratio",
          [](const RateSet& r, const FilterSpec& f) { return qy_ratio(r, f); },
          py::arg("rates"), py::arg("filter"),
          "Filtered to total quantum yield ratio.");
    m.def("g2_detector_window",
          [](const RateSet& r, const FilterSpec& f, double t, double tau) {
              return g2_detector_window(r, f, t, tau);
          },
          py::arg("rates"), py::arg("filter"), py::arg("t"), py::arg("tau"),
          "Second-order correlation of the single temporal detector mode "
          "covering [t, t + tau] after the filter.");

    m.def("analytic_limit", &analytic_limit, py::arg("name"), py::arg("rates"),
          py::arg("filter"),
          "Closed-form limiting value by name (i0, ind_short_pulse, "
          "ind_wide_filter, ind_narrow_filter, g2_cw, g2_inf_short_pulse, "
          "qy_short_pulse, qy_long_pulse).");

    m.def("run_point",
          [](const RateSet& r, const FilterSpec& f,
             const std::vector<std::string>& metrics) {
              const MetricRecord rec = run_point(r, f, metrics);
              py::dict d;
              d["ind"] = rec.ind;
              d["g2T"] = rec.g2_T;
              d["g2inf"] = rec.g2_inf;
              d["qy"] = rec.qy;
              d["status"] = rec.status;
              d["wall_ms"] = rec.wall_ms;
              return d;
          },
          py::arg("rates"), py::arg("filter"), py::arg("metrics"),
          "Evaluate selected metrics (ind, g2T, g2inf, qy) at one point; "
          "failures are captured in 'status'.");

    m.def("selftest",
          []() {
              py::list out;
              for (const OracleReport& r : selftest_suite()) {
                  py::dict d;
                  d["name"] = r.name;
                  d["engine"] = r.engine_value;
                  d["oracle"] = r.oracle_value;
                  d["rel_deviation"] = r.rel_deviation;
                  d["tolerance"] = r.tolerance;
                  d["pass"] = r.pass;
                  d["detail"] = r.detail;
                  out.append(d);
              }
              return out;
          },
          "Run the full validation oracle suite (slow).");
}
