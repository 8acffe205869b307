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

#pragma once

#include <stdexcept>

#include "spsfilter/chain.hpp"
#include "spsfilter/filter.hpp"

namespace spsfilter {

// Raised when the requested figure of merit is undefined for the inputs
// (for example a vanishing emission denominator).
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationConfig {
    enum class Path { semi_analytic, quadrature, both };

    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    double horizon_factor = 40.0;  // tail truncation, quadrature path only
    int quad_order = 10;           // Gauss-Legendre nodes per panel
    Path path = Path::semi_analytic;
};

struct MetricResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute uncertainty
};

// Two-photon indistinguishability of the filtered emission.
MetricResult indistinguishability(const RateSet& r, const FilterSpec& f,
                                  const IntegrationConfig& cfg = {});

// Filtered same-time second-order correlation, gated at the pulse end.
MetricResult g2_filtered_at_T(const RateSet& r, const FilterSpec& f,
                              const IntegrationConfig& cfg = {});

// Pulse-wise second-order correlation for a slow detector integrating the
// whole emission. Filter independent; carries the short-pulse plateau
// 4*gamma_diss/(gamma_diss+gamma_deph) and relaxes to the CW value for
// long pulses.
MetricResult g2_infinity(const RateSet& r, const IntegrationConfig& cfg = {});

// Filtered to total quantum yield ratio.
MetricResult qy_ratio(const RateSet& r, const FilterSpec& f,
                      const IntegrationConfig& cfg = {});

// Second-order correlation of the single temporal detector mode covering
// [t, t + tau] after the filter.
MetricResult g2_detector_window(const RateSet& r, const FilterSpec& f, double t,
                                double tau, const IntegrationConfig& cfg = {});

}  // namespace spsfilter
