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

namespace spsfilter {

// Rates are quoted in units of the radiative decay of the emitter;
// gamma_diss stays an explicit field so the scaling convention is visible
// at call sites (the CLI pins it to 1).
struct RateSet {
    double gamma_pump = 0.0;  // incoherent pump, active on [0, pulse_T]
    double gamma_diss = 1.0;  // radiative decay, must be > 0
    double gamma_deph = 0.0;  // pure dephasing
    double pulse_T = 1.0;     // rectangular pump window length
    double detuning = 0.0;    // filter-minus-emitter frequency offset

    // Throws std::invalid_argument on non-finite or out-of-range entries.
    void validate() const;
};

// Combinations that appear in every closed form.
struct DerivedRates {
    double gamma_total;    // gamma_pump + gamma_diss
    double big_gamma_on;   // (gamma_pump + gamma_diss + gamma_deph) / 2
    double big_gamma_off;  // (gamma_diss + gamma_deph) / 2, pump off
    double p_ss;           // gamma_pump / (gamma_pump + gamma_diss)
    double tls_timescale;  // pulse_T + 1 / gamma_diss

    static DerivedRates from(const RateSet& r);
};

}  // namespace spsfilter
