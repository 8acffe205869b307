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

#include <complex>

namespace spsfilter {

// Lorentzian filter of half width gamma_f centered at detuning delta away
// from the emitter line (frequencies measured in the rotating frame, so the
// emitter sits at omega = 0).
struct FilterSpec {
    double gamma_f = 1.0;   // half width at half maximum, > 0
    double detuning = 0.0;  // filter center minus emitter frequency

    void validate() const;
};

// Frequency response, normalized to |transmission| = 1 on resonance.
std::complex<double> transmission(const FilterSpec& f, double omega);

// Time-domain amplitude kernel: -i*gamma_f*exp(-(gamma_f + i*delta)*dt) for
// dt > 0, zero for dt < 0 (causal), and the half-weight -i*gamma_f/2 exactly
// at dt = 0.
std::complex<double> transfer_kernel(const FilterSpec& f, double dt);

// Two-sided power kernel (gamma_f/2)*exp(-gamma_f*|dt|)*exp(-i*delta*dt).
std::complex<double> power_kernel(const FilterSpec& f, double dt);

// Integral of the transfer kernel over dt in [0, inf):
// -i*gamma_f / (gamma_f + i*delta).
std::complex<double> dc_gain(const FilterSpec& f);

}  // namespace spsfilter
