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

#include "spsfilter/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace spsfilter {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

void FilterSpec::validate() const {
    if (!std::isfinite(gamma_f) || gamma_f <= 0.0) {
        throw std::invalid_argument("gamma_f must be finite and > 0");
    }
    if (!std::isfinite(detuning)) {
        throw std::invalid_argument("filter detuning must be finite");
    }
}

Complex transmission(const FilterSpec& f, double omega) {
    return f.gamma_f / (omega - f.detuning + kI * f.gamma_f);
}

Complex transfer_kernel(const FilterSpec& f, double dt) {
    if (dt < 0.0) return {0.0, 0.0};
    const Complex amp = -kI * f.gamma_f * std::exp(-(f.gamma_f + kI * f.detuning) * dt);
    // Half weight exactly on the causal boundary.
    return dt == 0.0 ? 0.5 * amp : amp;
}

Complex power_kernel(const FilterSpec& f, double dt) {
    return 0.5 * f.gamma_f * std::exp(-f.gamma_f * std::abs(dt)) *
           std::exp(-kI * f.detuning * dt);
}

Complex dc_gain(const FilterSpec& f) {
    return -kI * f.gamma_f / Complex{f.gamma_f, f.detuning};
}

}  // namespace spsfilter
