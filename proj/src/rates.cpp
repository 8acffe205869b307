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

#include "spsfilter/rates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spsfilter {

namespace {
void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}
}  // namespace

void RateSet::validate() const {
    require_finite(gamma_pump, "gamma_pump");
    require_finite(gamma_diss, "gamma_diss");
    require_finite(gamma_deph, "gamma_deph");
    require_finite(pulse_T, "pulse_T");
    require_finite(detuning, "detuning");
    if (gamma_pump < 0.0) throw std::invalid_argument("gamma_pump must be >= 0");
    if (gamma_diss <= 0.0) throw std::invalid_argument("gamma_diss must be > 0");
    if (gamma_deph < 0.0) throw std::invalid_argument("gamma_deph must be >= 0");
    if (pulse_T < 0.0) throw std::invalid_argument("pulse_T must be >= 0");
}

DerivedRates DerivedRates::from(const RateSet& r) {
    DerivedRates d{};
    d.gamma_total = r.gamma_pump + r.gamma_diss;
    d.big_gamma_on = 0.5 * (r.gamma_pump + r.gamma_diss + r.gamma_deph);
    d.big_gamma_off = 0.5 * (r.gamma_diss + r.gamma_deph);
    d.p_ss = r.gamma_pump / d.gamma_total;
    d.tls_timescale = r.pulse_T + 1.0 / r.gamma_diss;
    return d;
}

}  // namespace spsfilter
