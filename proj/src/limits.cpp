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

#include "spsfilter/limits.hpp"

#include <cmath>
#include <stdexcept>

namespace spsfilter {

std::vector<AnalyticLimit> analytic_limits(const RateSet& r, const FilterSpec& f) {
    r.validate();
    f.validate();
    const double gd = r.gamma_diss;
    const double gphi = r.gamma_deph;
    const double gp = r.gamma_pump;
    const double gf = f.gamma_f;
    const double g = gp + gd;
    const double T = r.pulse_T;
    const double gamma_on = 0.5 * (g + gphi);
    const double p = gp / g;

    std::vector<AnalyticLimit> out;
    const double i0 = gd / (gd + gphi);
    out.push_back({"i0", "dephasing-limited interference baseline", i0});
    out.push_back({"ind_short_pulse", "gamma_f >> rates, T << 1/gamma_diss", i0});
    {
        const double x = T * gd;
        const double shape = x > 1e-8 ? 2.0 * (x + std::expm1(-x)) / (x * x) : 1.0 - x / 3.0;
        out.push_back({"ind_wide_filter", "gamma_f >> rates, any T", i0 * shape});
    }
    out.push_back({"ind_narrow_filter",
                   "gamma_f << gamma_diss, T << 1/gamma_diss",
                   1.0 - 2.0 * gf / gd - T * T * gd * gf / 6.0});
    {
        const double q = 1.0 - 2.0 * p;
        const double num = 2.0 * g * g * (gf + g * q * q) * (gamma_on + gf);
        const double den = (g + 2.0 * gf) * (3.0 * g * gf + 2.0 * gf * gf + g * g * q * q) *
                           (gamma_on + 3.0 * gf);
        out.push_back({"g2_cw", "T >> every correlation time", num / den});
    }
    out.push_back({"g2_inf_short_pulse", "T << 1/gamma_total",
                   4.0 * gd / (gd + gphi)});
    out.push_back({"qy_short_pulse", "T << 1/gamma_total",
                   2.0 * gf / (gd + gphi + 2.0 * gf)});
    out.push_back({"qy_long_pulse", "T >> 1/gamma_total",
                   2.0 * gf / (gd + gphi + gp + 2.0 * gf)});
    return out;
}

double analytic_limit(const std::string& name, const RateSet& r, const FilterSpec& f) {
    for (const AnalyticLimit& l : analytic_limits(r, f)) {
        if (l.name == name) return l.value;
    }
    throw std::invalid_argument("unknown analytic limit: " + name);
}

}  // namespace spsfilter
