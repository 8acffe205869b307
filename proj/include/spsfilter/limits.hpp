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

#include <string>
#include <vector>

#include "spsfilter/filter.hpp"
#include "spsfilter/rates.hpp"

namespace spsfilter {

// Closed-form limiting values the engine must approach in the matching
// parameter regimes. Each entry names the regime it is valid in.
struct AnalyticLimit {
    std::string name;
    std::string regime;  // human-readable validity condition
    double value;
};

// All limits evaluated at the given parameters. Names:
//   i0                baseline indistinguishability gamma_d/(gamma_d+gamma_phi)
//   ind_short_pulse   wide filter, pulse much shorter than the emitter decay
//   ind_wide_filter   wide filter at finite pulse length
//   ind_narrow_filter leading narrow-filter expansion, short pulse
//   g2_cw             filtered g2 under continuous pumping
//   g2_inf_short_pulse unfiltered pulse-wise g2, short pulse
//   qy_short_pulse    yield ratio, short pulse
//   qy_long_pulse     yield ratio, long pulse
std::vector<AnalyticLimit> analytic_limits(const RateSet& r, const FilterSpec& f);

// Single named limit; throws std::invalid_argument for unknown names.
double analytic_limit(const std::string& name, const RateSet& r, const FilterSpec& f);

}  // namespace spsfilter
