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
#include "spsfilter/liouville.hpp"

namespace spsfilter {

// One engine-vs-reference comparison. Deviation is |engine - oracle| over
// max(|oracle|, 1e-12) so near-zero references cannot blow it up.
struct OracleReport {
    std::string name;
    double engine_value = 0.0;
    double oracle_value = 0.0;
    double rel_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;  // grid density / regime description
};

// Adaptive Cash-Karp RK45 integration of the master equation from the
// ground state; shares only the Liouvillian construction with the engine.
StateVector ode_oracle(const RateSet& r, double t);

// Direct composite-Simpson evaluation of the defining integral of one
// metric ("ind", "g2T", "g2inf", "qy"), calling the correlator engine
// pointwise; never touches the exponential-sum integrator. `grid` sets the
// nodes per dimension.
OracleReport quadrature_oracle(const std::string& metric, const RateSet& r,
                               const FilterSpec& f, int grid);

// Engine evaluations deep inside each closed-form regime; failures are
// reported, not thrown.
std::vector<OracleReport> limit_convergence_suite();

// The full selftest gate: ODE-vs-exponential propagation draws, the
// quadrature oracles at their reference points, and the limit suite.
std::vector<OracleReport> selftest_suite();

}  // namespace spsfilter
