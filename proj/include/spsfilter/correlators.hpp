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

#include <array>
#include <optional>

#include "spsfilter/liouville.hpp"
#include "spsfilter/strand.hpp"

namespace spsfilter {

enum class Provenance {
    standard_qrt,      // time profile reducible to the textbook recipe
    generalized_qrt,   // multi-strand engine
    factorized_reduction,  // beyond-pulse factorization identities
    forced_zero,       // nilpotency zero, no propagation done
};

struct CorrelatorValue {
    Complex value;
    Provenance tag;
};

// Per-call scratch shared between correlator evaluations; one per worker.
struct CorrelatorContext {
    RateSet rates;
    StrandWorkspace strands;
    explicit CorrelatorContext(const RateSet& r) : rates(r) { rates.validate(); }
};

// <sigma^dag(t1) sigma(t2)> from the ground state.
CorrelatorValue two_time(CorrelatorContext& ctx, double t1, double t2);

// <sigma^dag(t1) sigma^dag(t2) sigma(t3) sigma(t4)>. Dispatches to the
// standard recipe when the time profile allows it, otherwise to the
// multi-strand engine; equal times within the sigma^dag (or sigma) pair
// short-circuit to zero.
CorrelatorValue four_time(CorrelatorContext& ctx, double t1, double t2, double t3,
                          double t4);

// Factorized form for tuples with entries beyond the pulse end T: pure
// decay factors times a boundary correlator with the late times clamped to
// T, or an exact zero for the configurations whose boundary factor
// vanishes. Empty when every time is inside the pulse.
std::optional<CorrelatorValue> beyond_pulse_reduction(CorrelatorContext& ctx, double t1,
                                                  double t2, double t3, double t4);

}  // namespace spsfilter
