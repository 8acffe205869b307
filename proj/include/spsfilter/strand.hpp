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

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "spsfilter/liouville.hpp"
#include "spsfilter/rates.hpp"

namespace spsfilter {

// Multi-copy quantum-regression engine.
//
// A correlator Tr[A_1(t_1) ... A_n(t_n) rho(0)] is a closed loop through the
// heights (0, t_n, ..., t_1, 0). Sweeping the loop bottom-up, the state is a
// tensor over the "strands" (loop segments straddling the current level),
// ordered by their position in the operator string. Each strand carries a
// direction eps = +1 (traversed upward) or -1 (downward); for ordinary
// time-ordered correlators only the two standard strands appear and the
// engine reduces to the usual regression recipe, while out-of-time-order
// tuples need up to four strands (16-dimensional level state).

// Direction signature of the active strands, left to right in string order.
using StrandEps = std::vector<int>;

// Level generator on (C^2)^{tensor K}. For each jump (c, rate):
//   rate * [ -1/2 sum_k L_k(c^dag c) - sum_{k<l} eps_k eps_l L_k(c^dag) L_l(c) ]
// where L_k(Q) acts with Q on leg k for eps_k = +1 and with Q^T for -1.
// Reproduces the Lindblad generator on the two standard strands.
Eigen::MatrixXcd strand_generator(const StrandEps& eps, const RateSet& r, bool pump_on);

// Compact key for (eps, pump) pairs, used for propagator caching.
std::uint32_t strand_signature(const StrandEps& eps, bool pump_on);

// Event-by-event plan for one loop, independent of the actual gap lengths.
// Level 0 is the loop bottom (time 0, where rho lives); levels 1..L are the
// distinct operator times in ascending order. Between level k-1 and level k
// the state evolves under strand_generator(segment_eps[k-1], ...), then
// level_map[k-1] applies the (possibly folded) operator insertions of level k.
struct StrandSchedule {
    Eigen::VectorXcd initial;                 // state after level-0 processing
    std::vector<StrandEps> segment_eps;       // size L
    std::vector<Eigen::MatrixXcd> level_maps; // size L, dim_after x dim_before
    bool scalar_only = false;                 // loop folded entirely at level 0
    Complex scalar_value{0.0, 0.0};
};

// ops are A_1..A_n in product order; level_of[p] in [0, L] assigns each
// operator to a level (ties allowed and resolved by exact-equality folding of
// zero-length segments). The final state after the last level map is scalar.
StrandSchedule build_strand_schedule(const std::vector<Matrix2>& ops,
                                     const std::vector<int>& level_of,
                                     const Matrix2& rho0);

// Propagator cache shared within one integration or evaluation call; not
// thread-safe, create one per worker.
struct StrandWorkspace {
    std::map<std::pair<std::uint32_t, std::uint64_t>, Eigen::MatrixXcd> propagators;
    const Eigen::MatrixXcd& propagator(const StrandEps& eps, const RateSet& r,
                                       bool pump_on, double dt);
};

// Tr[A_1(t_1) ... A_n(t_n) rho(0)] from the ground state, pump window [0, T].
// Handles arbitrary orderings, exact ties, and times beyond the pulse.
Complex loop_value(const std::vector<Matrix2>& ops, const std::vector<double>& times,
                   const RateSet& r, StrandWorkspace& ws);

}  // namespace spsfilter
