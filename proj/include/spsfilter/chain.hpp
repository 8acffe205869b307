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
#include <stdexcept>
#include <utility>
#include <vector>

#include "spsfilter/strand.hpp"

namespace spsfilter {

// Raised when a requested integral cannot be produced within the accuracy
// model (divergent tail gap, unresolved near-singular mode).
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Multi-dimensional integrals of correlator chains against exponential
// kernels. The integrand is decomposed per ordering of the integration
// variables (and per assignment of each variable to an interval between
// breakpoints); within one region it is a product of matrix-exponential
// chain factors and scalar exponentials of the gaps, which integrates
// exactly as a corner block of a block upper-bidiagonal matrix exponential
// (semi-analytic path) or by iterated panel Gauss-Legendre quadrature
// (reference path).

// One correlator loop; each operator's time is a global integration
// variable. Kind selects the beyond-pulse clamp rules for unbounded specs.
struct ChainProcess {
    std::vector<Matrix2> ops;  // product order
    std::vector<int> vars;     // global variable id per op
    bool conjugated = false;
    enum class Kind { pair_sigma, quad_sigma, bounded_only } kind = Kind::bounded_only;
};

// coeff * exp(-rate_fwd * (x_a - x_b)) when x_a >= x_b in the current
// ordering, coeff * exp(-rate_rev * (x_b - x_a)) otherwise; causal kernels
// zero out regions with x_a < x_b.
struct PairKernel {
    Complex coeff{1.0, 0.0};
    Complex rate_fwd{0.0, 0.0};
    Complex rate_rev{0.0, 0.0};
    int var_a = 0;
    int var_b = 0;
    bool causal = false;
};

// Kernel piece tied to a breakpoint B: coeff * exp(-rate * (x - B)) when
// from_start (variable right of B), else coeff * exp(-rate * (B - x)).
struct VarTerm {
    Complex coeff{1.0, 0.0};
    Complex rate{0.0, 0.0};
    int breakpoint = 0;
    bool from_start = false;
};

struct ChainSpec {
    RateSet rates;
    int n_vars = 0;
    std::vector<ChainProcess> processes;
    std::vector<PairKernel> kernels;
    // var_terms[v][interval]: alternative kernel pieces for variable v when
    // it lies in that interval; the products over choices are summed. An
    // empty outer vector means a constant factor of one everywhere.
    std::vector<std::vector<std::vector<VarTerm>>> var_terms;
    std::vector<double> breakpoints;  // ascending, > 0; must contain pulse_T
                                      // whenever the domain crosses it
    bool unbounded = false;           // tail interval past the last breakpoint
    // Inclusive [lo, hi] interval ids allowed per variable; empty means all.
    std::vector<std::pair<int, int>> var_intervals;
};

struct ChainResult {
    Complex value{0.0, 0.0};
    double tail_bound = 0.0;  // truncation estimate (quadrature path only)
};

ChainResult chain_integral(const ChainSpec& spec);
ChainResult chain_integral_quadrature(const ChainSpec& spec, int order,
                                      double horizon_factor);

}  // namespace spsfilter
