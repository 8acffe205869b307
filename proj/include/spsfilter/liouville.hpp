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
#include <complex>

#include "spsfilter/rates.hpp"

namespace spsfilter {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

// Density matrices are vectorized row-major: index 2*row + col with g = 0,
// e = 1, so the component order is (rho_gg, rho_ge, rho_eg, rho_ee).
using StateVector = Eigen::Vector4cd;
using Superoperator = Eigen::Matrix4cd;

// sigma = |g><e|, sigma^dag = |e><g|, proj_e = sigma^dag sigma.
Matrix2 sigma_op();
Matrix2 sigma_dag_op();
Matrix2 proj_e_op();

// vec(A X) = left_mult(A) vec(X), vec(X B) = right_mult(B) vec(X).
Superoperator left_mult(const Matrix2& a);
Superoperator right_mult(const Matrix2& b);

// Trace functional on vectorized states: component 0 plus component 3.
Complex trace_of(const StateVector& v);

Matrix2 unvec(const StateVector& v);
StateVector vec(const Matrix2& m);

// Lindblad generator in the frame rotating at the emitter frequency: no
// Hamiltonian part survives, only the jump terms. Pump is a rectangular
// window, so the generator is piecewise constant in time.
Superoperator build_liouvillian(const RateSet& r, bool pump_on);

// exp(L * dt) via scaling-and-squaring Pade.
Superoperator propagate(const Superoperator& liou, double dt);

// State at time t starting from the ground state at t = 0, honoring the
// pump switch-off at pulse_T.
StateVector density_matrix_at(const RateSet& r, double t);

// Ground state (rho_gg = 1).
StateVector ground_state();

// max |rho - rho^dag| plus negativity of the spectrum; used by tests.
double physicality_defect(const StateVector& v);

}  // namespace spsfilter
