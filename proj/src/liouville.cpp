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

#include "spsfilter/liouville.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace spsfilter {

Matrix2 sigma_op() {
    Matrix2 s = Matrix2::Zero();
    s(0, 1) = 1.0;  // |g><e|
    return s;
}

Matrix2 sigma_dag_op() {
    Matrix2 s = Matrix2::Zero();
    s(1, 0) = 1.0;
    return s;
}

Matrix2 proj_e_op() {
    Matrix2 s = Matrix2::Zero();
    s(1, 1) = 1.0;
    return s;
}

Superoperator left_mult(const Matrix2& a) {
    // vec index 2*i + j; (A X)_{ij} = sum_k A_{ik} X_{kj}.
    Superoperator m = Superoperator::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) m(2 * i + j, 2 * k + j) = a(i, k);
    return m;
}

Superoperator right_mult(const Matrix2& b) {
    // (X B)_{ij} = sum_k X_{ik} B_{kj}.
    Superoperator m = Superoperator::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) m(2 * i + j, 2 * i + k) = b(k, j);
    return m;
}

Complex trace_of(const StateVector& v) { return v(0) + v(3); }

Matrix2 unvec(const StateVector& v) {
    Matrix2 m;
    m(0, 0) = v(0);
    m(0, 1) = v(1);
    m(1, 0) = v(2);
    m(1, 1) = v(3);
    return m;
}

StateVector vec(const Matrix2& m) {
    StateVector v;
    v << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
    return v;
}

namespace {
Superoperator dissipator(const Matrix2& c, double rate) {
    const Matrix2 cdc = c.adjoint() * c;
    return rate * (left_mult(c) * right_mult(c.adjoint()) -
                   0.5 * (left_mult(cdc) + right_mult(cdc)));
}
}  // namespace

Superoperator build_liouvillian(const RateSet& r, bool pump_on) {
    Superoperator l = dissipator(sigma_op(), r.gamma_diss);
    if (r.gamma_deph > 0.0) l += dissipator(proj_e_op(), r.gamma_deph);
    if (pump_on && r.gamma_pump > 0.0) l += dissipator(sigma_dag_op(), r.gamma_pump);
    return l;
}

Superoperator propagate(const Superoperator& liou, double dt) {
    return (liou * dt).exp();
}

StateVector ground_state() {
    StateVector v = StateVector::Zero();
    v(0) = 1.0;
    return v;
}

StateVector density_matrix_at(const RateSet& r, double t) {
    // Populations decouple from coherences, and the ground state carries no
    // coherence, so the closed form stays in the population sector.
    const DerivedRates d = DerivedRates::from(r);
    StateVector v = StateVector::Zero();
    double ee = 0.0;
    if (t <= r.pulse_T) {
        ee = d.p_ss * -std::expm1(-d.gamma_total * t);
    } else {
        const double at_T = d.p_ss * -std::expm1(-d.gamma_total * r.pulse_T);
        ee = at_T * std::exp(-r.gamma_diss * (t - r.pulse_T));
    }
    v(0) = 1.0 - ee;
    v(3) = ee;
    return v;
}

double physicality_defect(const StateVector& v) {
    const Matrix2 rho = unvec(v);
    const Matrix2 herm_gap = rho - rho.adjoint().eval();
    double defect = herm_gap.cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix2> es(0.5 * (rho + rho.adjoint().eval()));
    defect += std::max(0.0, -es.eigenvalues().minCoeff());
    return defect;
}

}  // namespace spsfilter
