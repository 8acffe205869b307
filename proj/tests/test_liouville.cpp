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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>
#include <vector>

#include "spsfilter/liouville.hpp"

using namespace spsfilter;

namespace {
RateSet random_rates(std::mt19937& rng) {
    std::uniform_real_distribution<double> logu(-2.0, 1.0);
    RateSet r;
    r.gamma_pump = std::pow(10.0, logu(rng));
    r.gamma_diss = 1.0;
    r.gamma_deph = std::pow(10.0, logu(rng));
    r.pulse_T = std::pow(10.0, logu(rng));
    return r;
}
}  // namespace

TEST_CASE("left and right multiplication superoperators") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 20; ++it) {
        Matrix2 a, b, x;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                a(i, j) = Complex(u(rng), u(rng));
                b(i, j) = Complex(u(rng), u(rng));
                x(i, j) = Complex(u(rng), u(rng));
            }
        const Matrix2 lhs = unvec(StateVector(left_mult(a) * vec(x)));
        CHECK((lhs - a * x).cwiseAbs().maxCoeff() < 1e-14);
        const Matrix2 rhs = unvec(StateVector(right_mult(b) * vec(x)));
        CHECK((rhs - x * b).cwiseAbs().maxCoeff() < 1e-14);
        // Left and right multiplications commute.
        const Matrix4 commutator = left_mult(a) * right_mult(b) - right_mult(b) * left_mult(a);
        CHECK(commutator.cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("pump-on spectrum is {0, -gamma, -Gamma, -Gamma}") {
    std::mt19937 rng(11);
    for (int it = 0; it < 50; ++it) {
        const RateSet r = random_rates(rng);
        const DerivedRates d = DerivedRates::from(r);
        const Superoperator l = build_liouvillian(r, true);
        Eigen::ComplexEigenSolver<Matrix4> es(l);
        std::vector<double> re(4);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-10);
            re[i] = es.eigenvalues()(i).real();
        }
        std::sort(re.begin(), re.end());
        const double scale = std::max(1.0, d.gamma_total + d.big_gamma_on);
        std::vector<double> expected = {-d.big_gamma_on, -d.big_gamma_on, -d.gamma_total, 0.0};
        std::sort(expected.begin(), expected.end());
        for (int i = 0; i < 4; ++i) CHECK(std::abs(re[i] - expected[i]) < 1e-10 * scale);
    }
}

TEST_CASE("propagation preserves trace, hermiticity and positivity") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> tu(0.0, 5.0);
    for (int it = 0; it < 50; ++it) {
        const RateSet r = random_rates(rng);
        const Superoperator u = propagate(build_liouvillian(r, it % 2 == 0), tu(rng));
        // Random physical initial state.
        std::uniform_real_distribution<double> su(0.0, 1.0);
        const double pop = su(rng);
        const double cmax = std::sqrt(pop * (1.0 - pop));
        const double phase = 6.28 * su(rng);
        Matrix2 rho;
        rho(1, 1) = pop;
        rho(0, 0) = 1.0 - pop;
        rho(0, 1) = 0.9 * cmax * Complex(std::cos(phase), std::sin(phase));
        rho(1, 0) = std::conj(rho(0, 1));
        const StateVector out = u * vec(rho);
        CHECK(std::abs(trace_of(out) - 1.0) < 1e-12);
        CHECK(physicality_defect(out) < 1e-12);
    }
}

TEST_CASE("propagator semigroup property") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> tu(0.0, 3.0);
    for (int it = 0; it < 20; ++it) {
        const RateSet r = random_rates(rng);
        const Superoperator l = build_liouvillian(r, true);
        const double t1 = tu(rng), t2 = tu(rng);
        const Matrix4 gap = propagate(l, t1) * propagate(l, t2) - propagate(l, t1 + t2);
        CHECK(gap.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("closed-form excited population") {
    // Pump on: rho_ee(t) = p (1 - exp(-gamma t)); after the pulse it decays
    // radiatively. Fixed point of the pump-on generator is (1-p, 0, 0, p).
    std::mt19937 rng(19);
    for (int it = 0; it < 20; ++it) {
        const RateSet r = random_rates(rng);
        const DerivedRates d = DerivedRates::from(r);
        std::uniform_real_distribution<double> tu(0.0, 2.0 * r.pulse_T + 2.0);
        const double t = tu(rng);
        StateVector numeric;
        if (t <= r.pulse_T) {
            numeric = propagate(build_liouvillian(r, true), t) * ground_state();
        } else {
            numeric = propagate(build_liouvillian(r, false), t - r.pulse_T) *
                      (propagate(build_liouvillian(r, true), r.pulse_T) * ground_state());
        }
        const StateVector closed = density_matrix_at(r, t);
        CHECK((numeric - closed).cwiseAbs().maxCoeff() < 1e-12);

        StateVector fp;
        fp << 1.0 - d.p_ss, 0.0, 0.0, d.p_ss;
        CHECK((build_liouvillian(r, true) * fp).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("rate validation") {
    RateSet r;
    r.gamma_diss = 0.0;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r.gamma_diss = 1.0;
    r.gamma_pump = -1.0;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}
