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

#include <cmath>
#include <random>

#include "spsfilter/correlators.hpp"

using namespace spsfilter;

namespace {

RateSet random_rates(std::mt19937& rng) {
    std::uniform_real_distribution<double> logu(-1.5, 1.0);
    RateSet r;
    r.gamma_pump = std::pow(10.0, logu(rng));
    r.gamma_diss = 1.0;
    r.gamma_deph = std::pow(10.0, logu(rng));
    r.pulse_T = 0.3 + std::pow(10.0, logu(rng));
    return r;
}

double excited_pop(const RateSet& r, double t) {
    const DerivedRates d = DerivedRates::from(r);
    if (t <= r.pulse_T) return d.p_ss * -std::expm1(-d.gamma_total * t);
    return excited_pop(r, r.pulse_T) * std::exp(-r.gamma_diss * (t - r.pulse_T));
}

}  // namespace

TEST_CASE("strand generator on the standard strands is the Liouvillian") {
    std::mt19937 rng(3);
    for (int it = 0; it < 10; ++it) {
        for (bool pump : {true, false}) {
            const RateSet r = random_rates(rng);
            const Eigen::MatrixXcd g = strand_generator({-1, +1}, r, pump);
            const Superoperator l = build_liouvillian(r, pump);
            // Strand legs are (column, row); the vectorization is (row, col).
            Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
            p(0, 0) = p(3, 3) = 1.0;
            p(1, 2) = p(2, 1) = 1.0;
            CHECK((p * g * p - l).cwiseAbs().maxCoeff() < 1e-13);
        }
    }
}

TEST_CASE("two_time closed form inside the pulse") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 30; ++it) {
        const RateSet r = random_rates(rng);
        const DerivedRates d = DerivedRates::from(r);
        CorrelatorContext ctx(r);
        const double t1 = u(rng) * r.pulse_T;
        const double t2 = t1 + u(rng) * (r.pulse_T - t1);
        const double expected = excited_pop(r, t1) * std::exp(-d.big_gamma_on * (t2 - t1));
        const CorrelatorValue got = two_time(ctx, t1, t2);
        CHECK(got.tag == Provenance::standard_qrt);
        CHECK(std::abs(got.value.imag()) < 1e-13);
        CHECK(std::abs(got.value.real() - expected) < 1e-11);
        // Reversed arguments conjugate.
        CHECK(std::abs(two_time(ctx, t2, t1).value - std::conj(got.value)) < 1e-12);
    }
    // Pinned value: quasi-steady pump with gamma_pump = gamma_diss = 1,
    // gamma_deph = 10, lag 0.1: 0.5 * exp(-0.6).
    RateSet r;
    r.gamma_pump = 1.0;
    r.gamma_deph = 10.0;
    r.pulse_T = 40.0;
    CorrelatorContext ctx(r);
    const double c = two_time(ctx, 30.0, 30.1).value.real();
    CHECK(std::abs(c - 0.5 * std::exp(-0.6)) < 1e-9);
}

TEST_CASE("two_time beyond the pulse") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 30; ++it) {
        const RateSet r = random_rates(rng);
        const DerivedRates d = DerivedRates::from(r);
        CorrelatorContext ctx(r);
        const double T = r.pulse_T;
        // Straddling: decay of the boundary value at the pump-off rate.
        const double t1 = u(rng) * T;
        const double t2 = T + 2.0 * u(rng);
        const Complex boundary = two_time(ctx, t1, T).value;
        const Complex got = two_time(ctx, t1, t2).value;
        CHECK(std::abs(got - boundary * std::exp(-d.big_gamma_off * (t2 - T))) < 1e-11);
        // Fully beyond: population times pump-off coherence decay.
        const double s1 = T + u(rng), s2 = s1 + u(rng);
        const double expected = excited_pop(r, s1) * std::exp(-d.big_gamma_off * (s2 - s1));
        CHECK(std::abs(two_time(ctx, s1, s2).value.real() - expected) < 1e-11);
    }
}

TEST_CASE("strand engine agrees with the standard recipe when both apply") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int standard_seen = 0;
    for (int it = 0; it < 300; ++it) {
        const RateSet r = random_rates(rng);
        CorrelatorContext ctx(r);
        const double span = 1.5 * r.pulse_T;
        std::array<double, 4> t;
        for (double& x : t) x = u(rng) * span;
        // Avoid the forced-zero shortcut so the engines actually run.
        if (t[0] == t[1] || t[2] == t[3]) continue;
        const CorrelatorValue v = four_time(ctx, t[0], t[1], t[2], t[3]);
        const Complex direct = loop_value(
            {sigma_dag_op(), sigma_dag_op(), sigma_op(), sigma_op()},
            {t[0], t[1], t[2], t[3]}, r, ctx.strands);
        CHECK(std::abs(v.value - direct) < 1e-11);
        if (v.tag == Provenance::standard_qrt) ++standard_seen;
    }
    CHECK(standard_seen > 20);  // both branches exercised
}

TEST_CASE("conjugation symmetry of four_time") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        const RateSet r = random_rates(rng);
        CorrelatorContext ctx(r);
        const double span = 1.8 * r.pulse_T;
        std::array<double, 4> t;
        for (double& x : t) x = u(rng) * span;
        if (it % 5 == 0) t[2] = t[1];  // exercise exact ties
        if (it % 7 == 0) t[3] = t[0];
        const Complex a = four_time(ctx, t[0], t[1], t[2], t[3]).value;
        const Complex b = four_time(ctx, t[3], t[2], t[1], t[0]).value;
        CHECK(std::abs(a - std::conj(b)) < 1e-11);
        CHECK(std::abs(a) < 1.0 + 1e-9);
    }
}

TEST_CASE("nilpotency zeros, including through the engine itself") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        const RateSet r = random_rates(rng);
        CorrelatorContext ctx(r);
        const double a = u(rng), b = u(rng), c = u(rng);
        const CorrelatorValue v1 = four_time(ctx, a, a, b, c);
        CHECK(v1.tag == Provenance::forced_zero);
        CHECK(v1.value == Complex{0.0, 0.0});
        // The engine reproduces the zero without the shortcut.
        const Complex direct = loop_value(
            {sigma_dag_op(), sigma_dag_op(), sigma_op(), sigma_op()}, {a, a, b, c}, r,
            ctx.strands);
        CHECK(std::abs(direct) < 1e-12);
        const Complex direct2 = loop_value(
            {sigma_dag_op(), sigma_dag_op(), sigma_op(), sigma_op()}, {a, b, c, c}, r,
            ctx.strands);
        CHECK(std::abs(direct2) < 1e-12);
    }
}

TEST_CASE("beyond-pulse factorization identities") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int nontrivial = 0;
    for (int it = 0; it < 400; ++it) {
        const RateSet r = random_rates(rng);
        CorrelatorContext ctx(r);
        const double T = r.pulse_T;
        std::array<double, 4> t;
        // Mix of inside and beyond-pulse times; exact count random.
        for (double& x : t) x = u(rng) < 0.5 ? u(rng) * T : T + 1.5 * u(rng);
        if (t[0] == t[1] || t[2] == t[3]) continue;
        const auto red = beyond_pulse_reduction(ctx, t[0], t[1], t[2], t[3]);
        const bool any_beyond = t[0] > T || t[1] > T || t[2] > T || t[3] > T;
        CHECK(red.has_value() == any_beyond);
        if (!red) continue;
        const Complex direct = four_time(ctx, t[0], t[1], t[2], t[3]).value;
        const double scale = std::max({1e-12, std::abs(direct), std::abs(red->value)});
        CHECK(std::abs(direct - red->value) / scale < 1e-9);
        if (std::abs(red->value) > 1e-12) ++nontrivial;
    }
    CHECK(nontrivial > 30);
}

TEST_CASE("two raising operators beyond the pulse give an exact zero") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        const RateSet r = random_rates(rng);
        CorrelatorContext ctx(r);
        const double T = r.pulse_T;
        const double t1 = T + u(rng), t2 = T + u(rng) + 1.0;
        const double t3 = u(rng) * T, t4 = 0.7 * u(rng) * T;
        const Complex v = four_time(ctx, t1, t2, t3, t4).value;
        CHECK(std::abs(v) < 1e-10);
        const Complex w = four_time(ctx, t3, t4 * 0.9, T + u(rng), T + 1.0 + u(rng)).value;
        CHECK(std::abs(w) < 1e-10);
    }
}
