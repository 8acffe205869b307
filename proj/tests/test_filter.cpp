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
#include <complex>

#include "spsfilter/filter.hpp"

using namespace spsfilter;
using Complex = std::complex<double>;

TEST_CASE("transmission peaks at unit modulus on resonance") {
    for (double gf : {0.01, 1.0, 100.0}) {
        for (double delta : {0.0, -2.5, 7.0}) {
            const FilterSpec f{gf, delta};
            CHECK(std::abs(std::abs(transmission(f, delta)) - 1.0) < 1e-14);
            // Off resonance the response is strictly smaller.
            CHECK(std::abs(transmission(f, delta + 3.0 * gf)) < 1.0);
            // Half width: |F|^2 drops to 1/2 one linewidth away.
            const double half = std::norm(transmission(f, delta + gf));
            CHECK(std::abs(half - 0.5) < 1e-13);
        }
    }
}

TEST_CASE("transfer kernel causality, boundary weight and normalization") {
    const FilterSpec f{2.0, 0.7};
    CHECK(transfer_kernel(f, -1e-9) == Complex{0.0, 0.0});
    CHECK(std::abs(transfer_kernel(f, 0.0) - Complex{0.0, -1.0}) < 1e-14);  // -i*gamma_f/2

    // Riemann sum of the kernel over [0, inf) matches the dc gain.
    Complex sum = 0.0;
    const double h = 1e-4;
    for (int k = 0; k < 200000; ++k) {
        sum += transfer_kernel(f, (k + 0.5) * h) * h;
    }
    CHECK(std::abs(sum - dc_gain(f)) < 1e-5);
}

TEST_CASE("power kernel is the Fourier pair of |transmission|^2") {
    const FilterSpec f{1.5, -0.4};
    // x(0) = gamma_f / 2 equals the integral of |F|^2 d omega / 2 pi.
    CHECK(std::abs(power_kernel(f, 0.0) - Complex{0.75, 0.0}) < 1e-14);
    // Hermitian symmetry x(-dt) = conj(x(dt)).
    for (double dt : {0.3, 1.7, 4.0}) {
        CHECK(std::abs(power_kernel(f, -dt) - std::conj(power_kernel(f, dt))) < 1e-14);
    }
    // Numeric Fourier transform check at a few lags.
    for (double dt : {0.0, 0.5, -1.2}) {
        Complex sum = 0.0;
        const double w_max = 2000.0, h = 0.002;
        for (double w = -w_max; w < w_max; w += h) {
            const double wm = w + 0.5 * h;
            sum += std::norm(transmission(f, wm)) *
                   std::exp(Complex{0.0, -wm * dt}) * h / (2.0 * M_PI);
        }
        CHECK(std::abs(sum - power_kernel(f, dt)) < 1e-3);
    }
}

TEST_CASE("dc gain equals the integrated transfer kernel in closed form") {
    for (double gf : {0.2, 3.0}) {
        for (double delta : {0.0, 1.3}) {
            const FilterSpec f{gf, delta};
            const Complex expected = Complex{0.0, -gf} / Complex{gf, delta};
            CHECK(std::abs(dc_gain(f) - expected) < 1e-15);
            CHECK(std::abs(dc_gain(FilterSpec{gf, 0.0}) - Complex{0.0, -1.0}) < 1e-15);
        }
    }
}

TEST_CASE("filter validation") {
    FilterSpec f{0.0, 0.0};
    CHECK_THROWS_AS(f.validate(), std::invalid_argument);
}
