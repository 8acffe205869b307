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

#include "spsfilter/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spsfilter {

namespace {

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("correlator times must be finite and >= 0");
    }
}

// Propagate a vectorized state across [t_a, t_b], honoring the pump switch.
StateVector advance(CorrelatorContext& ctx, const StateVector& x, double t_a, double t_b) {
    const RateSet& r = ctx.rates;
    static const StrandEps kStd{-1, +1};
    // The two standard strands carry the (column, row) legs of the state;
    // map to the row-major vectorization used elsewhere.
    const auto to_strand = [](const StateVector& v) {
        StateVector w;
        w << v(0), v(2), v(1), v(3);
        return w;
    };
    StateVector w = to_strand(x);
    if (t_a < r.pulse_T && t_b > r.pulse_T) {
        w = ctx.strands.propagator(kStd, r, true, r.pulse_T - t_a) * w;
        w = ctx.strands.propagator(kStd, r, false, t_b - r.pulse_T) * w;
    } else {
        w = ctx.strands.propagator(kStd, r, t_b <= r.pulse_T, t_b - t_a) * w;
    }
    return to_strand(w);  // the swap is its own inverse
}

struct Step {
    double time;
    std::vector<int> positions;  // 0-based into the operator list
};

std::vector<Step> group_steps(const std::vector<double>& times) {
    std::vector<int> order(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return times[a] < times[b]; });
    std::vector<Step> steps;
    for (int p : order) {
        if (steps.empty() || steps.back().time != times[p]) {
            steps.push_back({times[p], {}});
        }
        steps.back().positions.push_back(p);
    }
    return steps;
}

// Textbook regression recipe; empty when the time profile is out of order.
std::optional<Complex> standard_eval(CorrelatorContext& ctx,
                                     const std::vector<Matrix2>& ops,
                                     const std::vector<double>& times) {
    const std::vector<Step> steps = group_steps(times);
    // Classification pass first so no work is done on out-of-time-order input.
    for (std::size_t s = 0; s + 1 < steps.size(); ++s) {
        for (int p : steps[s].positions) {
            bool all_later_right = true, all_later_left = true;
            for (std::size_t q = 0; q < times.size(); ++q) {
                if (times[q] <= steps[s].time) continue;
                (static_cast<int>(q) > p ? all_later_left : all_later_right) = false;
            }
            if (!all_later_right && !all_later_left) return std::nullopt;
        }
    }
    StateVector x = ground_state();
    double t_prev = 0.0;
    for (std::size_t s = 0; s < steps.size(); ++s) {
        x = advance(ctx, x, t_prev, steps[s].time);
        t_prev = steps[s].time;
        std::vector<int> ps = steps[s].positions;
        std::sort(ps.begin(), ps.end());
        if (s + 1 == steps.size()) {
            for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
                x = left_mult(ops[*it]) * x;
            }
            return trace_of(x);
        }
        std::vector<int> rights, lefts;
        for (int p : ps) {
            bool all_later_right = true;
            for (std::size_t q = 0; q < times.size(); ++q) {
                if (times[q] > steps[s].time && static_cast<int>(q) < p) {
                    all_later_right = false;
                }
            }
            (all_later_right ? rights : lefts).push_back(p);
        }
        for (int p : rights) x = right_mult(ops[p]) * x;  // ascending
        for (auto it = lefts.rbegin(); it != lefts.rend(); ++it) {
            x = left_mult(ops[*it]) * x;  // descending
        }
    }
    return std::nullopt;  // unreachable
}

std::vector<Matrix2> four_time_ops() {
    return {sigma_dag_op(), sigma_dag_op(), sigma_op(), sigma_op()};
}

}  // namespace

CorrelatorValue two_time(CorrelatorContext& ctx, double t1, double t2) {
    check_time(t1);
    check_time(t2);
    const std::vector<Matrix2> ops{sigma_dag_op(), sigma_op()};
    const std::vector<double> times{t1, t2};
    const auto v = standard_eval(ctx, ops, times);
    // A two-operator profile is always reducible.
    return {v.value(), Provenance::standard_qrt};
}

CorrelatorValue four_time(CorrelatorContext& ctx, double t1, double t2, double t3,
                          double t4) {
    for (double t : {t1, t2, t3, t4}) check_time(t);
    if (t1 == t2 || t3 == t4) {
        // Adjacent equal-time sigma^dag (or sigma) pairs fold to zero.
        return {Complex{0.0, 0.0}, Provenance::forced_zero};
    }
    const std::vector<Matrix2> ops = four_time_ops();
    const std::vector<double> times{t1, t2, t3, t4};
    if (const auto v = standard_eval(ctx, ops, times)) {
        return {*v, Provenance::standard_qrt};
    }
    return {loop_value(ops, times, ctx.rates, ctx.strands), Provenance::generalized_qrt};
}

std::optional<CorrelatorValue> beyond_pulse_reduction(CorrelatorContext& ctx, double t1,
                                                  double t2, double t3, double t4) {
    const double T = ctx.rates.pulse_T;
    const std::array<double, 4> t{t1, t2, t3, t4};
    std::vector<int> beyond;
    for (int i = 0; i < 4; ++i) {
        check_time(t[i]);
        if (t[i] > T) beyond.push_back(i);
    }
    if (beyond.empty()) return std::nullopt;
    const DerivedRates d = DerivedRates::from(ctx.rates);
    const auto clamped = [&](std::initializer_list<int> which) {
        std::array<double, 4> c = t;
        for (int i : which) c[i] = T;
        return four_time(ctx, c[0], c[1], c[2], c[3]).value;
    };
    if (beyond.size() == 1) {
        const int i = beyond[0];
        const double factor = std::exp(-d.big_gamma_off * (t[i] - T));
        return CorrelatorValue{factor * clamped({i}), Provenance::factorized_reduction};
    }
    if (beyond.size() == 2) {
        const int a = beyond[0], b = beyond[1];
        // Both raising (or both lowering) operators beyond the pulse leave no
        // excitation to carry the coherence: exact zero.
        if ((a == 0 && b == 1) || (a == 2 && b == 3)) {
            return CorrelatorValue{{0.0, 0.0}, Provenance::factorized_reduction};
        }
        const double factor = std::exp(-d.big_gamma_off * std::abs(t[a] - t[b])) *
                              std::exp(-ctx.rates.gamma_diss * (std::min(t[a], t[b]) - T));
        return CorrelatorValue{factor * clamped({a, b}), Provenance::factorized_reduction};
    }
    return CorrelatorValue{{0.0, 0.0}, Provenance::factorized_reduction};
}

}  // namespace spsfilter
