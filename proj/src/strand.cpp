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

#include "spsfilter/strand.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <set>
#include <stdexcept>

namespace spsfilter {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Tensor legs are numbered left to right in string order; leg k owns bit
// (K-1-k) of the flattened index.

MatrixXcd apply_on_leg(int K, int k, const Matrix2& m) {
    const int dim = 1 << K;
    const int shift = K - 1 - k;
    MatrixXcd out = MatrixXcd::Zero(dim, dim);
    for (int base = 0; base < dim; ++base) {
        const int b = (base >> shift) & 1;
        for (int bp = 0; bp < 2; ++bp) {
            const int idx = (base & ~(1 << shift)) | (bp << shift);
            out(idx, base) += m(bp, b);
        }
    }
    return out;
}

// Insert two legs (row, column of m) at positions k, k+1.
MatrixXcd birth_map(int K, int k, const Matrix2& m) {
    const int din = 1 << K;
    const int dout = 1 << (K + 2);
    const int right_bits = K - k;
    MatrixXcd out = MatrixXcd::Zero(dout, din);
    for (int base = 0; base < din; ++base) {
        const int left = base >> right_bits;
        const int right = base & ((1 << right_bits) - 1);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const int idx = (left << (right_bits + 2)) | (i << (right_bits + 1)) |
                                (j << right_bits) | right;
                out(idx, base) = m(i, j);
            }
    }
    return out;
}

// Contract adjacent legs k (pairs rows of m) and k+1 (pairs columns).
MatrixXcd death_map(int K, int k, const Matrix2& m) {
    const int din = 1 << K;
    const int dout = 1 << (K - 2);
    const int right_bits = K - 2 - k;
    MatrixXcd out = MatrixXcd::Zero(dout, din);
    for (int left = 0; left < (1 << k); ++left)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int right = 0; right < (1 << right_bits); ++right) {
                    const int in = (left << (right_bits + 2)) | (i << (right_bits + 1)) |
                                   (j << right_bits) | right;
                    const int idx = (left << right_bits) | right;
                    out(idx, in) += m(i, j);
                }
    return out;
}

struct Jump {
    Matrix2 c;
    double rate;
};

std::vector<Jump> jump_list(const RateSet& r, bool pump_on) {
    std::vector<Jump> jumps;
    jumps.push_back({sigma_op(), r.gamma_diss});
    if (r.gamma_deph > 0.0) jumps.push_back({proj_e_op(), r.gamma_deph});
    if (pump_on && r.gamma_pump > 0.0) jumps.push_back({sigma_dag_op(), r.gamma_pump});
    return jumps;
}

Matrix2 leg_form(const Matrix2& q, int eps) {
    if (eps > 0) return q;
    return q.transpose();
}

}  // namespace

Eigen::MatrixXcd strand_generator(const StrandEps& eps, const RateSet& r, bool pump_on) {
    const int K = static_cast<int>(eps.size());
    const int dim = 1 << K;
    MatrixXcd g = MatrixXcd::Zero(dim, dim);
    for (const Jump& j : jump_list(r, pump_on)) {
        const Matrix2 cdc = (j.c.adjoint() * j.c).eval();
        for (int k = 0; k < K; ++k) {
            g -= 0.5 * j.rate * apply_on_leg(K, k, leg_form(cdc, eps[k]));
        }
        const Matrix2 cdag = j.c.adjoint().eval();
        for (int k = 0; k < K; ++k)
            for (int l = k + 1; l < K; ++l) {
                const double sign = static_cast<double>(eps[k] * eps[l]);
                g -= j.rate * sign * apply_on_leg(K, k, leg_form(cdag, eps[k])) *
                     apply_on_leg(K, l, leg_form(j.c, eps[l]));
            }
    }
    return g;
}

std::uint32_t strand_signature(const StrandEps& eps, bool pump_on) {
    std::uint32_t sig = static_cast<std::uint32_t>(eps.size());
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (eps[k] > 0) sig |= 1u << (3 + k);
    }
    if (pump_on) sig |= 1u << 12;
    return sig;
}

const Eigen::MatrixXcd& StrandWorkspace::propagator(const StrandEps& eps, const RateSet& r,
                                                    bool pump_on, double dt) {
    const auto key = std::make_pair(strand_signature(eps, pump_on),
                                    std::bit_cast<std::uint64_t>(dt));
    auto it = propagators.find(key);
    if (it == propagators.end()) {
        MatrixXcd g = strand_generator(eps, r, pump_on);
        it = propagators.emplace(key, (g * dt).exp()).first;
    }
    return it->second;
}

StrandSchedule build_strand_schedule(const std::vector<Matrix2>& ops,
                                     const std::vector<int>& level_of,
                                     const Matrix2& rho0) {
    const int n = static_cast<int>(ops.size());
    assert(level_of.size() == ops.size());

    // Loop vertex i = 1..n carries operator A_{n+1-i}; vertex 0 is rho.
    std::vector<int> h(n + 1, 0);
    std::vector<Matrix2> vop(n + 1, Matrix2::Identity());
    int levels = 0;
    for (int i = 1; i <= n; ++i) {
        h[i] = level_of[n - i];
        vop[i] = ops[n - i];
        levels = std::max(levels, h[i]);
    }
    const auto nxt = [n](int i) { return (i + 1) % (n + 1); };
    const auto prv = [n](int i) { return (i + n) % (n + 1); };
    // Segment s_i joins vertex i to vertex i+1; string position n - i.
    const auto seg_pos = [n](int s) { return n - s; };
    const auto seg_eps = [&](int s) { return h[nxt(s)] > h[s] ? +1 : -1; };

    StrandSchedule sched;
    sched.segment_eps.resize(levels);
    sched.level_maps.resize(levels);

    struct Active {
        int seg;
        int eps;
    };
    std::vector<Active> active;
    const auto current_eps = [&] {
        StrandEps e;
        for (const Active& a : active) e.push_back(a.eps);
        return e;
    };

    // ---- level 0: the rho chain plus any operators pinned at time zero.
    std::set<int> at_level;
    for (int i = 0; i <= n; ++i) {
        if (h[i] == 0) at_level.insert(i);
    }
    std::set<int> visited;
    {
        // Members of the rho chain on each side of the cut.
        int j = 0;
        while (j + 1 <= n && at_level.count(j + 1)) ++j;
        int k = n + 1;
        while (k - 1 >= 1 && at_level.count(k - 1) && k - 1 > j) --k;
        Matrix2 m = Matrix2::Identity();
        for (int i = j; i >= 1; --i) m = m * vop[i];
        m = m * rho0;
        for (int i = n; i >= k; --i) m = m * vop[i];
        for (int i = 0; i <= j; ++i) visited.insert(i);
        for (int i = k; i <= n; ++i) visited.insert(i);
        if (static_cast<int>(visited.size()) == n + 1) {
            sched.scalar_only = true;
            sched.scalar_value = m.trace();
            return sched;
        }
        // Legs: cyclic-right outer s_{k-1} pairs the column of m and sits at
        // the left end of the string; cyclic-left outer s_j pairs the row.
        sched.initial = VectorXcd::Zero(4);
        for (int row = 0; row < 2; ++row)
            for (int col = 0; col < 2; ++col) sched.initial(2 * col + row) = m(row, col);
        active.push_back({k - 1, seg_eps(k - 1)});
        active.push_back({j, seg_eps(j)});
    }

    // Generic chain handler for levels >= 1 and detached level-0 chains.
    const auto process_chain = [&](int a, int b, int level, Eigen::VectorXcd* state_for_level0,
                                   MatrixXcd* map_accum) {
        Matrix2 m = vop[b];
        for (int i = b - 1; i >= a; --i) m = m * vop[i];
        const int left_outer = b;           // s_b
        const int right_outer = prv(a);     // s_{a-1}
        const bool left_above = h[nxt(b)] > level;
        const bool right_above = h[prv(a)] > level;
        const int K = static_cast<int>(active.size());
        MatrixXcd ev;
        if (left_above && right_above) {
            int idx = 0;
            for (const Active& act : active) {
                if (seg_pos(act.seg) < seg_pos(left_outer)) ++idx;
            }
            ev = birth_map(K, idx, m);
            active.insert(active.begin() + idx, {left_outer, seg_eps(left_outer)});
            active.insert(active.begin() + idx + 1, {right_outer, seg_eps(right_outer)});
        } else if (!left_above && !right_above) {
            int idx = -1;
            for (int q = 0; q < K; ++q) {
                if (active[q].seg == left_outer) idx = q;
            }
            assert(idx >= 0 && idx + 1 < K && active[idx + 1].seg == right_outer);
            ev = death_map(K, idx, m);
            active.erase(active.begin() + idx, active.begin() + idx + 2);
        } else {
            const int below = left_above ? right_outer : left_outer;
            const int above = left_above ? left_outer : right_outer;
            int idx = -1;
            for (int q = 0; q < K; ++q) {
                if (active[q].seg == below) idx = q;
            }
            assert(idx >= 0);
            // Below strand left of the fold takes the transpose.
            const Matrix2 q = (below == left_outer) ? Matrix2(m.transpose()) : m;
            ev = apply_on_leg(K, idx, q);
            active[idx] = {above, seg_eps(above)};
        }
        if (state_for_level0 != nullptr) {
            *state_for_level0 = (ev * *state_for_level0).eval();
        } else {
            *map_accum = (ev * *map_accum).eval();
        }
    };

    // Remaining detached chains at level 0 (operators at exactly t = 0).
    for (int i = 1; i <= n; ++i) {
        if (!at_level.count(i) || visited.count(i)) continue;
        int a = i, b = i;
        while (at_level.count(a - 1) && a - 1 >= 1) --a;
        while (b + 1 <= n && at_level.count(b + 1)) ++b;
        for (int q = a; q <= b; ++q) visited.insert(q);
        process_chain(a, b, 0, &sched.initial, nullptr);
    }

    // ---- levels 1..L.
    for (int level = 1; level <= levels; ++level) {
        sched.segment_eps[level - 1] = current_eps();
        const int dim = 1 << active.size();
        MatrixXcd combined = MatrixXcd::Identity(dim, dim);
        std::set<int> done;
        for (int i = 1; i <= n; ++i) {
            if (h[i] != level || done.count(i)) continue;
            int a = i, b = i;
            while (a - 1 >= 1 && h[a - 1] == level) --a;
            while (b + 1 <= n && h[b + 1] == level) ++b;
            for (int q = a; q <= b; ++q) done.insert(q);
            process_chain(a, b, level, nullptr, &combined);
        }
        sched.level_maps[level - 1] = combined;
    }
    if (!active.empty()) {
        throw std::logic_error("strand schedule did not close the loop");
    }
    return sched;
}

Complex loop_value(const std::vector<Matrix2>& ops, const std::vector<double>& times,
                   const RateSet& r, StrandWorkspace& ws) {
    assert(ops.size() == times.size());
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw std::invalid_argument("correlator times must be finite and >= 0");
        }
    }
    // Distinct positive times become levels 1..L; exact zeros fold into the
    // loop bottom.
    std::vector<double> lv;
    for (double t : times) {
        if (t > 0.0) lv.push_back(t);
    }
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    std::vector<int> level_of(times.size());
    for (std::size_t p = 0; p < times.size(); ++p) {
        level_of[p] = times[p] == 0.0
                          ? 0
                          : 1 + static_cast<int>(std::lower_bound(lv.begin(), lv.end(),
                                                                  times[p]) -
                                                 lv.begin());
    }
    const StrandSchedule sched = build_strand_schedule(ops, level_of, unvec(ground_state()));
    if (sched.scalar_only) return sched.scalar_value;

    Eigen::VectorXcd psi = sched.initial;
    double t_prev = 0.0;
    for (std::size_t k = 0; k < lv.size(); ++k) {
        const double t_next = lv[k];
        const StrandEps& eps = sched.segment_eps[k];
        if (t_prev < r.pulse_T && t_next > r.pulse_T) {
            psi = ws.propagator(eps, r, true, r.pulse_T - t_prev) * psi;
            psi = ws.propagator(eps, r, false, t_next - r.pulse_T) * psi;
        } else {
            const bool pump_on = t_next <= r.pulse_T;
            psi = ws.propagator(eps, r, pump_on, t_next - t_prev) * psi;
        }
        psi = sched.level_maps[k] * psi;
        t_prev = t_next;
    }
    assert(psi.size() == 1);
    return psi(0);
}

}  // namespace spsfilter
