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

#include "spsfilter/chain.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>

namespace spsfilter {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Region plans.
//
// A region fixes the time ordering of the variables and the interval each one
// falls into. Within a region the integrand is a single chain: alternating
// strand propagation and event maps, with a scalar exponent per gap collected
// from the kernels. Variables past the pulse end are clamped to the boundary
// (the chain factorizes there) and leave only scalar exponents in the tail.

struct Point {
    bool is_breakpoint;
    int id;  // variable id or breakpoint id
};

struct RegionPlan {
    std::vector<Point> points;
    std::vector<int> var_point;
    std::vector<int> var_interval;
    std::vector<int> bp_point;
    std::vector<StrandSchedule> schedules;  // per process, conjugation applied
    std::vector<Complex> seg_rate;          // exponent per segment, sans var terms
    Complex coeff{1.0, 0.0};
};

// Multiplies exp(-rate * (x(p_hi) - x(p_lo))) into the region by adjusting
// the per-segment exponents between the two points.
void add_exponent(std::vector<Complex>& seg, int p_hi, int p_lo, Complex rate) {
    if (p_hi >= p_lo) {
        for (int g = p_lo + 1; g <= p_hi; ++g) seg[g] -= rate;
    } else {
        for (int g = p_hi + 1; g <= p_lo; ++g) seg[g] += rate;
    }
}

std::optional<RegionPlan> plan_region(const ChainSpec& spec,
                                      const std::vector<int>& order,
                                      const std::vector<int>& slot_interval) {
    const int n = spec.n_vars;
    const int m = static_cast<int>(spec.breakpoints.size());
    RegionPlan plan;
    plan.var_interval.assign(n, 0);
    std::vector<int> slot_of(n, 0);
    for (int s = 0; s < n; ++s) {
        slot_of[order[s]] = s;
        plan.var_interval[order[s]] = slot_interval[s];
    }
    for (const PairKernel& k : spec.kernels) {
        if (k.causal && slot_of[k.var_a] < slot_of[k.var_b]) return std::nullopt;
    }

    plan.var_point.assign(n, -1);
    plan.bp_point.assign(m, -1);
    int s = 0;
    for (int i = 0; i < m; ++i) {
        while (s < n && slot_interval[s] == i) {
            plan.var_point[order[s]] = static_cast<int>(plan.points.size());
            plan.points.push_back({false, order[s]});
            ++s;
        }
        plan.bp_point[i] = static_cast<int>(plan.points.size());
        plan.points.push_back({true, i});
    }
    for (; s < n; ++s) {
        plan.var_point[order[s]] = static_cast<int>(plan.points.size());
        plan.points.push_back({false, order[s]});
    }
    plan.seg_rate.assign(plan.points.size(), Complex{0.0, 0.0});

    for (const PairKernel& k : spec.kernels) {
        plan.coeff *= k.coeff;
        const int pa = plan.var_point[k.var_a], pb = plan.var_point[k.var_b];
        if (pa > pb) {
            add_exponent(plan.seg_rate, pa, pb, k.rate_fwd);
        } else {
            add_exponent(plan.seg_rate, pb, pa, k.rate_rev);
        }
    }

    // Clamp beyond-pulse operators to the boundary; the dynamical factor they
    // leave behind is a pure exponential of the tail gaps.
    const DerivedRates d = DerivedRates::from(spec.rates);
    const int bpT = m > 0 ? plan.bp_point[m - 1] : -1;
    for (const ChainProcess& pr : spec.processes) {
        std::vector<int> lv(pr.ops.size());
        std::vector<int> tail_ops;
        for (std::size_t o = 0; o < pr.ops.size(); ++o) {
            const int v = pr.vars[o];
            lv[o] = plan.var_point[v] + 1;
            if (plan.var_interval[v] == m) tail_ops.push_back(static_cast<int>(o));
        }
        if (!tail_ops.empty()) {
            if (pr.kind == ChainProcess::Kind::bounded_only) {
                throw std::logic_error("bounded-only process has operators in the tail");
            }
            const auto by_slot = [&](int a, int b) {
                return plan.var_point[pr.vars[a]] < plan.var_point[pr.vars[b]];
            };
            std::sort(tail_ops.begin(), tail_ops.end(), by_slot);
            if (pr.kind == ChainProcess::Kind::quad_sigma) {
                const auto has = [&](int o) {
                    return std::find(tail_ops.begin(), tail_ops.end(), o) != tail_ops.end();
                };
                // Both raising (or both lowering) operators past the pulse,
                // or three or more, kill the region exactly.
                if (tail_ops.size() >= 3 || (has(0) && has(1)) || (has(2) && has(3))) {
                    return std::nullopt;
                }
            }
            if (tail_ops.size() == 1) {
                const int p = plan.var_point[pr.vars[tail_ops[0]]];
                add_exponent(plan.seg_rate, p, bpT, Complex{d.big_gamma_off, 0.0});
                lv[tail_ops[0]] = bpT + 1;
            } else {
                assert(tail_ops.size() == 2);
                const int p1 = plan.var_point[pr.vars[tail_ops[0]]];
                const int p2 = plan.var_point[pr.vars[tail_ops[1]]];
                add_exponent(plan.seg_rate, p1, bpT, Complex{spec.rates.gamma_diss, 0.0});
                add_exponent(plan.seg_rate, p2, p1, Complex{d.big_gamma_off, 0.0});
                lv[tail_ops[0]] = bpT + 1;
                lv[tail_ops[1]] = bpT + 1;
            }
        }
        StrandSchedule sched = build_strand_schedule(pr.ops, lv, unvec(ground_state()));
        if (pr.conjugated) {
            if (sched.scalar_only) {
                sched.scalar_value = std::conj(sched.scalar_value);
            } else {
                sched.initial = sched.initial.conjugate();
                for (auto& mp : sched.level_maps) mp = mp.conjugate();
            }
        }
        plan.schedules.push_back(std::move(sched));
    }
    return plan;
}

void for_each_region(const ChainSpec& spec,
                     const std::function<void(const std::vector<int>&,
                                              const std::vector<int>&)>& f) {
    const int n = spec.n_vars;
    const int n_iv =
        static_cast<int>(spec.breakpoints.size()) + (spec.unbounded ? 1 : 0);
    std::vector<int> order, ivs;
    std::vector<bool> used(n, false);
    const std::function<void(int, int)> rec = [&](int slot, int min_iv) {
        if (slot == n) {
            f(order, ivs);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            int lo = 0, hi = n_iv - 1;
            if (!spec.var_intervals.empty()) {
                lo = spec.var_intervals[v].first;
                hi = std::min(hi, spec.var_intervals[v].second);
            }
            for (int i = std::max(min_iv, lo); i <= hi; ++i) {
                used[v] = true;
                order.push_back(v);
                ivs.push_back(i);
                rec(slot + 1, i);
                order.pop_back();
                ivs.pop_back();
                used[v] = false;
            }
        }
    };
    rec(0, 0);
}

// ---------------------------------------------------------------------------
// Segment generators and propagation.

StrandEps band_of(const StrandSchedule& s, int seg) {
    if (seg < static_cast<int>(s.segment_eps.size())) return s.segment_eps[seg];
    return {};
}

const MatrixXcd& level_map_of(const StrandSchedule& s, int rank,
                              MatrixXcd& identity_scratch) {
    if (rank <= static_cast<int>(s.level_maps.size())) return s.level_maps[rank - 1];
    identity_scratch = MatrixXcd::Identity(1, 1);
    return identity_scratch;
}

// Exact-action propagator for one base generator; the scalar gap exponent is
// applied as a shift. Falls back to full exponentials when the matrix is
// not safely diagonalizable.
struct SegProp {
    MatrixXcd G;
    bool eig_ok = false;
    MatrixXcd V, Vinv;
    VectorXcd lam;
    std::map<std::uint64_t, MatrixXcd> expm_cache;

    explicit SegProp(MatrixXcd g) : G(std::move(g)) {
        if (G.rows() == 1) return;  // handled by the scalar path below
        Eigen::ComplexEigenSolver<MatrixXcd> es(G);
        if (es.info() != Eigen::Success) return;
        V = es.eigenvectors();
        lam = es.eigenvalues();
        Eigen::FullPivLU<MatrixXcd> lu(V);
        if (!lu.isInvertible()) return;
        Vinv = lu.inverse();
        const double err =
            (V * lam.asDiagonal() * Vinv - G).cwiseAbs().maxCoeff();
        eig_ok = err < 1e-10 * (1.0 + G.cwiseAbs().maxCoeff());
    }

    VectorXcd apply(double dt, Complex kappa, const VectorXcd& x) {
        const Complex shift = std::exp(kappa * dt);
        if (G.rows() == 1) {
            VectorXcd y(1);
            y(0) = std::exp(G(0, 0) * dt) * shift * x(0);
            return y;
        }
        if (eig_ok) {
            VectorXcd c = Vinv * x;
            for (Eigen::Index i = 0; i < c.size(); ++i) {
                c(i) *= std::exp(lam(i) * dt);
            }
            return shift * (V * c);
        }
        const std::uint64_t key = std::bit_cast<std::uint64_t>(dt);
        auto it = expm_cache.find(key);
        if (it == expm_cache.end()) {
            if (expm_cache.size() > 4096) expm_cache.clear();
            it = expm_cache.emplace(key, (G * dt).exp()).first;
        }
        return shift * (it->second * x);
    }
};

struct GenCache {
    const RateSet& rates;
    std::map<std::pair<std::vector<std::uint32_t>, bool>, MatrixXcd> base;
    std::map<std::pair<std::vector<std::uint32_t>, bool>, SegProp> props;

    explicit GenCache(const RateSet& r) : rates(r) {}

    static std::pair<std::vector<std::uint32_t>, bool> key_of(
        const ChainSpec& spec, const RegionPlan& plan, int seg, bool pump) {
        std::vector<std::uint32_t> sigs;
        for (std::size_t p = 0; p < plan.schedules.size(); ++p) {
            std::uint32_t sig = strand_signature(band_of(plan.schedules[p], seg), false);
            if (spec.processes[p].conjugated) sig |= 1u << 20;
            sigs.push_back(sig);
        }
        return {std::move(sigs), pump};
    }

    const MatrixXcd& generator(const ChainSpec& spec, const RegionPlan& plan, int seg,
                               bool pump) {
        auto key = key_of(spec, plan, seg, pump);
        auto it = base.find(key);
        if (it != base.end()) return it->second;
        MatrixXcd g = MatrixXcd::Zero(1, 1);
        for (std::size_t p = 0; p < plan.schedules.size(); ++p) {
            MatrixXcd gp = strand_generator(band_of(plan.schedules[p], seg), rates, pump);
            if (spec.processes[p].conjugated) gp = gp.conjugate();
            g = (Eigen::kroneckerProduct(g, MatrixXcd::Identity(gp.rows(), gp.rows())) +
                 Eigen::kroneckerProduct(MatrixXcd::Identity(g.rows(), g.rows()), gp))
                    .eval();
        }
        return base.emplace(std::move(key), std::move(g)).first->second;
    }

    SegProp& prop(const ChainSpec& spec, const RegionPlan& plan, int seg, bool pump) {
        auto key = key_of(spec, plan, seg, pump);
        auto it = props.find(key);
        if (it == props.end()) {
            it = props.emplace(key, SegProp(generator(spec, plan, seg, pump))).first;
        }
        return it->second;
    }
};

MatrixXcd combined_level_map(const RegionPlan& plan, int rank) {
    MatrixXcd out = MatrixXcd::Identity(1, 1);
    MatrixXcd scratch;
    for (const StrandSchedule& s : plan.schedules) {
        out = Eigen::kroneckerProduct(out, level_map_of(s, rank, scratch)).eval();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Semi-analytic interval step: the ordered chain integral over one bounded
// window is the corner block of a block upper-bidiagonal exponential. The
// dominant diagonal rate is shifted out so the corner stays well scaled.

MatrixXcd van_loan_corner(const std::vector<MatrixXcd>& gens,
                          const std::vector<MatrixXcd>& events, double w) {
    const int k = static_cast<int>(events.size());
    assert(static_cast<int>(gens.size()) == k + 1);
    double mu = -std::numeric_limits<double>::infinity();
    for (const MatrixXcd& g : gens) {
        mu = std::max(mu, g.diagonal().real().maxCoeff());
    }
    std::vector<int> off(k + 2, 0);
    for (int r = 0; r <= k; ++r) {
        off[r + 1] = off[r] + static_cast<int>(gens[k - r].rows());
    }
    const int dim = off[k + 1];
    MatrixXcd c = MatrixXcd::Zero(dim, dim);
    for (int r = 0; r <= k; ++r) {
        const MatrixXcd& g = gens[k - r];
        c.block(off[r], off[r], g.rows(), g.rows()) =
            g - mu * MatrixXcd::Identity(g.rows(), g.rows());
        if (r < k) {
            const MatrixXcd& e = events[k - 1 - r];
            c.block(off[r], off[r + 1], e.rows(), e.cols()) = e;
        }
    }
    const MatrixXcd big = (c * w).exp();
    const int d_last = static_cast<int>(gens[k].rows());
    const int d_first = static_cast<int>(gens[0].rows());
    return std::exp(mu * w) * big.block(0, dim - d_first, d_last, d_first);
}

// ---------------------------------------------------------------------------
// Quadrature path: iterated panel Gauss-Legendre with geometric grading and
// barycentric re-interpolation of the inner iterate.

struct GaussLegendre {
    std::vector<double> x, w, bary;  // nodes/weights on [-1, 1]

    explicit GaussLegendre(int order) {
        const int n = std::max(2, order);
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = xi;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2 * j - 1) * xi * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                const double dx = p1 / dp;
                xi -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            x[i] = xi;
            w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        }
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return x[a] < x[b]; });
        std::vector<double> xs(n), ws(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = x[idx[i]];
            ws[i] = w[idx[i]];
        }
        x = xs;
        w = ws;
        bary.assign(n, 1.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (j != i) bary[i] /= (x[i] - x[j]);
            }
        }
    }
};

VectorXcd interp_panel(const GaussLegendre& gl, const std::vector<VectorXcd>& vals,
                       double a, double b, double s) {
    const double xi = 2.0 * (s - a) / (b - a) - 1.0;
    const int n = static_cast<int>(gl.x.size());
    for (int i = 0; i < n; ++i) {
        if (std::abs(xi - gl.x[i]) < 1e-14) return vals[i];
    }
    VectorXcd num = VectorXcd::Zero(vals[0].size());
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double c = gl.bary[i] / (xi - gl.x[i]);
        num += c * vals[i];
        den += c;
    }
    return num / den;
}

std::vector<double> graded_edges(double w, double scale) {
    const int q = std::clamp(
        static_cast<int>(std::ceil(std::log2(std::max(2.0, scale * w)))), 1, 30);
    std::vector<double> e{0.0, w};
    for (int j = 1; j <= q; ++j) {
        e.push_back(w * std::ldexp(1.0, -j));
        e.push_back(w * (1.0 - std::ldexp(1.0, -j)));
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-300; }),
            e.end());
    return e;
}

VectorXcd cascade_interval(std::vector<SegProp*>& segs,
                           const std::vector<Complex>& kappas,
                           const std::vector<MatrixXcd>& events, double w,
                           const VectorXcd& v_in, const GaussLegendre& gl) {
    const int k = static_cast<int>(events.size());
    if (k == 0) return segs[0]->apply(w, kappas[0], v_in);
    double scale = 1.0 / w;
    for (std::size_t j = 0; j < segs.size(); ++j) {
        double d = std::abs(kappas[j]);
        if (segs[j]->G.rows() > 0) {
            d += segs[j]->G.diagonal().cwiseAbs().maxCoeff();
        }
        scale = std::max(scale, d);
    }
    const std::vector<double> edges = graded_edges(w, scale);
    const int np = static_cast<int>(edges.size()) - 1;
    const int order = static_cast<int>(gl.x.size());

    std::vector<std::vector<VectorXcd>> cur(np);
    std::vector<VectorXcd> cur_end(np);
    VectorXcd start = v_in;
    for (int p = 0; p < np; ++p) {
        const double a = edges[p], b = edges[p + 1];
        cur[p].resize(order);
        for (int i = 0; i < order; ++i) {
            const double u = a + (b - a) * 0.5 * (gl.x[i] + 1.0);
            cur[p][i] = segs[0]->apply(u - a, kappas[0], start);
        }
        start = segs[0]->apply(b - a, kappas[0], start);
        cur_end[p] = start;
    }

    for (int j = 1; j <= k; ++j) {
        std::vector<std::vector<VectorXcd>> nxt(np);
        std::vector<VectorXcd> nxt_end(np);
        VectorXcd ystart = VectorXcd::Zero(events[j - 1].rows());
        for (int p = 0; p < np; ++p) {
            const double a = edges[p], b = edges[p + 1];
            nxt[p].resize(order);
            const auto value_at = [&](double u) {
                VectorXcd acc = VectorXcd::Zero(events[j - 1].rows());
                const double half = 0.5 * (u - a);
                for (int q = 0; q < order; ++q) {
                    const double s0 = a + (u - a) * 0.5 * (gl.x[q] + 1.0);
                    const VectorXcd y = interp_panel(gl, cur[p], a, b, s0);
                    acc += (gl.w[q] * half) *
                           segs[j]->apply(u - s0, kappas[j], events[j - 1] * y);
                }
                return (segs[j]->apply(u - a, kappas[j], ystart) + acc).eval();
            };
            for (int i = 0; i < order; ++i) {
                nxt[p][i] = value_at(a + (b - a) * 0.5 * (gl.x[i] + 1.0));
            }
            nxt_end[p] = value_at(b);
            ystart = nxt_end[p];
        }
        cur = std::move(nxt);
        cur_end = std::move(nxt_end);
    }
    return cur_end.back();
}

// Numeric tail gap integral with truncation at the decay horizon.
Complex quad_tail_gap(Complex kappa, double horizon_factor, const GaussLegendre& gl,
                      double* rel_trunc) {
    const double decay = -kappa.real();
    const double h = horizon_factor / decay;
    const int np = static_cast<int>(std::min(
        20000.0, std::ceil(horizon_factor * std::max(1.0, std::abs(kappa) / decay))));
    Complex acc{0.0, 0.0};
    for (int p = 0; p < np; ++p) {
        const double a = h * p / np, b = h * (p + 1) / np;
        const double half = 0.5 * (b - a);
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
            const double s = a + (b - a) * 0.5 * (gl.x[q] + 1.0);
            acc += gl.w[q] * half * std::exp(kappa * s);
        }
    }
    *rel_trunc += std::exp(-horizon_factor);
    return acc;
}

// ---------------------------------------------------------------------------

struct PathConfig {
    bool quadrature = false;
    double horizon_factor = 40.0;
    const GaussLegendre* gl = nullptr;
};

Complex evaluate_region(const ChainSpec& spec, const RegionPlan& plan,
                        const std::vector<Complex>& seg_rate, Complex coeff,
                        GenCache& cache, const PathConfig& path, double* rel_trunc) {
    const int m = static_cast<int>(spec.breakpoints.size());
    VectorXcd state(1);
    state(0) = coeff;
    for (const StrandSchedule& s : plan.schedules) {
        if (s.scalar_only) {
            state *= s.scalar_value;
        } else {
            state = Eigen::kroneckerProduct(state, s.initial).eval();
        }
    }
    int g = 0;
    double prev = 0.0;
    for (int i = 0; i < m; ++i) {
        const double b = spec.breakpoints[i];
        const bool pump = 0.5 * (prev + b) < spec.rates.pulse_T;
        const int bp_idx = plan.bp_point[i];
        if (path.quadrature) {
            std::vector<SegProp*> segs;
            std::vector<Complex> kappas;
            std::vector<MatrixXcd> events;
            for (int q = g; q <= bp_idx; ++q) {
                segs.push_back(&cache.prop(spec, plan, q, pump));
                kappas.push_back(seg_rate[q]);
                if (q < bp_idx) events.push_back(combined_level_map(plan, q + 1));
            }
            state = cascade_interval(segs, kappas, events, b - prev, state, *path.gl);
        } else {
            std::vector<MatrixXcd> gens;
            std::vector<MatrixXcd> events;
            for (int q = g; q <= bp_idx; ++q) {
                MatrixXcd gq = cache.generator(spec, plan, q, pump);
                gq += seg_rate[q] * MatrixXcd::Identity(gq.rows(), gq.rows());
                gens.push_back(std::move(gq));
                if (q < bp_idx) events.push_back(combined_level_map(plan, q + 1));
            }
            state = van_loan_corner(gens, events, b - prev) * state;
        }
        state = combined_level_map(plan, bp_idx + 1) * state;
        g = bp_idx + 1;
        prev = b;
    }
    for (int q = g; q < static_cast<int>(plan.points.size()); ++q) {
        if (state.size() != 1) {
            throw std::logic_error("tail entered with an open chain");
        }
        const Complex kappa = seg_rate[q];
        if (!(kappa.real() < 0.0)) {
            throw AccuracyError("non-decaying tail gap in chain integral");
        }
        if (path.quadrature) {
            state *= quad_tail_gap(kappa, path.horizon_factor, *path.gl, rel_trunc);
        } else {
            state *= -1.0 / kappa;
        }
    }
    if (state.size() != 1) {
        throw std::logic_error("chain integral did not close");
    }
    return state(0);
}

void validate_spec(const ChainSpec& spec) {
    spec.rates.validate();
    if (spec.n_vars <= 0) throw std::invalid_argument("chain spec needs variables");
    if (spec.breakpoints.empty()) {
        throw std::invalid_argument("chain spec needs at least one breakpoint");
    }
    double prev = 0.0;
    for (double b : spec.breakpoints) {
        if (!(b > prev)) {
            throw std::invalid_argument("breakpoints must be ascending and positive");
        }
        if (prev < spec.rates.pulse_T && b > spec.rates.pulse_T) {
            throw std::invalid_argument("an interval straddles the pulse end");
        }
        prev = b;
    }
    if (spec.unbounded && spec.breakpoints.back() != spec.rates.pulse_T) {
        throw std::invalid_argument("unbounded specs must end their bounded part at the pulse");
    }
    if (!spec.var_intervals.empty() &&
        static_cast<int>(spec.var_intervals.size()) != spec.n_vars) {
        throw std::invalid_argument("var_intervals size mismatch");
    }
    if (!spec.var_terms.empty() &&
        static_cast<int>(spec.var_terms.size()) != spec.n_vars) {
        throw std::invalid_argument("var_terms size mismatch");
    }
}

ChainResult integrate(const ChainSpec& spec, const PathConfig& path) {
    validate_spec(spec);
    GenCache cache(spec.rates);
    Complex total{0.0, 0.0};
    double rel_trunc = 0.0;
    std::vector<int> term_vars;
    for (int v = 0; v < spec.n_vars; ++v) {
        if (!spec.var_terms.empty() && !spec.var_terms[v].empty()) term_vars.push_back(v);
    }
    for_each_region(spec, [&](const std::vector<int>& order,
                              const std::vector<int>& ivs) {
        const auto plan = plan_region(spec, order, ivs);
        if (!plan) return;
        // Enumerate the kernel-term choice per variable (window kernels are
        // short sums of exponentials on each interval).
        std::vector<const std::vector<VarTerm>*> choices;
        for (int v : term_vars) {
            const auto& terms = spec.var_terms[v][plan->var_interval[v]];
            if (terms.empty()) return;  // the kernel vanishes on this interval
            choices.push_back(&terms);
        }
        std::vector<std::size_t> pick(choices.size(), 0);
        while (true) {
            std::vector<Complex> seg = plan->seg_rate;
            Complex coeff = plan->coeff;
            for (std::size_t c = 0; c < choices.size(); ++c) {
                const VarTerm& t = (*choices[c])[pick[c]];
                coeff *= t.coeff;
                const int pv = plan->var_point[term_vars[c]];
                const int pb = plan->bp_point[t.breakpoint];
                if (t.from_start) {
                    add_exponent(seg, pv, pb, t.rate);
                } else {
                    add_exponent(seg, pb, pv, t.rate);
                }
            }
            total += evaluate_region(spec, *plan, seg, coeff, cache, path, &rel_trunc);
            std::size_t c = 0;
            for (; c < pick.size(); ++c) {
                if (++pick[c] < choices[c]->size()) break;
                pick[c] = 0;
            }
            if (c == pick.size()) break;
        }
    });
    return {total, rel_trunc * std::abs(total)};
}

}  // namespace

ChainResult chain_integral(const ChainSpec& spec) {
    PathConfig path;
    return integrate(spec, path);
}

ChainResult chain_integral_quadrature(const ChainSpec& spec, int order,
                                      double horizon_factor) {
    PathConfig path;
    path.quadrature = true;
    path.horizon_factor = horizon_factor;
    const GaussLegendre gl(order);
    path.gl = &gl;
    return integrate(spec, path);
}

}  // namespace spsfilter
