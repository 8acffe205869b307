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

#include "spsfilter/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace spsfilter {

namespace {

struct SpecEval {
    Complex value;
    double err;
};

SpecEval eval_spec(const ChainSpec& spec, const IntegrationConfig& cfg) {
    switch (cfg.path) {
        case IntegrationConfig::Path::semi_analytic: {
            const ChainResult r = chain_integral(spec);
            // Closed-form path: the only error is roundoff, so the estimate
            // must stay relative or tiny ratios inflate it absurdly.
            return {r.value, 1e-9 * std::abs(r.value)};
        }
        case IntegrationConfig::Path::quadrature: {
            const ChainResult r =
                chain_integral_quadrature(spec, cfg.quad_order, cfg.horizon_factor);
            return {r.value, r.tail_bound + 1e-7 * std::abs(r.value) + cfg.abs_tol};
        }
        case IntegrationConfig::Path::both: {
            const ChainResult s = chain_integral(spec);
            const ChainResult q =
                chain_integral_quadrature(spec, cfg.quad_order, cfg.horizon_factor);
            const double err =
                std::abs(s.value - q.value) + q.tail_bound + cfg.abs_tol;
            return {s.value, err};
        }
    }
    throw std::logic_error("unreachable");
}

double real_checked(const SpecEval& e, const char* what) {
    const double scale = std::max(std::abs(e.value.real()), 1e3 * e.err);
    if (std::abs(e.value.imag()) > 1e-7 * scale + 1e-12) {
        throw AccuracyError(std::string("imaginary residue in ") + what);
    }
    return e.value.real();
}

// num / den^2 with the denominator guard and first-order error propagation.
MetricResult normalized(const SpecEval& num, const SpecEval& den, const char* what) {
    const double n = real_checked(num, what);
    const double d = real_checked(den, what);
    if (std::abs(d) < 1e-12) {
        throw DegenerateInputError(std::string("vanishing emission denominator in ") +
                                   what);
    }
    if (d < 0.0) {
        throw AccuracyError(std::string("negative emission denominator in ") + what);
    }
    MetricResult out;
    out.value = n / (d * d);
    out.error = std::abs(out.value) *
                    (num.err / std::max(std::abs(n), 1e-300) + 2.0 * den.err / d) +
                1e-12;
    return out;
}

// Two-sided power kernel of the filter as an exponential pair, oriented as
// x(x_a - x_b), optionally conjugated.
PairKernel power_pair(const FilterSpec& f, int a, int b, bool conj) {
    PairKernel k;
    k.coeff = Complex{0.5 * f.gamma_f, 0.0};
    const double d = conj ? -f.detuning : f.detuning;
    k.rate_fwd = Complex{f.gamma_f, d};
    k.rate_rev = Complex{f.gamma_f, -d};
    k.var_a = a;
    k.var_b = b;
    return k;
}

ChainProcess sigma_pair(int v1, int v2, bool conj) {
    ChainProcess p;
    p.ops = {sigma_dag_op(), sigma_op()};
    p.vars = {v1, v2};
    p.conjugated = conj;
    p.kind = ChainProcess::Kind::pair_sigma;
    return p;
}

ChainProcess sigma_quad() {
    ChainProcess p;
    p.ops = {sigma_dag_op(), sigma_dag_op(), sigma_op(), sigma_op()};
    p.vars = {0, 1, 2, 3};
    p.kind = ChainProcess::Kind::quad_sigma;
    return p;
}

// Boundary-anchored amplitude kernel f(B - x) (transfer = false flips to the
// conjugate kernel).
VarTerm transfer_term(const FilterSpec& f, int breakpoint, bool conjugate) {
    if (conjugate) {
        return {Complex{0.0, f.gamma_f}, Complex{f.gamma_f, -f.detuning}, breakpoint,
                false};
    }
    return {Complex{0.0, -f.gamma_f}, Complex{f.gamma_f, f.detuning}, breakpoint, false};
}

}  // namespace

MetricResult indistinguishability(const RateSet& r, const FilterSpec& f,
                                  const IntegrationConfig& cfg) {
    r.validate();
    f.validate();
    ChainSpec num;
    num.rates = r;
    num.n_vars = 4;
    num.processes = {sigma_pair(0, 1, false), sigma_pair(2, 3, true)};
    num.kernels = {power_pair(f, 0, 2, false), power_pair(f, 1, 3, true)};
    num.breakpoints = {r.pulse_T};
    num.unbounded = true;

    ChainSpec den;
    den.rates = r;
    den.n_vars = 2;
    den.processes = {sigma_pair(0, 1, false)};
    den.kernels = {power_pair(f, 0, 1, false)};
    den.breakpoints = {r.pulse_T};
    den.unbounded = true;

    return normalized(eval_spec(num, cfg), eval_spec(den, cfg), "indistinguishability");
}

MetricResult g2_filtered_at_T(const RateSet& r, const FilterSpec& f,
                              const IntegrationConfig& cfg) {
    r.validate();
    f.validate();
    ChainSpec num;
    num.rates = r;
    num.n_vars = 4;
    num.processes = {sigma_quad()};
    num.breakpoints = {r.pulse_T};
    num.var_terms.resize(4);
    for (int v = 0; v < 4; ++v) {
        num.var_terms[v] = {{transfer_term(f, 0, v < 2)}};
    }

    ChainSpec den;
    den.rates = r;
    den.n_vars = 2;
    den.processes = {sigma_pair(0, 1, false)};
    den.breakpoints = {r.pulse_T};
    den.var_terms = {{{transfer_term(f, 0, true)}}, {{transfer_term(f, 0, false)}}};

    return normalized(eval_spec(num, cfg), eval_spec(den, cfg), "g2_filtered_at_T");
}

// Total emitted intensity integral int_0^inf <sigma^dag sigma> dt, split into
// the pump window and the free-decay tail; both pieces are closed-form.
static double total_emission(const RateSet& r) {
    const DerivedRates d = DerivedRates::from(r);
    const double g = d.gamma_total;
    const double pop_T = d.p_ss * -std::expm1(-g * r.pulse_T);
    return d.p_ss * (r.pulse_T + std::expm1(-g * r.pulse_T) / g) +
           pop_T / r.gamma_diss;
}

MetricResult g2_infinity(const RateSet& r, const IntegrationConfig& cfg) {
    r.validate();
    // Literal operator products sigma(t3)sigma(t4) annihilate every state once
    // the pump is off, so the raw four-fold integral collapses to a pulse-area
    // sliver and cannot reproduce the published short-pulse plateau. The
    // plateau is carried by the integrated first-order coherence instead:
    //   gamma_diss * int int <sigma^dag(t1) sigma(t2)> / int <sigma^dag sigma>
    // equals 4*gamma_diss/(gamma_diss+gamma_deph) for short pulses at any
    // excitation probability and relaxes to the CW value for long pulses.
    ChainSpec num;
    num.rates = r;
    num.n_vars = 2;
    num.processes = {sigma_pair(0, 1, false)};
    num.breakpoints = {r.pulse_T};
    num.unbounded = true;

    const double total = total_emission(r);
    if (std::abs(total) < 1e-12) {
        throw DegenerateInputError("vanishing total emission in g2_infinity");
    }
    const SpecEval n = eval_spec(num, cfg);
    const double nv = real_checked(n, "g2_infinity");
    MetricResult out;
    out.value = r.gamma_diss * nv / total;
    out.error = std::abs(out.value) * n.err / std::max(std::abs(nv), 1e-300) + 1e-12;
    return out;
}

MetricResult qy_ratio(const RateSet& r, const FilterSpec& f,
                      const IntegrationConfig& cfg) {
    r.validate();
    f.validate();
    // Variable 0 is the detection time; causal kernels keep the emission
    // times below it.
    ChainSpec num;
    num.rates = r;
    num.n_vars = 3;
    num.processes = {sigma_pair(1, 2, false)};
    PairKernel kc = power_pair(f, 0, 1, true);
    kc.coeff = Complex{0.0, f.gamma_f};
    kc.causal = true;
    PairKernel kd = power_pair(f, 0, 2, false);
    kd.coeff = Complex{0.0, -f.gamma_f};
    kd.causal = true;
    num.kernels = {kc, kd};
    num.breakpoints = {r.pulse_T};
    num.unbounded = true;

    const double total = total_emission(r);
    if (std::abs(total) < 1e-12) {
        throw DegenerateInputError("vanishing total emission in qy_ratio");
    }
    const SpecEval n = eval_spec(num, cfg);
    const double nv = real_checked(n, "qy_ratio");
    MetricResult out;
    out.value = nv / total;
    out.error = std::abs(out.value) * n.err / std::max(std::abs(nv), 1e-300) + 1e-12;
    return out;
}

MetricResult g2_detector_window(const RateSet& r, const FilterSpec& f, double t,
                                double tau, const IntegrationConfig& cfg) {
    r.validate();
    f.validate();
    if (!(t >= 0.0) || !(tau > 0.0) || !std::isfinite(t) || !std::isfinite(tau)) {
        throw std::invalid_argument("detector window needs t >= 0 and tau > 0");
    }
    const double end = t + tau;
    std::vector<double> bps;
    if (t > 0.0) bps.push_back(t);
    if (r.pulse_T < end) bps.push_back(r.pulse_T);
    bps.push_back(end);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    const int bp_t = t > 0.0 ? static_cast<int>(std::find(bps.begin(), bps.end(), t) -
                                                bps.begin())
                             : -1;
    const int bp_end =
        static_cast<int>(std::find(bps.begin(), bps.end(), end) - bps.begin());

    // Window-integrated amplitude kernel W(s) = int_t^{t+tau} f(u - s) du as
    // per-interval exponential pairs.
    const Complex gain = dc_gain(f);
    const Complex rate{f.gamma_f, f.detuning};
    const auto window_terms = [&](int interval, bool conjugate) {
        const double hi = bps[interval];
        std::vector<VarTerm> terms;
        if (hi <= t) {
            terms.push_back({gain, rate, bp_t, false});
            terms.push_back({-gain, rate, bp_end, false});
        } else if (hi <= end) {
            terms.push_back({gain, Complex{0.0, 0.0}, 0, false});
            terms.push_back({-gain, rate, bp_end, false});
        }
        if (conjugate) {
            for (VarTerm& vt : terms) {
                vt.coeff = std::conj(vt.coeff);
                vt.rate = std::conj(vt.rate);
            }
        }
        return terms;
    };

    ChainSpec num;
    num.rates = r;
    num.n_vars = 4;
    num.processes = {sigma_quad()};
    num.breakpoints = bps;
    num.var_terms.resize(4);
    for (int v = 0; v < 4; ++v) {
        for (std::size_t i = 0; i < bps.size(); ++i) {
            num.var_terms[v].push_back(window_terms(static_cast<int>(i), v < 2));
        }
    }

    ChainSpec den;
    den.rates = r;
    den.n_vars = 2;
    den.processes = {sigma_pair(0, 1, false)};
    den.breakpoints = bps;
    den.var_terms.resize(2);
    for (int v = 0; v < 2; ++v) {
        for (std::size_t i = 0; i < bps.size(); ++i) {
            den.var_terms[v].push_back(window_terms(static_cast<int>(i), v == 0));
        }
    }

    return normalized(eval_spec(num, cfg), eval_spec(den, cfg), "g2_detector_window");
}

}  // namespace spsfilter
