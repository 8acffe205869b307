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

#include "spsfilter/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace spsfilter {

namespace {

using json = nlohmann::json;

const std::vector<std::string>& known_params() {
    static const std::vector<std::string> v = {"gamma_pump", "gamma_deph",
                                               "gamma_F", "pulse_T", "detuning"};
    return v;
}

std::string canon_param(const std::string& p) {
    if (p == "gamma_f") return "gamma_F";
    return p;
}

void apply_param(const std::string& p, double v, RateSet& r, FilterSpec& f) {
    if (p == "gamma_pump") r.gamma_pump = v;
    else if (p == "gamma_deph") r.gamma_deph = v;
    else if (p == "gamma_F") f.gamma_f = v;
    else if (p == "pulse_T") r.pulse_T = v;
    else if (p == "detuning") { r.detuning = v; f.detuning = v; }
    else throw std::invalid_argument("unknown sweep parameter: " + p);
}

const std::vector<std::string>& known_metrics() {
    static const std::vector<std::string> v = {"ind", "g2T", "g2inf", "qy"};
    return v;
}

bool wants(const std::vector<std::string>& metrics, const char* name) {
    return std::find(metrics.begin(), metrics.end(), name) != metrics.end();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// CSV cells must stay comma-free and stable across platforms.
std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::string num(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Row {
    double vals[13];
    const std::string* status;
};

Row make_row(const MetricRecord& rec) {
    return Row{{rec.rates.gamma_pump, rec.rates.gamma_deph, rec.filter.gamma_f,
                rec.rates.pulse_T, rec.rates.detuning, rec.ind.value, rec.ind.error,
                rec.g2_T.value, rec.g2_T.error, rec.g2_inf.value, rec.g2_inf.error,
                rec.qy.value, rec.qy.error, },
               &rec.status};
}

const char* const kColumns =
    "gamma_pump,gamma_deph,gamma_f,pulse_T,detuning,ind,ind_err,g2_T,g2_T_err,"
    "g2_inf,g2_inf_err,qy_ratio,qy_err,status,wall_ms";

json grid_to_json(const SweepGrid& g) {
    json axes = json::array();
    for (const SweepAxis& a : g.axes) {
        axes.push_back({{"param", a.param},
                        {"min", a.min},
                        {"max", a.max},
                        {"points", a.points},
                        {"scale", a.log_scale ? "log" : "linear"}});
    }
    return {{"axes", axes},
            {"base",
             {{"gamma_pump", g.base.gamma_pump},
              {"gamma_deph", g.base.gamma_deph},
              {"gamma_F", g.filter.gamma_f},
              {"pulse_T", g.base.pulse_T},
              {"detuning", g.base.detuning}}},
            {"metrics", g.metrics},
            {"rel_tol", g.cfg.rel_tol},
            {"abs_tol", g.cfg.abs_tol}};
}

}  // namespace

std::vector<double> SweepAxis::values() const {
    std::vector<double> out(points);
    if (log_scale) {
        const double la = std::log(min), lb = std::log(max);
        for (int i = 0; i < points; ++i)
            out[i] = std::exp(la + (lb - la) * i / (points - 1));
    } else {
        for (int i = 0; i < points; ++i)
            out[i] = min + (max - min) * i / (points - 1);
    }
    return out;
}

void SweepGrid::validate() const {
    if (axes.size() > 2) {
        throw std::invalid_argument("at most two sweep axes are supported");
    }
    for (const SweepAxis& a : axes) {
        const std::string p = canon_param(a.param);
        if (std::find(known_params().begin(), known_params().end(), p) ==
            known_params().end()) {
            throw std::invalid_argument("unknown sweep parameter: " + a.param);
        }
        if (a.points < 2) {
            throw std::invalid_argument("sweep axis needs at least 2 points");
        }
        if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
            throw std::invalid_argument("sweep axis bounds must be finite");
        }
        if (a.log_scale && (a.min <= 0.0 || a.max <= 0.0)) {
            throw std::invalid_argument("log-scaled axis bounds must be positive");
        }
    }
    for (const std::string& m : metrics) {
        if (std::find(known_metrics().begin(), known_metrics().end(), m) ==
            known_metrics().end()) {
            throw std::invalid_argument("unknown metric: " + m +
                                        " (expected ind, g2T, g2inf, qy)");
        }
    }
}

std::size_t SweepGrid::size() const {
    std::size_t n = 1;
    for (const SweepAxis& a : axes) n *= static_cast<std::size_t>(a.points);
    return n;
}

bool record_has_value(const MetricRecord& rec) {
    return std::isfinite(rec.ind.value) || std::isfinite(rec.g2_T.value) ||
           std::isfinite(rec.g2_inf.value) || std::isfinite(rec.qy.value);
}

MetricRecord run_point(const RateSet& r, const FilterSpec& f,
                       const std::vector<std::string>& metrics,
                       const IntegrationConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    MetricRecord rec;
    rec.rates = r;
    rec.filter = f;
    rec.ind = rec.g2_T = rec.g2_inf = rec.qy = MetricResult{kNaN, kNaN};

    const auto attempt = [&rec](const char* name, MetricResult& slot, auto&& eval) {
        try {
            slot = eval();
        } catch (const std::exception& e) {
            if (rec.status == "ok") rec.status.clear();
            if (!rec.status.empty()) rec.status += "; ";
            rec.status += std::string(name) + ": " + e.what();
        }
    };
    if (wants(metrics, "ind"))
        attempt("ind", rec.ind, [&] { return indistinguishability(r, f, cfg); });
    if (wants(metrics, "g2T"))
        attempt("g2T", rec.g2_T, [&] { return g2_filtered_at_T(r, f, cfg); });
    if (wants(metrics, "g2inf"))
        attempt("g2inf", rec.g2_inf, [&] { return g2_infinity(r, cfg); });
    if (wants(metrics, "qy"))
        attempt("qy", rec.qy, [&] { return qy_ratio(r, f, cfg); });

    rec.status = sanitize(rec.status);
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

SweepResult run_sweep(const SweepGrid& grid, int workers) {
    grid.validate();
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::vector<double>> axis_vals;
    for (const SweepAxis& a : grid.axes) axis_vals.push_back(a.values());
    const std::size_t n = grid.size();

    SweepResult res;
    res.grid = grid;
    res.records.resize(n);

    const auto eval_one = [&](std::size_t idx) {
        RateSet r = grid.base;
        FilterSpec f = grid.filter;
        // Lexicographic: first axis slowest.
        std::size_t rem = idx;
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            const std::size_t k = rem % axis_vals[a].size();
            rem /= axis_vals[a].size();
            apply_param(canon_param(grid.axes[a].param), axis_vals[a][k], r, f);
        }
        res.records[idx] = run_point(r, f, grid.metrics, grid.cfg);
    };

    const int nw = std::clamp(workers, 1, 256);
    if (nw == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) eval_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n;
                     i = next.fetch_add(1)) {
                    eval_one(i);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    res.manifest.grid = grid;
    res.manifest.workers = nw;
    res.manifest.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    for (const MetricRecord& rec : res.records) {
        res.manifest.point_wall_ms.push_back(rec.wall_ms);
        res.manifest.point_status.push_back(rec.status);
    }
    return res;
}

std::vector<std::string> figure_preset_ids() {
    return {"fig1a", "fig1b", "fig2a", "fig2b", "fig3",
            "fig4a", "fig4b", "fig5a", "fig5b"};
}

SweepGrid figure_preset(const std::string& id) {
    SweepGrid g;
    const SweepAxis filter_axis{"gamma_F", 1e-2, 1e2, 40, true};
    const SweepAxis pulse_axis{"pulse_T", 1e-2, 1e2, 40, true};

    if (id == "fig1a" || id == "fig1b" || id == "fig2a" || id == "fig2b" ||
        id == "fig5a" || id == "fig5b") {
        g.axes = {filter_axis, pulse_axis};
        g.base.gamma_deph = 10.0;
        g.base.gamma_pump = id.back() == 'a' ? 0.01 : 5.0;
        g.metrics = {id[3] == '1' ? "ind" : (id[3] == '2' ? "g2T" : "qy")};
    } else if (id == "fig3") {
        // Short-pulse band: axes span gamma_F*T in [1e-3, 10] and the
        // pump-off transverse rate times T in [1e-2, 10] at T = 0.01.
        g.axes = {SweepAxis{"gamma_F", 0.1, 1e3, 40, true},
                  SweepAxis{"gamma_deph", 1.0, 2e3, 40, true}};
        g.base.pulse_T = 0.01;
        g.base.gamma_pump = 0.01;
        g.metrics = {"g2T"};
    } else if (id == "fig4a" || id == "fig4b") {
        g.axes = {SweepAxis{"gamma_pump", 1e-2, 1e2, 40, true}, pulse_axis};
        g.base.gamma_deph = id == "fig4a" ? 0.0 : 10.0;
        g.metrics = {"g2inf"};
    } else {
        std::string ids;
        for (const std::string& s : figure_preset_ids()) {
            if (!ids.empty()) ids += ", ";
            ids += s;
        }
        throw std::invalid_argument("unknown figure preset '" + id +
                                    "' (valid: " + ids + ")");
    }
    return g;
}

void write_csv(std::ostream& os, const std::vector<MetricRecord>& records,
               bool keep_wall) {
    os << "# rates in units of gamma_diss (radiative decay rate = 1)\n";
    os << kColumns << "\n";
    for (const MetricRecord& rec : records) {
        const Row row = make_row(rec);
        for (double v : row.vals) os << num(v) << ",";
        os << *row.status << "," << (keep_wall ? num(rec.wall_ms) : "0") << "\n";
    }
}

std::string records_json(const std::vector<MetricRecord>& records,
                         bool keep_wall) {
    json arr = json::array();
    const auto put = [](json& j, const char* k, double v) {
        if (std::isfinite(v)) j[k] = v;
        else j[k] = nullptr;
    };
    for (const MetricRecord& rec : records) {
        json j;
        j["gamma_pump"] = rec.rates.gamma_pump;
        j["gamma_deph"] = rec.rates.gamma_deph;
        j["gamma_f"] = rec.filter.gamma_f;
        j["pulse_T"] = rec.rates.pulse_T;
        j["detuning"] = rec.rates.detuning;
        put(j, "ind", rec.ind.value);
        put(j, "ind_err", rec.ind.error);
        put(j, "g2_T", rec.g2_T.value);
        put(j, "g2_T_err", rec.g2_T.error);
        put(j, "g2_inf", rec.g2_inf.value);
        put(j, "g2_inf_err", rec.g2_inf.error);
        put(j, "qy_ratio", rec.qy.value);
        put(j, "qy_err", rec.qy.error);
        j["status"] = rec.status;
        j["wall_ms"] = keep_wall ? rec.wall_ms : 0.0;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

std::string manifest_json(const RunManifest& m) {
    json j;
    j["engine_version"] = m.engine_version;
    j["configuration"] = grid_to_json(m.grid);
    j["workers"] = m.workers;
    j["wall_ms"] = m.wall_ms;
    j["point_wall_ms"] = m.point_wall_ms;
    j["point_status"] = m.point_status;
    return j.dump(2);
}

namespace {

// Small fixed color ramp; t in [0, 1].
void ramp(double t, int& rr, int& gg, int& bb) {
    static const double stops[][3] = {
        {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
        {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
        {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.478, 0.821, 0.318},
        {0.741, 0.873, 0.150}, {0.993, 0.906, 0.144}};
    constexpr int n = 10;
    t = std::clamp(t, 0.0, 1.0) * n;
    const int i = std::min(static_cast<int>(t), n - 1);
    const double u = t - i;
    rr = static_cast<int>(255 * (stops[i][0] + u * (stops[i + 1][0] - stops[i][0])));
    gg = static_cast<int>(255 * (stops[i][1] + u * (stops[i + 1][1] - stops[i][1])));
    bb = static_cast<int>(255 * (stops[i][2] + u * (stops[i + 1][2] - stops[i][2])));
}

double metric_value(const MetricRecord& rec, const std::string& metric) {
    if (metric == "ind") return rec.ind.value;
    if (metric == "g2T") return rec.g2_T.value;
    if (metric == "g2inf") return rec.g2_inf.value;
    if (metric == "qy") return rec.qy.value;
    throw std::invalid_argument("unknown metric: " + metric);
}

}  // namespace

void write_heatmap_svg(std::ostream& os, const SweepResult& res,
                       const std::string& metric) {
    if (res.grid.axes.size() != 2) {
        throw std::invalid_argument("heatmap output needs a two-axis grid");
    }
    const int nx = res.grid.axes[1].points;  // fast axis -> x
    const int ny = res.grid.axes[0].points;  // slow axis -> y
    double lo = 0.0, hi = 0.0;
    bool seen = false;
    for (const MetricRecord& rec : res.records) {
        const double v = metric_value(rec, metric);
        if (!std::isfinite(v)) continue;
        lo = seen ? std::min(lo, v) : v;
        hi = seen ? std::max(hi, v) : v;
        seen = true;
    }
    if (!seen) hi = 1.0;
    if (hi <= lo) hi = lo + 1.0;

    constexpr int cell = 12, margin = 70, bar_w = 18, bar_gap = 26;
    const int w = margin + nx * cell + bar_gap + bar_w + 70;
    const int h = margin + ny * cell + 50;
    char buf[256];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
       << "\" height=\"" << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const double v =
                metric_value(res.records[static_cast<std::size_t>(iy) * nx + ix],
                             metric);
            std::string fill = "#bbbbbb";  // failed point
            if (std::isfinite(v)) {
                int r, g, b;
                ramp((v - lo) / (hi - lo), r, g, b);
                std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
                fill = buf;
            }
            // y axis grows upward
            os << "<rect x=\"" << margin + ix * cell << "\" y=\""
               << margin + (ny - 1 - iy) * cell << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
        }
    }
    // color bar
    const int bx = margin + nx * cell + bar_gap;
    const int bh = ny * cell;
    for (int i = 0; i < bh; ++i) {
        int r, g, b;
        ramp(1.0 - static_cast<double>(i) / (bh - 1), r, g, b);
        std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
        os << "<rect x=\"" << bx << "\" y=\"" << margin + i << "\" width=\""
           << bar_w << "\" height=\"1\" fill=\"" << buf << "\"/>\n";
    }
    const auto text = [&](int x, int y, const std::string& s, const char* anchor) {
        os << "<text x=\"" << x << "\" y=\"" << y
           << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\""
           << anchor << "\">" << s << "</text>\n";
    };
    text(bx + bar_w + 4, margin + 10, num(hi), "start");
    text(bx + bar_w + 4, margin + bh, num(lo), "start");
    text(bx + bar_w / 2, margin - 10, metric, "middle");
    // axis annotations: fast axis along x, slow axis along y
    const SweepAxis& ax = res.grid.axes[1];
    const SweepAxis& ay = res.grid.axes[0];
    const char* scale_x = ax.log_scale ? " (log)" : "";
    const char* scale_y = ay.log_scale ? " (log)" : "";
    text(margin, margin + ny * cell + 16, num(ax.min), "middle");
    text(margin + nx * cell, margin + ny * cell + 16, num(ax.max), "middle");
    text(margin + nx * cell / 2, margin + ny * cell + 34, ax.param + scale_x,
         "middle");
    text(margin - 8, margin + ny * cell, num(ay.min), "end");
    text(margin - 8, margin + 12, num(ay.max), "end");
    os << "<text x=\"" << margin - 40 << "\" y=\"" << margin + ny * cell / 2
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\""
       << " transform=\"rotate(-90 " << margin - 40 << " "
       << margin + ny * cell / 2 << ")\">" << ay.param << scale_y << "</text>\n";
    os << "</svg>\n";
}

}  // namespace spsfilter
