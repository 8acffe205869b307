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

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spsfilter/limits.hpp"
#include "spsfilter/oracles.hpp"
#include "spsfilter/sweep.hpp"

namespace {

using json = nlohmann::json;
using namespace spsfilter;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAllFailed = 3;
constexpr int kExitBudget = 4;

struct CommonOpts {
    RateSet rates;
    FilterSpec filter;
    std::vector<std::string> metrics = {"ind", "g2T", "g2inf", "qy"};
    IntegrationConfig cfg;
    std::string out;
    std::string format = "csv";
    std::string config_path;
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--gamma-pump", o.rates.gamma_pump,
                    "Incoherent pump rate, units of gamma_diss");
    app->add_option("--gamma-deph", o.rates.gamma_deph, "Pure dephasing rate");
    app->add_option("--gamma-f", o.filter.gamma_f, "Filter half width");
    app->add_option("--pulse", o.rates.pulse_T, "Pump pulse duration");
    app->add_option("--detuning", o.rates.detuning,
                    "Filter center minus emitter frequency");
    app->add_option("--metrics", o.metrics, "Metrics to evaluate")
        ->delimiter(',');
    app->add_option("--rel-tol", o.cfg.rel_tol, "Relative accuracy target");
    app->add_option("--out", o.out, "Output path (default stdout)");
    app->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--config", o.config_path,
                    "JSON configuration file; flags override it");
}

// Config schema (all keys optional):
// { "gamma_pump": n, "gamma_deph": n, "gamma_f": n, "pulse_T": n,
//   "detuning": n, "metrics": [..], "rel_tol": n, "workers": n,
//   "axes": [{"param": s, "min": n, "max": n, "points": n, "scale": s}, ..] }
void load_config(const std::string& path, CommonOpts& o, SweepGrid* grid,
                 int* workers) {
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + path);
    json j = json::parse(is);
    if (j.contains("gamma_pump")) o.rates.gamma_pump = j["gamma_pump"];
    if (j.contains("gamma_deph")) o.rates.gamma_deph = j["gamma_deph"];
    if (j.contains("gamma_f")) o.filter.gamma_f = j["gamma_f"];
    if (j.contains("pulse_T")) o.rates.pulse_T = j["pulse_T"];
    if (j.contains("detuning")) {
        o.rates.detuning = j["detuning"];
        o.filter.detuning = o.rates.detuning;
    }
    if (j.contains("metrics"))
        o.metrics = j["metrics"].get<std::vector<std::string>>();
    if (j.contains("rel_tol")) o.cfg.rel_tol = j["rel_tol"];
    if (workers && j.contains("workers")) *workers = j["workers"];
    if (grid && j.contains("axes")) {
        grid->axes.clear();
        for (const json& a : j["axes"]) {
            SweepAxis ax;
            ax.param = a.at("param");
            ax.min = a.at("min");
            ax.max = a.at("max");
            ax.points = a.value("points", 2);
            ax.log_scale = a.value("scale", "linear") == std::string("log");
            grid->axes.push_back(ax);
        }
    }
}

int write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        std::cerr << "cannot write " << path << "\n";
        return kExitUsage;
    }
    os << text;
    return kExitOk;
}

std::string sibling_path(const std::string& out, const std::string& suffix) {
    const std::size_t dot = out.find_last_of('.');
    const std::size_t slash = out.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out + suffix;
    return out.substr(0, dot) + suffix;
}

std::string render_records(const CommonOpts& o,
                           const std::vector<MetricRecord>& records,
                           bool keep_wall) {
    if (o.format == "json") return records_json(records, keep_wall) + "\n";
    std::ostringstream ss;
    write_csv(ss, records, keep_wall);
    return ss.str();
}

// Accuracy budget: every metric that evaluated must meet the requested
// relative tolerance (with an absolute guard for near-zero values).
bool within_budget(const MetricRecord& rec, const IntegrationConfig& cfg) {
    const auto ok = [&](const MetricResult& m) {
        if (!std::isfinite(m.value)) return true;  // failures exit via status
        return m.error <= cfg.rel_tol * std::max(std::abs(m.value), 1.0);
    };
    return ok(rec.ind) && ok(rec.g2_T) && ok(rec.g2_inf) && ok(rec.qy);
}

int cmd_point(CommonOpts& o) {
    const MetricRecord rec = run_point(o.rates, o.filter, o.metrics, o.cfg);
    const int rc = write_out(o.out, render_records(o, {rec}, true));
    if (rc != kExitOk) return rc;
    if (!o.metrics.empty() && !rec.status.empty() && rec.status != "ok" &&
        !record_has_value(rec)) {
        std::cerr << rec.status << "\n";
        return kExitAllFailed;
    }
    if (!within_budget(rec, o.cfg)) {
        std::cerr << "accuracy budget exceeded (rel-tol " << o.cfg.rel_tol
                  << ")\n";
        return kExitBudget;
    }
    return kExitOk;
}

int emit_sweep(const CommonOpts& o, const SweepResult& res) {
    const int rc = write_out(o.out, render_records(o, res.records, false));
    if (rc != kExitOk) return rc;
    if (!o.out.empty()) {
        std::ofstream ms(sibling_path(o.out, ".manifest.json"));
        ms << manifest_json(res.manifest) << "\n";
        if (res.grid.axes.size() == 2 && !res.grid.metrics.empty()) {
            std::ofstream svg(sibling_path(o.out, ".svg"));
            write_heatmap_svg(svg, res, res.grid.metrics.front());
        }
    }
    bool any_ok = false;
    for (const MetricRecord& rec : res.records) any_ok |= record_has_value(rec);
    if (!any_ok && !res.records.empty() && !res.grid.metrics.empty()) {
        std::cerr << "all " << res.records.size() << " grid points failed\n";
        return kExitAllFailed;
    }
    return kExitOk;
}

int cmd_limits(const CommonOpts& o) {
    const std::vector<AnalyticLimit> lims = analytic_limits(o.rates, o.filter);
    if (o.format == "json") {
        json arr = json::array();
        for (const AnalyticLimit& l : lims)
            arr.push_back({{"name", l.name}, {"value", l.value},
                           {"regime", l.regime}});
        return write_out(o.out, arr.dump(2) + "\n");
    }
    std::ostringstream ss;
    ss << "# rates in units of gamma_diss (radiative decay rate = 1)\n";
    ss << "name,value,regime\n";
    for (const AnalyticLimit& l : lims) {
        std::string regime = l.regime;
        std::replace(regime.begin(), regime.end(), ',', ';');
        ss << l.name << "," << l.value << "," << regime << "\n";
    }
    return write_out(o.out, ss.str());
}

int cmd_selftest(const CommonOpts& o) {
    const std::vector<OracleReport> reports = selftest_suite();
    json arr = json::array();
    bool all_pass = true;
    for (const OracleReport& r : reports) {
        std::printf("%-22s %-4s engine=%-14.8g oracle=%-14.8g dev=%-9.3g tol=%g\n",
                    r.name.c_str(), r.pass ? "PASS" : "FAIL", r.engine_value,
                    r.oracle_value, r.rel_deviation, r.tolerance);
        all_pass &= r.pass;
        arr.push_back({{"name", r.name},
                       {"engine", r.engine_value},
                       {"oracle", r.oracle_value},
                       {"rel_deviation", r.rel_deviation},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass},
                       {"detail", r.detail}});
    }
    std::printf("%s\n", all_pass ? "selftest: all checks passed"
                                 : "selftest: FAILURES present");
    if (!o.out.empty()) {
        std::ofstream os(o.out);
        os << arr.dump(2) << "\n";
    }
    return all_pass ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectrally filtered incoherently pumped single-photon "
                 "source metrics"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    CommonOpts po, so, fo, lo, to;
    int workers = 1;
    std::string preset_id;
    SweepGrid grid;
    std::vector<std::string> axis_specs;

    CLI::App* point = app.add_subcommand("point", "Evaluate one parameter point");
    add_common(point, po);

    CLI::App* sweep = app.add_subcommand("sweep", "Evaluate a parameter grid");
    add_common(sweep, so);
    sweep->add_option("--axis", axis_specs,
                      "Axis spec param:min:max:points[:log|lin] (max 2)");
    sweep->add_option("--workers", workers, "Worker thread count");

    CLI::App* figure =
        app.add_subcommand("figure", "Run a published-panel preset grid");
    figure->add_option("id", preset_id, "Preset id (fig1a..fig5b)")->required();
    add_common(figure, fo);
    figure->add_option("--workers", workers, "Worker thread count");

    CLI::App* limits =
        app.add_subcommand("limits", "Closed-form limiting values");
    add_common(limits, lo);

    CLI::App* selftest =
        app.add_subcommand("selftest", "Run the validation oracle suite");
    selftest->add_option("--out", to.out, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (point->parsed()) {
            if (!po.config_path.empty()) load_config(po.config_path, po, nullptr,
                                                     nullptr);
            po.filter.detuning = po.rates.detuning;
            return cmd_point(po);
        }
        if (sweep->parsed()) {
            if (!so.config_path.empty())
                load_config(so.config_path, so, &grid, &workers);
            so.filter.detuning = so.rates.detuning;
            for (const std::string& spec : axis_specs) {
                SweepAxis ax;
                std::istringstream ss(spec);
                std::string tok;
                std::vector<std::string> parts;
                while (std::getline(ss, tok, ':')) parts.push_back(tok);
                if (parts.size() < 4) {
                    std::cerr << "bad --axis spec: " << spec << "\n";
                    return kExitUsage;
                }
                ax.param = parts[0];
                ax.min = std::stod(parts[1]);
                ax.max = std::stod(parts[2]);
                ax.points = std::stoi(parts[3]);
                ax.log_scale = parts.size() > 4 && parts[4] == "log";
                grid.axes.push_back(ax);
            }
            grid.base = so.rates;
            grid.filter = so.filter;
            grid.metrics = so.metrics;
            grid.cfg = so.cfg;
            return emit_sweep(so, run_sweep(grid, workers));
        }
        if (figure->parsed()) {
            SweepGrid g = figure_preset(preset_id);
            if (fo.cfg.rel_tol != IntegrationConfig{}.rel_tol)
                g.cfg.rel_tol = fo.cfg.rel_tol;
            fo.metrics = g.metrics;
            return emit_sweep(fo, run_sweep(g, workers));
        }
        if (limits->parsed()) {
            if (!lo.config_path.empty()) load_config(lo.config_path, lo, nullptr,
                                                     nullptr);
            lo.filter.detuning = lo.rates.detuning;
            return cmd_limits(lo);
        }
        if (selftest->parsed()) return cmd_selftest(to);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
