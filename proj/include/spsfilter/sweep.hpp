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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spsfilter/metrics.hpp"
#include "spsfilter/rates.hpp"

namespace spsfilter {

inline constexpr const char* kEngineVersion = "0.1.0";

// One swept parameter. `param` is one of gamma_pump, gamma_deph, gamma_F,
// pulse_T, detuning (gamma_f is accepted as an alias).
struct SweepAxis {
    std::string param;
    double min = 0.0;
    double max = 0.0;
    int points = 2;
    bool log_scale = false;

    // Inclusive endpoints, linearly or logarithmically spaced.
    std::vector<double> values() const;
};

// A rectangular parameter grid: up to two axes over a fixed base
// configuration, plus the metric selection.
struct SweepGrid {
    std::vector<SweepAxis> axes;
    RateSet base;
    FilterSpec filter;
    std::vector<std::string> metrics;  // subset of {ind, g2T, g2inf, qy}
    IntegrationConfig cfg;

    // Throws std::invalid_argument on bad axis names, points < 2,
    // non-positive log bounds, more than two axes, or unknown metrics.
    void validate() const;
    std::size_t size() const;
};

// One evaluated grid point. Metrics that were not requested, or that
// failed, hold NaN; `status` is "ok" or the first failure message.
struct MetricRecord {
    RateSet rates;
    FilterSpec filter;
    MetricResult ind;
    MetricResult g2_T;
    MetricResult g2_inf;
    MetricResult qy;
    std::string status = "ok";
    double wall_ms = 0.0;
};

// True when at least one requested metric evaluated successfully.
bool record_has_value(const MetricRecord& rec);

// Everything needed to reproduce a run bit-identically with the same build.
struct RunManifest {
    std::string engine_version = kEngineVersion;
    SweepGrid grid;
    int workers = 1;
    double wall_ms = 0.0;                  // whole-run wall time
    std::vector<double> point_wall_ms;     // per point, grid order
    std::vector<std::string> point_status;
};

struct SweepResult {
    SweepGrid grid;
    std::vector<MetricRecord> records;
    RunManifest manifest;
};

// Evaluates the selected metrics at one parameter point. Metric failures
// are captured into the record, never thrown.
MetricRecord run_point(const RateSet& r, const FilterSpec& f,
                       const std::vector<std::string>& metrics,
                       const IntegrationConfig& cfg = {});

// Evaluates every grid point on `workers` threads. Row order is the
// lexicographic grid order (first axis slowest) regardless of scheduling.
SweepResult run_sweep(const SweepGrid& grid, int workers = 1);

// Grid reproducing one published panel; throws std::invalid_argument for
// unknown ids, listing the valid ones.
SweepGrid figure_preset(const std::string& id);
std::vector<std::string> figure_preset_ids();

// CSV with the fixed column order
//   gamma_pump, gamma_deph, gamma_f, pulse_T, detuning, ind, ind_err,
//   g2_T, g2_T_err, g2_inf, g2_inf_err, qy_ratio, qy_err, status, wall_ms.
// Sweeps zero the wall_ms column so output is byte-identical across worker
// counts; real timings live in the manifest. Single points keep it.
void write_csv(std::ostream& os, const std::vector<MetricRecord>& records,
               bool keep_wall = false);

std::string records_json(const std::vector<MetricRecord>& records,
                         bool keep_wall = false);
std::string manifest_json(const RunManifest& m);

// Standalone SVG heatmap of one metric over a two-axis grid, color scale
// embedded. Throws std::invalid_argument unless the grid has two axes.
void write_heatmap_svg(std::ostream& os, const SweepResult& res,
                       const std::string& metric);

}  // namespace spsfilter
