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
#include <sstream>

#include <json.hpp>

#include "spsfilter/oracles.hpp"
#include "spsfilter/sweep.hpp"

using namespace spsfilter;

TEST_CASE("axis value spacing") {
    SweepAxis lin{"pulse_T", 1.0, 3.0, 5, false};
    const auto lv = lin.values();
    REQUIRE(lv.size() == 5);
    CHECK(lv.front() == doctest::Approx(1.0));
    CHECK(lv.back() == doctest::Approx(3.0));
    CHECK(lv[2] == doctest::Approx(2.0));

    SweepAxis lg{"gamma_F", 1e-2, 1e2, 5, true};
    const auto gv = lg.values();
    CHECK(gv.front() == doctest::Approx(1e-2));
    CHECK(gv[2] == doctest::Approx(1.0));
    CHECK(gv.back() == doctest::Approx(1e2));
}

TEST_CASE("grid validation rejects malformed input") {
    SweepGrid g;
    g.metrics = {"qy"};
    g.axes = {{"pulse_T", 1.0, 2.0, 2, false},
              {"gamma_F", 1.0, 2.0, 2, false},
              {"gamma_pump", 1.0, 2.0, 2, false}};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    g.axes = {{"bogus", 1.0, 2.0, 2, false}};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    g.axes = {{"pulse_T", 1.0, 2.0, 1, false}};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    g.axes = {{"pulse_T", 0.0, 2.0, 3, true}};  // log scale needs positive lo
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    g.axes = {{"gamma_f", 1.0, 2.0, 3, true}};  // alias accepted
    CHECK_NOTHROW(g.validate());

    g.metrics = {"qy", "bogus"};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("run_point evaluates the requested metrics only") {
    RateSet r;
    r.gamma_pump = 5.0;
    r.gamma_deph = 10.0;
    r.pulse_T = 0.01;
    FilterSpec f;

    const MetricRecord rec = run_point(r, f, {"qy"});
    CHECK(rec.status == "ok");
    CHECK(rec.qy.value == doctest::Approx(2.0 / 13.0).epsilon(0.01));
    CHECK(!std::isfinite(rec.ind.value));
    CHECK(!std::isfinite(rec.g2_T.value));
    CHECK(rec.wall_ms > 0.0);

    const MetricRecord empty = run_point(r, f, {});
    CHECK(empty.status == "ok");
    CHECK(!record_has_value(empty));
}

TEST_CASE("run_point captures per-metric failures without throwing") {
    RateSet r;  // no pump at all: nothing is ever emitted
    r.gamma_pump = 0.0;
    r.pulse_T = 0.5;
    FilterSpec f;
    const MetricRecord rec = run_point(r, f, {"g2inf", "qy"});
    CHECK(rec.status != "ok");
    CHECK(rec.status.find("g2inf") != std::string::npos);
    CHECK(!std::isfinite(rec.g2_inf.value));
    CHECK(!record_has_value(rec));
}

TEST_CASE("sweep rows come out in lexicographic grid order") {
    SweepGrid g;
    g.axes = {{"gamma_pump", 1.0, 3.0, 3, false}, {"pulse_T", 0.1, 0.2, 2, false}};
    g.metrics = {"qy"};
    const SweepResult res = run_sweep(g, 1);
    REQUIRE(res.records.size() == 6);  // 3 x 2
    // first axis slowest
    CHECK(res.records[0].rates.gamma_pump == doctest::Approx(1.0));
    CHECK(res.records[0].rates.pulse_T == doctest::Approx(0.1));
    CHECK(res.records[1].rates.gamma_pump == doctest::Approx(1.0));
    CHECK(res.records[1].rates.pulse_T == doctest::Approx(0.2));
    CHECK(res.records[2].rates.gamma_pump == doctest::Approx(2.0));
    CHECK(res.records[5].rates.gamma_pump == doctest::Approx(3.0));
    CHECK(res.records[5].rates.pulse_T == doctest::Approx(0.2));
}

TEST_CASE("sweep CSV is byte-identical across worker counts") {
    SweepGrid g;
    g.axes = {{"gamma_F", 0.1, 10.0, 3, true}, {"pulse_T", 0.01, 1.0, 3, true}};
    g.base.gamma_pump = 1.0;
    g.base.gamma_deph = 10.0;
    g.metrics = {"ind", "qy"};

    const SweepResult a = run_sweep(g, 1);
    const SweepResult b = run_sweep(g, 8);
    std::ostringstream sa, sb;
    write_csv(sa, a.records);
    write_csv(sb, b.records);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("gamma_pump,gamma_deph,gamma_f,pulse_T,detuning,ind,"
                        "ind_err,g2_T,g2_T_err,g2_inf,g2_inf_err,qy_ratio,"
                        "qy_err,status,wall_ms") != std::string::npos);
    // zeroed wall clock is part of the determinism contract
    CHECK(sa.str().find(",ok,0\n") != std::string::npos);
}

TEST_CASE("figure presets echo the published fixed parameters") {
    const SweepGrid f1b = figure_preset("fig1b");
    CHECK(f1b.base.gamma_deph == doctest::Approx(10.0));
    CHECK(f1b.base.gamma_pump == doctest::Approx(5.0));
    REQUIRE(f1b.axes.size() == 2);
    CHECK(f1b.axes[0].param == "gamma_F");
    CHECK(f1b.axes[1].param == "pulse_T");
    CHECK(f1b.metrics == std::vector<std::string>{"ind"});

    const SweepGrid f4a = figure_preset("fig4a");
    CHECK(f4a.base.gamma_deph == doctest::Approx(0.0));
    CHECK(f4a.axes[0].param == "gamma_pump");
    CHECK(f4a.metrics == std::vector<std::string>{"g2inf"});

    const SweepGrid f5b = figure_preset("fig5b");
    CHECK(f5b.metrics == std::vector<std::string>{"qy"});
    CHECK(f5b.base.gamma_pump == doctest::Approx(5.0));

    CHECK_THROWS_AS(figure_preset("fig9z"), std::invalid_argument);
    CHECK(figure_preset_ids().size() == 9);
}

TEST_CASE("manifest serializes the full configuration") {
    SweepGrid g;
    g.axes = {{"gamma_F", 0.5, 2.0, 2, true}};
    g.base.gamma_pump = 1.0;
    g.metrics = {"qy"};
    const SweepResult res = run_sweep(g, 2);
    const nlohmann::json j = nlohmann::json::parse(manifest_json(res.manifest));
    CHECK(j["engine_version"] == kEngineVersion);
    CHECK(j["workers"] == 2);
    CHECK(j["configuration"]["axes"].size() == 1);
    CHECK(j["configuration"]["base"]["gamma_pump"] == 1.0);
    CHECK(j["point_status"].size() == 2);
    CHECK(j["point_wall_ms"].size() == 2);
}

TEST_CASE("heatmap needs two axes and embeds a color scale") {
    SweepGrid g;
    g.axes = {{"gamma_F", 0.5, 2.0, 2, true}, {"pulse_T", 0.1, 1.0, 2, true}};
    g.base.gamma_pump = 1.0;
    g.metrics = {"qy"};
    const SweepResult res = run_sweep(g, 1);
    std::ostringstream svg;
    write_heatmap_svg(svg, res, "qy");
    CHECK(svg.str().find("<svg") != std::string::npos);
    CHECK(svg.str().find("qy</text>") != std::string::npos);
    CHECK(svg.str().find("rect") != std::string::npos);

    SweepGrid one = g;
    one.axes.pop_back();
    const SweepResult res1 = run_sweep(one, 1);
    std::ostringstream out;
    CHECK_THROWS_AS(write_heatmap_svg(out, res1, "qy"), std::invalid_argument);
}

TEST_CASE("propagation engine matches the adaptive ODE oracle") {
    std::uint64_t s = 0x12345678ULL;
    const auto next = [&s]() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s % 100000) / 100000.0;
    };
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        RateSet r;
        r.gamma_pump = 0.05 + 10.0 * next();
        r.gamma_deph = 10.0 * next();
        r.pulse_T = 0.05 + 3.0 * next();
        const double t = 4.0 * next();
        worst = std::max(worst, (density_matrix_at(r, t) - ode_oracle(r, t))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("quadrature oracle rejects out-of-budget grids") {
    RateSet r;
    r.gamma_pump = 1.0;
    FilterSpec f;
    CHECK_THROWS_AS(quadrature_oracle("qy", r, f, 3), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_oracle("qy", r, f, 1024), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_oracle("bogus", r, f, 8), std::invalid_argument);
}
