# Copyright 2026 The spsfilter Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

spsfilter = pytest.importorskip("spsfilter")


def rates(**kw):
    r = spsfilter.RateSet()
    for k, v in kw.items():
        setattr(r, k, v)
    return r


def test_qy_short_pulse_value():
    r = rates(gamma_pump=5.0, gamma_deph=10.0, pulse_T=0.01)
    f = spsfilter.FilterSpec()
    res = spsfilter.qy_ratio(r, f)
    assert res.value == pytest.approx(2.0 / 13.0, rel=0.01)
    assert res.error < 1e-6


def test_g2_infinity_plateaus():
    r = rates(gamma_pump=10.0, pulse_T=0.01)
    assert spsfilter.g2_infinity(r).value == pytest.approx(4.0, rel=0.01)
    r.gamma_deph = 10.0
    assert spsfilter.g2_infinity(r).value == pytest.approx(4.0 / 11.0, rel=0.01)


def test_indistinguishability_matches_wide_filter_limit():
    r = rates(gamma_pump=0.01, gamma_deph=10.0, pulse_T=1.0)
    f = spsfilter.FilterSpec()
    f.gamma_f = 1e4
    engine = spsfilter.indistinguishability(r, f).value
    limit = spsfilter.analytic_limit("ind_wide_filter", r, f)
    assert engine == pytest.approx(limit, rel=0.02)


def test_run_point_captures_failures():
    r = rates(gamma_pump=0.0, pulse_T=0.5)
    f = spsfilter.FilterSpec()
    rec = spsfilter.run_point(r, f, ["g2inf", "qy"])
    assert "g2inf" in rec["status"]
    assert math.isnan(rec["g2inf"].value)


def test_validation_raises():
    r = rates(gamma_pump=-1.0)
    with pytest.raises(ValueError):
        r.validate()
