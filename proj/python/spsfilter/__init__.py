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

"""Metrics for a spectrally filtered, incoherently pumped two-level
single-photon source. Rates are quoted in units of the radiative decay."""

from ._core import (
    DegenerateInputError,
    FilterSpec,
    MetricResult,
    RateSet,
    __version__,
    analytic_limit,
    g2_detector_window,
    g2_filtered_at_T,
    g2_infinity,
    indistinguishability,
    qy_ratio,
    run_point,
    selftest,
)

__all__ = [
    "DegenerateInputError",
    "FilterSpec",
    "MetricResult",
    "RateSet",
    "__version__",
    "analytic_limit",
    "g2_detector_window",
    "g2_filtered_at_T",
    "g2_infinity",
    "indistinguishability",
    "qy_ratio",
    "run_point",
    "selftest",
]
