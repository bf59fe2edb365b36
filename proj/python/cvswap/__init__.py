# Copyright 2026 The cvswap Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the cvswap entanglement-swapping model."""

from cvswap._core import *  # noqa: F401,F403
from cvswap._core import (
    AnalyzerAngles,
    ConfigError,
    NoCoincidencesError,
    SwapParams,
    build_swap_circuit,
    ch_s,
)

__all__ = [
    "AnalyzerAngles",
    "ConfigError",
    "NoCoincidencesError",
    "SwapParams",
    "build_swap_circuit",
    "ch_s",
    "teleported_s",
]


def teleported_s(chi1=0.1, chi2=0.0, lam=1.0, eta=1.0, angles=None):
    """S for beams A and D' at the given circuit parameters."""
    circuit = build_swap_circuit(SwapParams(chi1=chi1, chi2=chi2, lam=lam, eta=eta))
    return ch_s(circuit, angles or AnalyzerAngles.maximizing_set()).s
