"""The seven figure scenarios.

Figures 1-3 are time series of the concurrence. The time window is chosen to
reach the plateau (25 slowest relaxation times, rounded up) and sampled at
2000 points. Figures 4-7 are asymptotic surfaces.
Grid points with a negative bath temperature (|dT| > 2 TM) are flagged
``unphysical``.
"""

from __future__ import annotations

import math
from dataclasses import replace

from .model import SystemParams, spectrum
from .rates import build_rates
from .sweep import Axis, Scenario, SweepResult, run_scenario

N_TIME_POINTS = 2000
PLATEAU_RELAXATION_TIMES = 25.0

_GAMMA = 0.02
_FIG12 = SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0)
_FIG3 = SystemParams(J=1.0, chi=0.9, B=2.0, b=0.5)
_FIG45 = SystemParams(J=1.0, chi=0.3, B=4.0, b=-3.5)
_FIG6 = SystemParams(J=1.0, chi=0.3, B=4.0, b=0.0)
_FIG7 = SystemParams(J=1.0, chi=0.3, B=4.0, b=1.0)

# D just off the critical value (3.88458 and 3.75366 respectively)
_NEAR_DC = {6: 3.88, 7: 3.75}

FIG3_INITIAL = ("bell-psi", "product-01", "mixed-fig3", "unpolarized")


def _nice_ceil(x: float) -> float:
    """Round up to one significant digit (687 -> 700)."""
    mag = 10.0 ** math.floor(math.log10(x))
    return math.ceil(x / mag - 1e-12) * mag


def plateau_time(scn_params, bath_list) -> float:
    """Time window reaching the plateau for every (params, baths) curve."""
    slowest = math.inf
    for params, baths in zip(scn_params, bath_list):
        r = build_rates(spectrum(params), params, baths)
        slowest = min(slowest, r.X1, r.Y2, r.coherence_decay)
    return _nice_ceil(PLATEAU_RELAXATION_TIMES / slowest)


def _time_axis(base: Scenario, curves) -> Axis:
    params = [base.params.with_(**{k: v for k, v in c.items() if k in ("D", "b", "B", "chi", "J")}) for c in curves]
    baths = [base.baths(**{k: v for k, v in c.items() if k in ("TM", "dT")}) for c in curves]
    return Axis.uniform("t", 0.0, plateau_time(params, baths), N_TIME_POINTS)


def figure_scenario(n: int) -> Scenario:
    """Scenario reproducing figure ``n`` (1..7)."""
    g = dict(gamma1=_GAMMA, gamma2=_GAMMA)
    if n == 1:
        base = Scenario(_FIG12, TM=1.5, dT=0.0, initial=("mixed-01-10",), name="figure 1", **g)
        dT = Axis("dT", (0.0, 1.0, 2.0))
        return replace(base, axes=(dT, _time_axis(base, [{"dT": v} for v in dT.values])))
    if n == 2:
        base = Scenario(_FIG12, TM=1.5, dT=0.5, initial=("mixed-01-10",), name="figure 2", **g)
        TM = Axis("TM", (1.0, 1.5, 2.0))
        return replace(base, axes=(TM, _time_axis(base, [{"TM": v} for v in TM.values])))
    if n == 3:
        base = Scenario(_FIG3, TM=1.0, dT=0.5, initial=FIG3_INITIAL, name="figure 3", **g)
        D = Axis("D", (1.5, 3.0))
        return replace(base, axes=(D, _time_axis(base, [{"D": v} for v in D.values])))
    if n == 4:
        axes = (Axis("dT", (0.0, 1.0, 2.0, 3.0)), Axis.uniform("TM", 0.0, 4.0, 41), Axis.uniform("D", 0.0, 5.0, 51))
        return Scenario(_FIG45, axes=axes, name="figure 4", **g)
    if n == 5:
        axes = (Axis.uniform("dT", -4.0, 4.0, 81), Axis.uniform("D", 0.0, 5.0, 51))
        return Scenario(_FIG45, TM=2.0, axes=axes, name="figure 5", **g)
    if n in (6, 7):
        params = _FIG6 if n == 6 else _FIG7
        axes = (
            Axis("D", (0.0, 1.0, _NEAR_DC[n], 5.0)),
            Axis.uniform("TM", 0.0, 3.0, 31),
            Axis.uniform("dT", -3.0, 3.0, 61),
        )
        return Scenario(params, axes=axes, name=f"figure {n}", **g)
    raise ValueError(f"figure number must be 1..7, got {n!r}")


def run_figure(n: int, workers: int | None = None) -> SweepResult:
    return run_scenario(figure_scenario(n), workers=workers)

