"""Scenario files, Cartesian parameter sweeps and CSV output.

Scenario file format
--------------------
One ``key = value`` pair per line; ``#`` starts a comment. Keys::

    name        free text, copied into the CSV header
    J chi B b D                 Hamiltonian parameters (default 1, 0, 0, 0, 0)
    gamma1 gamma2 gamma         bath couplings (``gamma`` sets both)
    TM dT                       mean temperature and T1 - T2
    initial     comma-separated state names (see ``dmxy.states``)
    outputs     comma-separated subset of concurrence, eof, populations, coherences
    tolerance   degeneracy tolerance on |xi - eta|
    axis.NAME   sweep axis; NAME in t, TM, dT, D, b, B, chi, J, gamma1, gamma2

Axis values are ``lo:hi:count`` (uniform, endpoints included), a bracketed
list ``[v1, v2, ...]`` or a single number. Axes are swept in file order, the
first one slowest. With a ``t`` axis every grid point is a time-series value
from the initial state(s); without one the asymptotic state is used and
``initial`` is ignored.
"""

from __future__ import annotations

import itertools
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from ._version import __version__
from .entanglement import concurrence_x_batch, eof
from .errors import ConfigError, DegenerateSpectrum, NotAnXState
from .model import DEFAULT_DEGENERACY_TOL, SystemParams, critical_D, spectrum
from .propagator import NEAR_DEGENERATE_FACTOR, evolve_series, is_near_degenerate, asymptotic_entries
from .rates import BathParams, build_rates
from .states import named_state

AXIS_NAMES = ("t", "TM", "dT", "D", "b", "B", "chi", "J", "gamma1", "gamma2")
OUTPUT_COLUMNS = {
    "concurrence": ("concurrence",),
    "eof": ("eof",),
    "populations": ("rho11", "rho22", "rho33", "rho44"),
    "coherences": ("re_rho14", "im_rho14", "re_rho23", "im_rho23"),
}
FLAG_COLUMNS = ("degenerate", "near_degenerate_warning", "unphysical")

_FLOAT_KEYS = ("J", "chi", "B", "b", "D", "gamma1", "gamma2", "gamma", "TM", "dT", "tolerance")
_KEYS = _FLOAT_KEYS + ("name", "initial", "outputs")
_DEFAULTS = {"J": 1.0, "chi": 0.0, "B": 0.0, "b": 0.0, "D": 0.0, "gamma1": 0.02, "gamma2": 0.02, "TM": 0.0, "dT": 0.0}


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"unknown axis {self.name!r}", field=f"axis.{self.name}")
        if not self.values:
            raise ConfigError("axis has no points", field=f"axis.{self.name}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @classmethod
    def uniform(cls, name: str, lo: float, hi: float, count: int) -> "Axis":
        if count < 1:
            raise ConfigError("count must be >= 1", field=f"axis.{name}")
        if lo > hi:
            raise ConfigError(f"min {lo!r} exceeds max {hi!r}", field=f"axis.{name}")
        return cls(name, tuple(np.linspace(lo, hi, count)) if count > 1 else (lo,))


@dataclass(frozen=True)
class Scenario:
    """Everything needed to produce one CSV.

    ``TM``/``dT`` are kept separately from a ``BathParams`` because sweeps may
    visit points with a negative bath temperature; those rows are flagged
    ``unphysical`` rather than rejected.
    """

    params: SystemParams = field(default_factory=SystemParams)
    gamma1: float = 0.02
    gamma2: float = 0.02
    TM: float = 0.0
    dT: float = 0.0
    initial: tuple = ("bell-psi",)
    axes: tuple = ()
    outputs: tuple = ("concurrence",)
    tolerance: float = DEFAULT_DEGENERACY_TOL
    name: str = "scenario"

    def __post_init__(self):
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate axis")
        for out in self.outputs:
            if out not in OUTPUT_COLUMNS:
                raise ConfigError(f"unknown output {out!r}", field="outputs")
        if not self.outputs:
            raise ConfigError("no outputs requested", field="outputs")
        if not self.tolerance >= 0:
            raise ConfigError("tolerance must be >= 0", field="tolerance")
        if "t" in names and any(v < 0 for v in self.axis("t").values):
            raise ConfigError("times must be >= 0", field="axis.t")
        for s in self.initial:
            named_state(s)

    def axis(self, name):
        for a in self.axes:
            if a.name == name:
                return a
        return None

    @property
    def time_mode(self) -> bool:
        return self.axis("t") is not None

    @property
    def geometry(self) -> str:
        s = self.params.b * self.dT
        return "direct" if s > 0 else "indirect" if s < 0 else "none"

    @property
    def columns(self) -> tuple:
        cols = []
        if self.time_mode and len(self.initial) > 1:
            cols.append("initial")
        cols += [a.name for a in self.axes]
        for out in self.outputs:
            cols += OUTPUT_COLUMNS[out]
        return tuple(cols) + FLAG_COLUMNS

    def baths(self, **overrides) -> BathParams:
        v = {"gamma1": self.gamma1, "gamma2": self.gamma2, "TM": self.TM, "dT": self.dT}
        v.update(overrides)
        return BathParams.from_mean(v["TM"], v["dT"], v["gamma1"], v["gamma2"])

    def critical_D(self):
        try:
            return critical_D(self.params)
        except ValueError:
            return None


# ---------------------------------------------------------------- parsing


def _float(text, line, key):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}", line=line, field=key) from None
    if not math.isfinite(v):
        raise ConfigError("value must be finite", line=line, field=key)
    return v


def _parse_axis(name, text, line):
    key = f"axis.{name}"
    text = text.strip()
    try:
        if text.startswith("["):
            if not text.endswith("]"):
                raise ConfigError("unterminated list", line=line, field=key)
            items = [s for s in text[1:-1].split(",") if s.strip()]
            return Axis(name, tuple(_float(s, line, key) for s in items))
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ConfigError("expected lo:hi:count", line=line, field=key)
            lo, hi = _float(parts[0], line, key), _float(parts[1], line, key)
            try:
                count = int(parts[2])
            except ValueError:
                raise ConfigError(f"count must be an integer, got {parts[2].strip()!r}", line=line, field=key) from None
            return Axis.uniform(name, lo, hi, count)
        return Axis(name, (_float(text, line, key),))
    except ConfigError as exc:
        if exc.line is None:
            raise ConfigError(exc.message, line=line, field=key) from None
        raise


def parse_config(text: str) -> dict:
    """Raw ``{key: (value, line)}`` mapping from scenario-file text."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        if key.startswith("axis."):
            if key[5:] not in AXIS_NAMES:
                raise ConfigError(f"unknown axis {key[5:]!r}", line=lineno, field=key)
        elif key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", line=lineno, field=key)
        if key in raw:
            raise ConfigError(f"duplicate key (first on line {raw[key][1]})", line=lineno, field=key)
        if not value:
            raise ConfigError("empty value", line=lineno, field=key)
        raw[key] = (value, lineno)
    return raw


def build_scenario(raw: dict, overrides: dict | None = None) -> Scenario:
    """Scenario from a parsed file; ``overrides`` (plain values) win."""
    raw = dict(raw)
    for k, v in (overrides or {}).items():
        if v is not None:
            raw[k] = (str(v), None)

    def get(key):
        return raw[key] if key in raw else (None, None)

    vals = dict(_DEFAULTS)
    if "gamma" in raw:
        g = _float(*raw["gamma"], "gamma")
        vals["gamma1"] = vals["gamma2"] = g
    for key in _FLOAT_KEYS:
        if key in raw and key != "gamma":
            vals[key] = _float(*raw[key], key)

    try:
        params = SystemParams(J=vals["J"], chi=vals["chi"], B=vals["B"], b=vals["b"], D=vals["D"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for key in ("gamma1", "gamma2"):
        if vals[key] < 0:
            raise ConfigError("must be >= 0", line=get(key)[1], field=key)

    axes = [_parse_axis(k[5:], v, line) for k, (v, line) in raw.items() if k.startswith("axis.")]
    split = lambda s: tuple(p.strip() for p in s.split(",") if p.strip())
    initial = split(raw["initial"][0]) if "initial" in raw else ("bell-psi",)
    if "initial" in raw and raw["initial"][0].strip().startswith("explicit"):
        initial = (raw["initial"][0].strip(),)
    outputs = split(raw["outputs"][0]) if "outputs" in raw else ("concurrence",)

    try:
        return Scenario(
            params=params,
            gamma1=vals["gamma1"],
            gamma2=vals["gamma2"],
            TM=vals["TM"],
            dT=vals["dT"],
            initial=initial,
            axes=tuple(axes),
            outputs=outputs,
            tolerance=vals.get("tolerance", DEFAULT_DEGENERACY_TOL),
            name=raw["name"][0] if "name" in raw else "scenario",
        )
    except ConfigError as exc:
        line = get(exc.field)[1] if exc.field else None
        if line is not None and exc.line is None:
            raise ConfigError(exc.message, line=line, field=exc.field) from None
        raise


def load_scenario(path, overrides=None) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return build_scenario(parse_config(fh.read()), overrides)


# ---------------------------------------------------------------- evaluation


@dataclass
class SweepResult:
    scenario: Scenario
    columns: tuple
    rows: list  # tuples aligned with ``columns``; None marks an empty cell
    curves: dict = field(default_factory=dict)  # time mode: key -> (params, baths, initial)

    @property
    def all_degenerate(self) -> bool:
        k = self.columns.index("degenerate")
        return bool(self.rows) and all(r[k] for r in self.rows)

    def column(self, name) -> np.ndarray:
        k = self.columns.index(name)
        return np.array([np.nan if r[k] is None else r[k] for r in self.rows], dtype=float)


def _point_inputs(scn: Scenario, values: dict):
    """(params, baths or None) at one grid point; None marks T < 0."""
    sys_keys = {k: values[k] for k in ("J", "chi", "B", "b", "D") if k in values}
    params = scn.params.with_(**sys_keys) if sys_keys else scn.params
    bath_keys = {k: values[k] for k in ("TM", "dT", "gamma1", "gamma2") if k in values}
    try:
        baths = scn.baths(**bath_keys)
    except ValueError:
        baths = None
    return params, baths


def _state_outputs(scn: Scenario, rho: np.ndarray, C: np.ndarray) -> list:
    """Per-row output values for states ``rho`` (n, 4, 4) with concurrences ``C``."""
    cols = []
    for out in scn.outputs:
        if out == "concurrence":
            cols.append(C)
        elif out == "eof":
            cols.append(np.array([eof(c) for c in C]))
        elif out == "populations":
            cols += [rho[:, i, i].real for i in range(4)]
        else:
            cols += [rho[:, 0, 3].real, rho[:, 0, 3].imag, rho[:, 1, 2].real, rho[:, 1, 2].imag]
    return [tuple(float(c[i]) for c in cols) for i in range(len(C))]


def _n_outputs(scn: Scenario) -> int:
    return sum(len(OUTPUT_COLUMNS[o]) for o in scn.outputs)


def _flags(params, baths, tol):
    """(degenerate, near_degenerate) for one point with valid baths."""
    try:
        spec = spectrum(params, tol=tol)
    except DegenerateSpectrum:
        return True, False
    return False, is_near_degenerate(spec, build_rates(spec, params, baths))


def _curve(scn: Scenario, params, baths, init: str, times: np.ndarray):
    """Rows of a single time series at every point of ``times``."""
    n = len(times)
    blank = (None,) * _n_outputs(scn)
    if baths is None:
        return [blank + (0, 0, 1)] * n
    degenerate, near = _flags(params, baths, scn.tolerance)
    if degenerate:
        return [blank + (1, 0, 0)] * n
    rho0 = named_state(init)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rho = evolve_series(rho0, params, baths, times, tol=scn.tolerance, warn=False)
    except NotAnXState:
        from .oracle import IntegratorConfig, integrate

        order = np.argsort(times, kind="stable")
        traj = integrate(rho0, params, baths, IntegratorConfig(times=tuple(times[order])), tol=scn.tolerance)
        rho = np.empty((n, 4, 4), dtype=complex)
        rho[order] = traj.states
        from .entanglement import concurrence_general

        C = np.array([concurrence_general(r).value for r in rho])
    else:
        C = concurrence_x_batch(rho)
    return [vals + (0, int(near), 0) for vals in _state_outputs(scn, rho, C)]


def _asymptotic_rows(scn: Scenario, points: list, workers: int):
    """Rows for asymptotic-mode points given as ``(params, baths)``."""
    m = len(points)
    arr = np.zeros((9, m))
    valid = np.array([b is not None for _, b in points], dtype=bool)
    for q, (p, b) in enumerate(points):
        g1, g2, T1, T2 = (b.gamma1, b.gamma2, b.T1, b.T2) if b is not None else (0.0, 0.0, 0.0, 0.0)
        arr[:, q] = (p.J, p.chi, p.B, p.b, p.D, g1, g2, T1, T2)

    chunks = np.array_split(np.arange(m), max(1, min(workers, m // 2048 + 1)))

    def run(idx):
        return _backend.asym_concurrence_grid(*arr[:, idx], tol=scn.tolerance)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, chunks))
    C = np.concatenate([p[0] for p in parts]) if parts else np.empty(0)
    status = np.concatenate([p[1] for p in parts]) if parts else np.empty(0, dtype=np.int8)
    decay = np.concatenate([p[2] for p in parts]) if parts else np.empty(0)
    gap = np.abs(np.hypot(arr[3], arr[0] * np.sqrt(1 + arr[4] ** 2)) - np.hypot(arr[2], arr[0] * arr[1]))
    near = (status == 0) & (gap < NEAR_DEGENERATE_FACTOR * decay)

    need_state = any(o in ("populations", "coherences") for o in scn.outputs)
    blank = (None,) * _n_outputs(scn)
    rows = []
    for q, (p, b) in enumerate(points):
        if not valid[q]:
            rows.append(blank + (0, 0, 1))
            continue
        if status[q] != 0:
            rows.append(blank + (int(status[q] == 1), 0, 0))
            continue
        rho = np.zeros((1, 4, 4), dtype=complex)
        if need_state:
            e = asymptotic_entries(p, b, tol=scn.tolerance)
            for (i, j), key in (((0, 0), "rho11"), ((1, 1), "rho22"), ((2, 2), "rho33"), ((3, 3), "rho44")):
                rho[0, i, j] = e[key]
            rho[0, 0, 3] = e["rho14"]
            rho[0, 1, 2] = e["rho23"]
        rows.append(_state_outputs(scn, rho, C[q : q + 1])[0] + (0, int(near[q]), 0))
    return rows


def run_scenario(scn: Scenario, workers: int | None = None) -> SweepResult:
    """Evaluate every grid point; rows follow lexicographic axis order."""
    workers = workers or os.cpu_count() or 1
    inits = scn.initial if scn.time_mode else (None,)
    show_init = scn.time_mode and len(scn.initial) > 1
    grid_axes = [a for a in scn.axes if a.name != "t"]
    t_axis = scn.axis("t")
    t_pos = [a.name for a in scn.axes].index("t") if t_axis else None

    rows, curves = [], {}
    if not scn.time_mode:
        combos = list(itertools.product(*[a.values for a in scn.axes]))
        points = [_point_inputs(scn, dict(zip([a.name for a in scn.axes], c))) for c in combos]
        for combo, vals in zip(combos, _asymptotic_rows(scn, points, workers)):
            rows.append(tuple(combo) + vals)
        return SweepResult(scn, scn.columns, rows)

    times = np.array(t_axis.values)
    keys = [(init, combo) for init in inits for combo in itertools.product(*[a.values for a in grid_axes])]

    def job(key):
        init, combo = key
        params, baths = _point_inputs(scn, dict(zip([a.name for a in grid_axes], combo)))
        curves[key] = (params, baths, init)
        return _curve(scn, params, baths, init, times)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        series = dict(zip(keys, pool.map(job, keys)))

    for init in inits:
        for full in itertools.product(*[range(len(a.values)) for a in scn.axes]):
            it = full[t_pos]
            combo = tuple(a.values[i] for a, i in zip(scn.axes, full) if a.name != "t")
            echo = tuple(a.values[i] for a, i in zip(scn.axes, full))
            rows.append(((init,) if show_init else ()) + echo + series[(init, combo)][it])
    return SweepResult(scn, scn.columns, rows, curves)


# ---------------------------------------------------------------- CSV


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return ""
    return format(x + 0.0, ".17g")


def header_lines(scn: Scenario) -> list:
    p = scn.params
    dc = scn.critical_D()
    lines = [
        f"# dmxy {__version__}",
        f"# scenario: {scn.name}",
        "# params: " + " ".join(f"{k}={fmt(v)}" for k, v in
                                (("J", p.J), ("chi", p.chi), ("B", p.B), ("b", p.b), ("D", p.D))),
        "# baths: " + " ".join(f"{k}={fmt(v)}" for k, v in
                               (("gamma1", scn.gamma1), ("gamma2", scn.gamma2), ("TM", scn.TM), ("dT", scn.dT))),
        f"# geometry: {scn.geometry}",
        f"# tolerance: {fmt(scn.tolerance)}",
        f"# D_c: {fmt(dc) if dc is not None else 'none'}",
        f"# mode: {'time series' if scn.time_mode else 'asymptotic'}",
    ]
    if scn.time_mode:
        lines.append(f"# initial: {', '.join(scn.initial)}")
    return lines


def to_csv(result: SweepResult) -> str:
    out = header_lines(result.scenario)
    out.append(",".join(result.columns))
    out += [",".join(fmt(v) for v in row) for row in result.rows]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class VerifyReport:
    checked: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures


def verify(result: SweepResult, fraction: float = 0.01, atol: float = 1e-6) -> VerifyReport:
    """Spot-check every ``1/fraction``-th row against independent computations.

    Time-series rows are re-derived with the RK4 oracle (one integration per
    curve, recorded at the sampled times); asymptotic rows are checked for
    being a valid density matrix annihilated by the full generator. Every
    row's concurrence is also checked to lie in [0, 1].
    """
    from .entanglement import concurrence_general
    from .model import DensityMatrix
    from .oracle import IntegratorConfig, integrate, steady_state_residual
    from .propagator import asymptotic_state

    scn = result.scenario
    cols = result.columns
    step = max(1, int(round(1 / fraction)))
    failures = []
    if "concurrence" in cols:
        c = result.column("concurrence")
        bad = np.flatnonzero(~np.isnan(c) & ((c < 0) | (c > 1)))
        failures += [f"row {i}: concurrence {c[i]!r} outside [0, 1]" for i in bad]

    deg = cols.index("degenerate")
    unph = cols.index("unphysical")
    sample = [i for i in range(0, len(result.rows), step) if not result.rows[i][deg] and not result.rows[i][unph]]
    ci = cols.index("concurrence") if "concurrence" in cols else None

    if not scn.time_mode:
        names = [a.name for a in scn.axes]
        for i in sample:
            row = result.rows[i]
            params, baths = _point_inputs(scn, dict(zip(names, row[: len(names)])))
            rho = asymptotic_state(params, baths, tol=scn.tolerance, warn=False)
            try:
                rho.check(atol=1e-10)
            except ValueError as exc:
                failures.append(f"row {i}: {exc}")
            res = steady_state_residual(params, baths, tol=scn.tolerance)
            if res > 1e-10:
                failures.append(f"row {i}: generator residual {res:.3e}")
            if ci is not None and abs(concurrence_general(rho).value - row[ci]) > 1e-9:
                failures.append(f"row {i}: concurrence mismatch")
        return VerifyReport(len(sample), tuple(failures))

    off = 1 if "initial" in cols else 0
    names = [a.name for a in scn.axes]
    t_k = off + names.index("t")
    by_curve = {}
    for i in sample:
        row = result.rows[i]
        init = row[0] if off else scn.initial[0]
        combo = tuple(v for n, v in zip(names, row[off : off + len(names)]) if n != "t")
        by_curve.setdefault((init, combo), []).append(i)
    for key, idx in by_curve.items():
        params, baths, init = result.curves[key]
        ts = sorted({result.rows[i][t_k] for i in idx})
        traj = integrate(named_state(init), params, baths, IntegratorConfig(times=tuple(ts)), tol=scn.tolerance)
        at = dict(zip(ts, traj.states))
        for i in idx:
            rho = at[result.rows[i][t_k]]
            try:
                DensityMatrix(rho).check(atol=1e-8, psd_tol=1e-8)
            except ValueError as exc:
                failures.append(f"row {i}: {exc}")
            if ci is not None:
                c_ref = concurrence_general(rho).value
                if abs(c_ref - result.rows[i][ci]) > atol:
                    failures.append(f"row {i}: concurrence {result.rows[i][ci]!r} vs oracle {c_ref!r}")
    return VerifyReport(len(sample), tuple(failures))
