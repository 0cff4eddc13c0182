"""Closed-form dynamics of X states.

In the energy basis an X state splits into a population vector and the two
coherences rho_12 (Psi+/Psi-) and rho_34 (Sigma+/Sigma-). Populations evolve
under the rate generator, coherences rotate and decay at the common rate
(X1 + Y2) / 2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NearDegenerateWarning, NotAnXState, NoUniqueSteadyState
from .model import (
    DEFAULT_DEGENERACY_TOL,
    DensityMatrix,
    Spectrum,
    SystemParams,
    as_matrix,
    is_x_state,
    spectrum,
)
from .rates import BathParams, RateSet, build_rates

#: results carry a warning when |xi - eta| < factor * (X1 + Y2) / 2
NEAR_DEGENERATE_FACTOR = 1.0

# energy level -> (X1 label, Y2 label); +1 marks the "upper" side of a channel
_X_OF = np.array([1, -1, -1, 1])
_Y_OF = np.array([1, -1, 1, -1])


@dataclass(frozen=True)
class XStateEnergy:
    """Energy-basis content of an X state."""

    pops: np.ndarray
    c12: complex
    c34: complex

    @classmethod
    def from_matrix(cls, rho_e) -> "XStateEnergy":
        arr = as_matrix(rho_e)
        return cls(arr.diagonal().real.copy(), complex(arr[0, 1]), complex(arr[2, 3]))

    def to_matrix(self) -> np.ndarray:
        out = np.diag(self.pops.astype(complex))
        out[0, 1] = self.c12
        out[1, 0] = np.conj(self.c12)
        out[2, 3] = self.c34
        out[3, 2] = np.conj(self.c34)
        return out


def _two_level(up: float, down: float, t):
    """Transition matrix entries of a two-state jump process.

    Returns ``(P[up|up], P[up|down], P[down|up], P[down|down])`` where ``up``
    is the rate into the upper state and ``down`` the rate out of it.
    """
    total = up + down
    t = np.asarray(t, dtype=float)
    if total == 0:
        one, zero = np.ones_like(t), np.zeros_like(t)
        return one, zero, zero, one
    pu, pd = up / total, down / total
    decay = np.exp(-total * t)
    gain = -np.expm1(-total * t)
    return pu + pd * decay, pu * gain, pd * gain, pd + pu * decay


def population_propagator(rates: RateSet, t) -> np.ndarray:
    """exp(t B) for the population generator, in closed form.

    The generator is the sum of two independent two-state processes, one per
    channel (X1: rate ``X1_plus`` into the upper side, Y2 likewise), so
    ``M[i, j]`` factorises into one transition probability per channel.
    ``t`` may be a scalar or an array; array input gives shape ``t.shape +
    (4, 4)``.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("time must be >= 0")
    px = _two_level(rates.X1_plus, rates.X1_minus, t_arr)
    py = _two_level(rates.Y2_plus, rates.Y2_minus, t_arr)

    def pick(p, to, frm):
        # p = (uu, ud, du, dd) with first letter the target side
        if to > 0:
            return p[0] if frm > 0 else p[1]
        return p[2] if frm > 0 else p[3]

    M = np.empty(t_arr.shape + (4, 4))
    for i in range(4):
        for j in range(4):
            M[..., i, j] = pick(px, _X_OF[i], _X_OF[j]) * pick(py, _Y_OF[i], _Y_OF[j])
    return M


def to_energy_basis(rho, spec: Spectrum) -> DensityMatrix:
    U = spec.basis
    return DensityMatrix(U.conj().T @ as_matrix(rho) @ U, basis="energy")


def to_standard_basis(rho_e, spec: Spectrum) -> DensityMatrix:
    U = spec.basis
    return DensityMatrix(U @ as_matrix(rho_e) @ U.conj().T, basis="standard")


def is_near_degenerate(spec: Spectrum, rates: RateSet) -> bool:
    """Gap |xi - eta| within ``NEAR_DEGENERATE_FACTOR`` coherence-decay rates."""
    return spec.gap < NEAR_DEGENERATE_FACTOR * rates.coherence_decay


def _prepare(params, baths, tol, warn=True):
    spec = spectrum(params, tol=tol)
    rates = build_rates(spec, params, baths)
    if warn and is_near_degenerate(spec, rates):
        warnings.warn(
            f"|xi - eta| = {spec.gap:.3g} is within {NEAR_DEGENERATE_FACTOR:g}x the "
            "dissipative rates; the secular solution is unreliable here",
            NearDegenerateWarning,
            stacklevel=3,
        )
    return spec, rates


def _x_energy_state(rho0, spec):
    arr = as_matrix(rho0)
    if not is_x_state(arr):
        raise NotAnXState("initial state has weight outside the X pattern; use dmxy.oracle.integrate")
    return XStateEnergy.from_matrix(to_energy_basis(arr, spec))


def evolve_series(rho0, params: SystemParams, baths: BathParams, times, *, tol=DEFAULT_DEGENERACY_TOL, warn=True) -> np.ndarray:
    """Standard-basis states at each time in ``times``, shape (n, 4, 4)."""
    spec, rates = _prepare(params, baths, tol, warn)
    x0 = _x_energy_state(rho0, spec)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    M = population_propagator(rates, times)
    pops = M @ x0.pops
    damp = np.exp(-rates.coherence_decay * times)
    c12 = x0.c12 * np.exp(-2j * spec.xi * times) * damp
    c34 = x0.c34 * np.exp(-2j * spec.eta * times) * damp

    rho_e = np.zeros((times.size, 4, 4), dtype=complex)
    idx = np.arange(4)
    rho_e[:, idx, idx] = pops
    rho_e[:, 0, 1] = c12
    rho_e[:, 1, 0] = c12.conj()
    rho_e[:, 2, 3] = c34
    rho_e[:, 3, 2] = c34.conj()
    U = spec.basis
    out = U @ rho_e @ U.conj().T
    out[times == 0] = as_matrix(rho0)
    return out


def evolve(rho0, params: SystemParams, baths: BathParams, t: float, *, tol=DEFAULT_DEGENERACY_TOL) -> DensityMatrix:
    """Exact state at time ``t`` from an X-state ``rho0`` (standard basis).

    Raises
    ------
    NotAnXState
        If ``rho0`` has entries off the diagonal / anti-diagonal.
    DegenerateSpectrum
        At the xi = eta point.
    """
    if t < 0:
        raise ValueError("time must be >= 0")
    if t == 0:
        spec, _ = _prepare(params, baths, tol)
        _x_energy_state(rho0, spec)
        return DensityMatrix(as_matrix(rho0))
    return DensityMatrix(evolve_series(rho0, params, baths, [t], tol=tol)[0])


def steady_populations(rates: RateSet) -> np.ndarray:
    """Energy-basis fixed point of the population dynamics."""
    X1, Y2 = rates.X1, rates.Y2
    if X1 <= 0 or Y2 <= 0:
        raise NoUniqueSteadyState(f"X1 = {X1!r}, Y2 = {Y2!r}; both channels must relax")
    return np.array(
        [
            rates.X1_plus * rates.Y2_plus,
            rates.X1_minus * rates.Y2_minus,
            rates.X1_minus * rates.Y2_plus,
            rates.X1_plus * rates.Y2_minus,
        ]
    ) / (X1 * Y2)


def asymptotic_state(params: SystemParams, baths: BathParams, *, tol=DEFAULT_DEGENERACY_TOL, warn=True) -> DensityMatrix:
    """Long-time state, independent of the initial condition (standard basis)."""
    spec, rates = _prepare(params, baths, tol, warn)
    rho_e = np.diag(steady_populations(rates).astype(complex))
    return to_standard_basis(rho_e, spec)


def asymptotic_entries(params: SystemParams, baths: BathParams, *, tol=DEFAULT_DEGENERACY_TOL) -> dict:
    """The six independent standard-basis entries of the asymptotic state.

    Keys ``rho11, rho14, rho22, rho23, rho33, rho44``; evaluated directly from
    the rates without forming the eigenbasis.
    """
    spec, rates = _prepare(params, baths, tol, warn=False)
    xi, eta = spec.xi, spec.eta
    J, chi, B, b, D = params.J, params.chi, params.B, params.b, params.D
    p1, p2, p3, p4 = steady_populations(rates)
    return {
        "rho11": ((eta + B) * p3 + (eta - B) * p4) / (2 * eta),
        "rho14": J * chi * (p3 - p4) / (2 * eta),
        "rho22": ((xi + b) * p1 + (xi - b) * p2) / (2 * xi),
        "rho23": J * complex(1.0, D) * (p1 - p2) / (2 * xi),
        "rho33": ((xi - b) * p1 + (xi + b) * p2) / (2 * xi),
        "rho44": ((eta - B) * p3 + (eta + B) * p4) / (2 * eta),
    }
