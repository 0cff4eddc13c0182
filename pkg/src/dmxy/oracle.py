"""Brute-force integration of the full master equation.

The generator is assembled as a 16x16 superoperator from the jump operators
V_{j,mu} = a_{j,mu} |e_k><e_l| and integrated with fixed-step RK4. It shares
only the eigenbasis, the weights |a_{j,mu}|**2 and ``spectral_rate`` with the
closed-form path; the population generator and the exponential solution are
not used here, so agreement between the two is a real check.

Vectorisation is column stacking: ``vec(A @ rho @ B) = kron(B.T, A) @ vec(rho)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import StepSizeTooLarge
from .model import DEFAULT_DEGENERACY_TOL, Spectrum, SystemParams, as_matrix, hamiltonian_matrix, spectrum
from .propagator import asymptotic_state
from .rates import BathParams, build_rates, coefficients, spectral_rate

log = logging.getLogger(__name__)

# (k, l) energy-level pairs of V_mu = |e_k><e_l|, mu = 1..4
TRANSITIONS = ((0, 2), (0, 3), (1, 2), (1, 3))

_I4 = np.eye(4)


def vec(rho) -> np.ndarray:
    return as_matrix(rho).reshape(16, order="F")


def unvec(v) -> np.ndarray:
    return np.asarray(v).reshape(4, 4, order="F")


def _dissipator(V, rate):
    """Superoperator of rate * (2 V rho V^dag - {V^dag V, rho})."""
    VdV = V.conj().T @ V
    return rate * (2.0 * np.kron(V.conj(), V) - np.kron(_I4, VdV) - np.kron(VdV.T, _I4))


def jump_operators(spec: Spectrum, params: SystemParams, phases=None):
    """V_{j,mu} in the standard basis as an array of shape (2, 4, 4, 4).

    ``phases`` (shape (2, 4), radians) multiplies each amplitude by
    exp(i*phase); the generator does not depend on it.
    """
    amp = np.sqrt(coefficients(spec, params)).astype(complex)
    if phases is not None:
        amp = amp * np.exp(1j * np.asarray(phases, dtype=float))
    U = spec.basis
    V = np.empty((2, 4, 4, 4), dtype=complex)
    for j in range(2):
        for mu, (k, l) in enumerate(TRANSITIONS):
            V[j, mu] = amp[j, mu] * np.outer(U[:, k], U[:, l].conj())
    return V


def build_dissipator_superoperator(spec: Spectrum, params: SystemParams, baths: BathParams, phases=None) -> np.ndarray:
    """Full right-hand side ``-i[H, .] + L_1 + L_2`` as a 16x16 matrix."""
    H = hamiltonian_matrix(params)
    L = -1j * (np.kron(_I4, H) - np.kron(H.T, _I4))
    V = jump_operators(spec, params, phases)
    omegas = [spec.energies[k] - spec.energies[l] for k, l in TRANSITIONS]
    gammas = (baths.gamma1, baths.gamma2)
    temps = (baths.T1, baths.T2)
    for j in range(2):
        if gammas[j] == 0:
            continue
        for mu, w in enumerate(omegas):
            Vjm = V[j, mu]
            # V raises the energy by w, V^dag lowers it by w
            L = L + _dissipator(Vjm, spectral_rate(w, gammas[j], temps[j]))
            L = L + _dissipator(Vjm.conj().T, spectral_rate(-w, gammas[j], temps[j]))
    return L


def liouvillian(params: SystemParams, baths: BathParams, tol=DEFAULT_DEGENERACY_TOL) -> np.ndarray:
    return build_dissipator_superoperator(spectrum(params, tol=tol), params, baths)


def steady_state_residual(params: SystemParams, baths: BathParams, tol=DEFAULT_DEGENERACY_TOL) -> float:
    """2-norm of the generator applied to the closed-form asymptotic state."""
    L = liouvillian(params, baths, tol=tol)
    return float(np.linalg.norm(L @ vec(asymptotic_state(params, baths, tol=tol, warn=False))))


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings.

    ``dt = None`` picks ``0.01 / max(xi, eta, X1, Y2)``. When ``times`` is
    given the trajectory is recorded exactly there (each segment is split
    into equal steps no longer than ``dt``) and ``t_end``/``stride`` are
    ignored; otherwise every ``stride``-th step up to ``t_end`` is kept.
    """

    t_end: float = 0.0
    dt: float | None = None
    stride: int = 1
    times: tuple | None = None
    method: str = "rk4"

    def __post_init__(self):
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be > 0")
        if self.t_end < 0:
            raise ValueError("t_end must be >= 0")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.times is not None:
            ts = tuple(float(t) for t in self.times)
            if any(t < 0 for t in ts) or any(b < a for a, b in zip(ts, ts[1:])):
                raise ValueError("times must be nonnegative and sorted")
            object.__setattr__(self, "times", ts)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 4, 4), re-Hermitised and trace-normalised
    trace_drift: np.ndarray  # |tr(rho) - 1| before renormalisation
    hermiticity_drift: np.ndarray  # max |rho - rho^dag| / 2 before symmetrising
    dt: float


def default_dt(params: SystemParams, baths: BathParams, tol=DEFAULT_DEGENERACY_TOL) -> float:
    spec = spectrum(params, tol=tol)
    rates = build_rates(spec, params, baths)
    return 0.01 / max(spec.xi, spec.eta, rates.X1, rates.Y2)


def _schedule(config: IntegratorConfig, dt: float):
    """List of (n_steps, step) segments, each ending at a recorded time."""
    if config.times is not None:
        segs, t = [], 0.0
        for target in config.times:
            span = target - t
            n = math.ceil(span / dt - 1e-12) if span > 0 else 0
            segs.append((n, span / n if n else 0.0))
            t = target
        return segs
    total = math.ceil(config.t_end / dt - 1e-12) if config.t_end > 0 else 0
    h = config.t_end / total if total else 0.0
    segs = [(0, 0.0)]
    done = 0
    while done < total:
        n = min(config.stride, total - done)
        segs.append((n, h))
        done += n
    return segs


def integrate_many(rhos, params: SystemParams, baths: BathParams, config: IntegratorConfig, *, tol=DEFAULT_DEGENERACY_TOL):
    """Integrate several initial states together; returns one Trajectory each."""
    spec = spectrum(params, tol=tol)
    L = np.ascontiguousarray(build_dissipator_superoperator(spec, params, baths))
    dt = config.dt if config.dt is not None else default_dt(params, baths, tol)
    Y = np.ascontiguousarray(np.stack([vec(r) for r in rhos], axis=1))

    times, raw = [], []
    t = 0.0
    for n, h in _schedule(config, dt):
        if n:
            _backend.rk4_linear(L, Y, h, n)
        t += n * h
        times.append(t)
        raw.append(Y.copy())
    if config.times is not None:
        times = list(config.times)

    out = []
    for c in range(Y.shape[1]):
        states = np.array([unvec(y[:, c]) for y in raw])
        herm = 0.5 * np.abs(states - states.conj().transpose(0, 2, 1)).max(axis=(1, 2))
        tr = np.trace(states, axis1=1, axis2=2)
        states = 0.5 * (states + states.conj().transpose(0, 2, 1)) / tr.real[:, None, None]
        drift = np.abs(tr - 1.0)
        log.debug("trajectory %d: max trace drift %.3e, max hermiticity drift %.3e", c, drift.max(), herm.max())
        lam = np.linalg.eigvalsh(states)[:, 0]
        if lam.min() < -1e-6:
            bad = int(np.argmin(lam))
            raise StepSizeTooLarge(
                f"state at t={times[bad]:.6g} has eigenvalue {lam[bad]:.3e}; reduce dt (now {dt:.3g})"
            )
        out.append(Trajectory(np.array(times), states, drift, herm, dt))
    return out


def integrate(rho0, params: SystemParams, baths: BathParams, config: IntegratorConfig, *, tol=DEFAULT_DEGENERACY_TOL) -> Trajectory:
    """RK4 trajectory of the master equation from any initial state."""
    return integrate_many([rho0], params, baths, config, tol=tol)[0]
