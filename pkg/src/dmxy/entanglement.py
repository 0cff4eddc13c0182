"""Two-qubit concurrence and entanglement of formation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotAnXState
from .model import DEFAULT_DEGENERACY_TOL, SystemParams, as_matrix, is_x_state
from .propagator import asymptotic_state
from .rates import BathParams

_SY = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(_SY, _SY)

# eigenvalues of rho below this (relative to the largest) count as zero
_RANK_CUTOFF = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    lambdas: tuple[float, float, float, float]

    def __float__(self):
        return self.value


def _from_lambdas(lam) -> ConcurrenceResult:
    lam = sorted((max(float(x), 0.0) for x in lam), reverse=True)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return ConcurrenceResult(min(max(c, 0.0), 1.0), tuple(lam))


def concurrence_general(rho) -> ConcurrenceResult:
    """Wootters concurrence of an arbitrary two-qubit state.

    The lambdas (square roots of the spectrum of rho * rho_tilde) are taken
    as the singular values of ``W.T @ (sy x sy) @ W`` with ``rho = W W^dag``.
    This avoids the square root of round-off eigenvalues of the non-Hermitian
    product, which would otherwise leave errors of order 1e-8 on rank
    deficient states.
    """
    arr = as_matrix(rho)
    arr = 0.5 * (arr + arr.conj().T)
    evals, evecs = np.linalg.eigh(arr)
    evals = np.where(evals > _RANK_CUTOFF * max(evals[-1], 0.0), evals, 0.0)
    W = evecs * np.sqrt(evals)
    tau = W.T @ SPIN_FLIP @ W
    return _from_lambdas(np.linalg.svd(tau, compute_uv=False))


def concurrence_x(rho, rtol: float = 1e-10) -> ConcurrenceResult:
    """Concurrence of an X state from its six independent entries."""
    arr = as_matrix(rho)
    if not is_x_state(arr, rtol=rtol):
        raise NotAnXState("concurrence_x needs an X state")
    outer = math.sqrt(max(arr[0, 0].real * arr[3, 3].real, 0.0))
    inner = math.sqrt(max(arr[1, 1].real * arr[2, 2].real, 0.0))
    r14, r23 = abs(arr[0, 3]), abs(arr[1, 2])
    return _from_lambdas(
        (abs(outer + r14), abs(outer - r14), abs(inner + r23), abs(inner - r23))
    )


def concurrence_x_batch(rhos) -> np.ndarray:
    """Concurrence of a stack of X states, shape (n, 4, 4) -> (n,).

    No X-pattern check; entries off the X are ignored.
    """
    r = np.asarray(rhos)
    outer = np.sqrt(np.clip(r[:, 0, 0].real * r[:, 3, 3].real, 0.0, None))
    inner = np.sqrt(np.clip(r[:, 1, 1].real * r[:, 2, 2].real, 0.0, None))
    r14, r23 = np.abs(r[:, 0, 3]), np.abs(r[:, 1, 2])
    c = 2.0 * np.maximum(r14 - inner, r23 - outer)
    return np.clip(c, 0.0, 1.0)


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def eof(C: float) -> float:
    """Entanglement of formation for concurrence ``C``."""
    C = float(C)
    if not 0.0 <= C <= 1.0:
        raise ValueError(f"concurrence must lie in [0, 1], got {C!r}")
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - C * C)))


def asymptotic_concurrence(params: SystemParams, baths: BathParams, *, tol=DEFAULT_DEGENERACY_TOL) -> ConcurrenceResult:
    return concurrence_x(asymptotic_state(params, baths, tol=tol))


def critical_mean_temperature(params: SystemParams, dT: float = 0.0, gamma1: float = 0.02, gamma2=None,
                              lo: float | None = None, hi: float = 100.0, xtol: float = 1e-10, *,
                              tol=DEFAULT_DEGENERACY_TOL) -> float:
    """Mean temperature above which the asymptotic concurrence vanishes.

    Bisection on the sign of C between ``lo`` (entangled; defaults to the
    smallest physical mean temperature |dT|/2) and ``hi`` (separable). With
    several zero crossings in between, one of them is returned.

    Raises
    ------
    ValueError
        If C is not positive at ``lo`` or not zero at ``hi``.
    """
    import warnings

    from .errors import NearDegenerateWarning

    lo = abs(dT) / 2 if lo is None else lo

    def entangled(TM):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearDegenerateWarning)
            return asymptotic_concurrence(params, BathParams.from_mean(TM, dT, gamma1, gamma2), tol=tol).value > 0

    if not entangled(lo):
        raise ValueError(f"no entanglement at the lower bracket T_M = {lo!r}")
    if entangled(hi):
        raise ValueError(f"still entangled at the upper bracket T_M = {hi!r}")
    while hi - lo > xtol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if entangled(mid) else (lo, mid)
    return 0.5 * (lo + hi)
