"""Two-qubit anisotropic XY Heisenberg Hamiltonian with a DM term along z.

Conventions used throughout the package:

* hbar = k_B = 1, all quantities dimensionless.
* sigma_z |0> = +|0>, standard basis ordered |00>, |01>, |10>, |11>.
* The energy basis is ordered |Psi+>, |Psi->, |Sigma+>, |Sigma-> with
  energies +xi, -xi, +eta, -eta, whatever the relative size of xi and eta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateSpectrum

#: Relative tolerance on |xi - eta| below which a spectrum is rejected.
DEFAULT_DEGENERACY_TOL = 1e-9

STANDARD_LABELS = ("00", "01", "10", "11")
ENERGY_LABELS = ("Psi+", "Psi-", "Sigma+", "Sigma-")

# standard-basis positions outside the diagonal / anti-diagonal
_OFF_X = np.ones((4, 4), dtype=bool)
_OFF_X[np.arange(4), np.arange(4)] = False
_OFF_X[np.arange(4), 3 - np.arange(4)] = False


def _sign(x: float) -> float:
    return -1.0 if x < 0 else 1.0


@dataclass(frozen=True)
class SystemParams:
    """Hamiltonian parameters.

    Attributes
    ----------
    J : float
        Mean XY coupling, (J_x + J_y) / 2.
    chi : float
        Partial anisotropy (J_x - J_y) / (J_x + J_y), in [-1, 1].
    B : float
        Mean magnetic field along z.
    b : float
        Field inhomogeneity; qubit 1 sees B + b, qubit 2 sees B - b.
    D : float
        Dimensionless DM strength; the DM vector is J*D along z.
    """

    J: float = 1.0
    chi: float = 0.0
    B: float = 0.0
    b: float = 0.0
    D: float = 0.0

    def __post_init__(self):
        for name in ("J", "chi", "B", "b", "D"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not -1.0 <= self.chi <= 1.0:
            raise ValueError(f"chi must lie in [-1, 1], got {self.chi!r}")

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    @property
    def xi(self) -> float:
        return math.sqrt(self.b**2 + self.J**2 + (self.J * self.D) ** 2)

    @property
    def eta(self) -> float:
        return math.sqrt(self.B**2 + (self.J * self.chi) ** 2)


@dataclass(frozen=True)
class Spectrum:
    """Exact eigen-decomposition of the Hamiltonian.

    ``basis`` holds |Psi+>, |Psi->, |Sigma+>, |Sigma-> as columns in the
    standard basis; ``energies`` is ``[xi, -xi, eta, -eta]``.
    """

    xi: float
    eta: float
    energies: np.ndarray
    basis: np.ndarray
    N_plus: float
    N_minus: float
    M_plus: float
    M_minus: float

    @property
    def gap(self) -> float:
        """|xi - eta|, the smallest transition frequency."""
        return abs(self.xi - self.eta)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A 4x4 density matrix tagged with the basis it is written in."""

    data: np.ndarray
    basis: str = "standard"

    def __post_init__(self):
        arr = np.array(self.data, dtype=complex)
        if arr.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {arr.shape}")
        if self.basis not in ("standard", "energy"):
            raise ValueError(f"unknown basis tag {self.basis!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.data
        return self.data.astype(dtype)

    def __getitem__(self, idx):
        return self.data[idx]

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.data + self.data.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def check(self, atol: float = 1e-12, psd_tol: float = 1e-9) -> "DensityMatrix":
        """Raise ``ValueError`` unless Hermitian, unit-trace and PSD."""
        herm_err = np.abs(self.data - self.data.conj().T).max()
        if herm_err > atol:
            raise ValueError(f"not Hermitian (max deviation {herm_err:.3e})")
        tr_err = abs(self.trace - 1.0)
        if tr_err > atol:
            raise ValueError(f"trace differs from 1 by {tr_err:.3e}")
        lam = self.min_eigenvalue()
        if lam < -psd_tol:
            raise ValueError(f"not positive semidefinite (min eigenvalue {lam:.3e})")
        return self

    def is_x_state(self, rtol: float = 1e-10) -> bool:
        return is_x_state(self.data, rtol=rtol)


def as_matrix(rho) -> np.ndarray:
    """Plain complex 4x4 array from a ``DensityMatrix`` or array-like."""
    arr = np.asarray(rho, dtype=complex)
    if arr.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {arr.shape}")
    return arr


def is_x_state(rho, rtol: float = 1e-10) -> bool:
    """True when every entry off the diagonal and anti-diagonal is negligible.

    Negligible means below ``rtol`` times the largest entry of ``rho``.
    """
    arr = as_matrix(rho)
    scale = np.abs(arr).max()
    if scale == 0.0:
        return True
    return bool(np.abs(arr[_OFF_X]).max() < rtol * scale)


def hamiltonian_matrix(params: SystemParams) -> np.ndarray:
    """Hamiltonian in the standard basis."""
    J, chi, B, b, D = params.J, params.chi, params.B, params.b, params.D
    H = np.zeros((4, 4), dtype=complex)
    H[0, 0], H[1, 1], H[2, 2], H[3, 3] = B, b, -b, -B
    H[0, 3] = H[3, 0] = J * chi
    H[1, 2] = J * complex(1.0, D)
    H[2, 1] = J * complex(1.0, -D)
    return H


def _split(r: float, x: float, y2: float) -> tuple[float, float]:
    """Return (r + x, r - x) for r = sqrt(x**2 + y2) without cancellation."""
    if x >= 0:
        big = r + x
        small = y2 / big if big > 0 else 0.0
        return big, small
    big = r - x
    small = y2 / big if big > 0 else 0.0
    return small, big


def spectrum(params: SystemParams, tol: float = DEFAULT_DEGENERACY_TOL) -> Spectrum:
    """Closed-form eigenvalues and eigenvectors.

    Raises
    ------
    DegenerateSpectrum
        If ``|xi - eta| <= tol * max(xi, eta, 1)``.

    Notes
    -----
    Amplitudes are written through magnitudes such as
    ``sqrt((xi + b) / (2 xi))`` instead of the ratio ``(b + xi) / J(1 - iD)``,
    which reproduces the usual closed form exactly whenever it is defined and
    extends continuously to ``J = 0`` (|01>, |10>) and ``chi = 0``
    (|00>, |11>).
    """
    J, chi, B, b, D = params.J, params.chi, params.B, params.b, params.D
    xi, eta = params.xi, params.eta
    if abs(xi - eta) <= tol * max(xi, eta, 1.0):
        raise DegenerateSpectrum(xi, eta, tol * max(xi, eta, 1.0))

    U = np.zeros((4, 4), dtype=complex)

    # Psi sector: span{|01>, |10>}
    if xi > 0:
        xp, xm = _split(xi, b, (J * J) * (1.0 + D * D))
        N_plus = math.sqrt(xm / (2 * xi))
        N_minus = math.sqrt(xp / (2 * xi))
        phase = complex(1.0, D) / math.sqrt(1.0 + D * D) * _sign(J)
        U[1, 0] = N_minus * phase  # sqrt((xi + b)/2xi)
        U[2, 0] = N_plus
        U[1, 1] = -N_plus * phase
        U[2, 1] = N_minus
    else:
        N_plus = N_minus = 1.0
        U[1, 0] = 1.0
        U[2, 1] = 1.0

    # Sigma sector: span{|00>, |11>}
    if eta > 0:
        ep, em = _split(eta, B, (J * chi) ** 2)
        M_plus = math.sqrt(em / (2 * eta))
        M_minus = math.sqrt(ep / (2 * eta))
        s = _sign(J * chi)
        U[0, 2] = M_minus * s  # sqrt((eta + B)/2eta)
        U[3, 2] = M_plus
        U[0, 3] = -M_plus * s
        U[3, 3] = M_minus
    else:
        M_plus = M_minus = 1.0
        U[0, 2] = 1.0
        U[3, 3] = 1.0

    energies = np.array([xi, -xi, eta, -eta])
    energies.setflags(write=False)
    U.setflags(write=False)
    return Spectrum(xi, eta, energies, U, N_plus, N_minus, M_plus, M_minus)


def critical_D(params: SystemParams) -> float | None:
    """DM strength at which xi = eta for the other parameters held fixed.

    ``params.D`` is ignored. Returns ``None`` when no real solution exists.
    """
    J, chi, B, b = params.J, params.chi, params.B, params.b
    if J == 0:
        raise ValueError("critical_D needs J != 0")
    radicand = B * B + (J * chi) ** 2 - b * b - J * J
    if radicand < 0:
        return None
    return math.sqrt(radicand) / abs(J)


def gibbs_state(params: SystemParams, T: float) -> DensityMatrix:
    """Canonical state exp(-H/T)/Z in the standard basis.

    Computed from a numerical ``eigh`` of the Hamiltonian, so it is defined
    at the degenerate point too (except for a degenerate ground level at
    ``T = 0``, where the zero-temperature state is not unique).
    """
    if T < 0 or math.isnan(T):
        raise ValueError(f"temperature must be >= 0, got {T!r}")
    evals, evecs = np.linalg.eigh(hamiltonian_matrix(params))
    if T == 0:
        scale = max(abs(evals[0]), 1.0)
        if evals[1] - evals[0] <= DEFAULT_DEGENERACY_TOL * scale:
            raise DegenerateSpectrum(evals[0], evals[1], DEFAULT_DEGENERACY_TOL * scale)
        v = evecs[:, 0]
        return DensityMatrix(np.outer(v, v.conj()))
    w = np.exp(-(evals - evals[0]) / T)
    w /= w.sum()
    rho = (evecs * w) @ evecs.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))
