"""Thermal transition rates and the population generator.

Each qubit j couples to its own flat-spectrum bosonic bath (coupling gamma_j,
temperature T_j). A transition that changes the system energy by ``omega``
happens at

    2 * |a_{j,mu}|**2 * spectral_rate(omega, gamma_j, T_j)

where ``spectral_rate`` is gamma * n(omega) for absorption (omega > 0) and
gamma * (n(|omega|) + 1) for emission (omega < 0). Upward and downward rates
therefore obey detailed balance, ``down / up = exp(|omega| / T)``, and with
both baths at the same temperature the fixed point is the Gibbs state.

Rates ending in ``_plus`` raise the system energy by ``omega1 = xi - eta``
(X1) or ``omega2 = xi + eta`` (Y2); ``_minus`` rates are their reverses. X1
connects {Psi+, Sigma+} and {Psi-, Sigma-}; Y2 connects {Psi+, Sigma-} and
{Psi-, Sigma+}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, ZeroFrequency
from .model import Spectrum, SystemParams


@dataclass(frozen=True)
class BathParams:
    """Couplings and temperatures of the two reservoirs.

    ``gamma1 = gamma2 = 0`` is accepted and describes the closed system; the
    steady-state routines reject it.
    """

    gamma1: float
    gamma2: float
    T1: float
    T2: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "T1", "T2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_mean(cls, TM: float, dT: float, gamma1: float, gamma2: float | None = None):
        """Build from mean temperature ``TM`` and difference ``dT = T1 - T2``."""
        if gamma2 is None:
            gamma2 = gamma1
        T1 = TM + 0.5 * dT
        T2 = TM - 0.5 * dT
        # exact zero rather than -0.0 / 1e-17 leftovers at the edge |dT| = 2 TM
        if abs(T1) < 1e-15:
            T1 = 0.0
        if abs(T2) < 1e-15:
            T2 = 0.0
        return cls(gamma1, gamma2, T1, T2)

    @property
    def TM(self) -> float:
        return 0.5 * (self.T1 + self.T2)

    @property
    def dT(self) -> float:
        return self.T1 - self.T2

    @property
    def closed(self) -> bool:
        return self.gamma1 == 0 and self.gamma2 == 0

    def swapped(self) -> "BathParams":
        return BathParams(self.gamma2, self.gamma1, self.T2, self.T1)


@dataclass(frozen=True)
class RateSet:
    omega1: float
    omega2: float
    a_sq: np.ndarray  # shape (2, 4): bath j, transition mu
    X1_plus: float
    X1_minus: float
    Y2_plus: float
    Y2_minus: float
    generator: np.ndarray

    @property
    def X1(self) -> float:
        return self.X1_plus + self.X1_minus

    @property
    def Y2(self) -> float:
        return self.Y2_plus + self.Y2_minus

    @property
    def coherence_decay(self) -> float:
        """Common decay rate (X1 + Y2) / 2 of rho_12 and rho_34."""
        return 0.5 * (self.X1 + self.Y2)


def bose(omega: float, T: float) -> float:
    """Bose-Einstein occupation for omega > 0; zero at T = 0."""
    if T == 0:
        return 0.0
    x = omega / T
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def spectral_rate(omega: float, gamma: float, T: float) -> float:
    """Bath-induced rate for a system transition of signed energy ``omega``.

    ``omega > 0`` is absorption, ``omega < 0`` emission.
    """
    if omega == 0:
        raise ZeroFrequency("spectral rate requested at omega = 0")
    if omega > 0:
        return gamma * bose(omega, T)
    return gamma * (bose(-omega, T) + 1.0)


def coefficients(spec: Spectrum, params: SystemParams) -> np.ndarray:
    """Squared transition weights |a_{j,mu}|**2 as a (2, 4) array.

    Row ``j-1`` holds bath j; columns are mu = 1..4 (Psi+<-Sigma+,
    Psi+<-Sigma-, Psi-<-Sigma+, Psi-<-Sigma-). They are the squared matrix
    elements of sigma_x on qubit j between the corresponding eigenstates.
    """
    xi, eta = spec.xi, spec.eta
    J, chi, B, b = params.J, params.chi, params.B, params.b
    xe = xi * eta
    if xe <= 0:
        raise DegenerateSpectrum(xi, eta, 0.0)
    out = np.empty((2, 4))
    for j in (1, 2):
        sign = -1.0 if j == 1 else 1.0
        a1 = (xe + J * J * chi + sign * B * b) / (2 * xe)
        a1 = min(max(a1, 0.0), 1.0)
        a2 = 1.0 - a1
        out[j - 1] = (a1, a2, a2, a1)
    out.setflags(write=False)
    return out


def generator_matrix(X1_plus: float, X1_minus: float, Y2_plus: float, Y2_minus: float) -> np.ndarray:
    """4x4 population generator; ``dR/dt = B R`` with R in energy order."""
    return np.array(
        [
            [-(X1_minus + Y2_minus), 0.0, X1_plus, Y2_plus],
            [0.0, -(X1_plus + Y2_plus), Y2_minus, X1_minus],
            [X1_minus, Y2_plus, -(X1_plus + Y2_minus), 0.0],
            [Y2_minus, X1_plus, 0.0, -(X1_minus + Y2_plus)],
        ]
    )


def build_rates(spec: Spectrum, params: SystemParams, baths: BathParams) -> RateSet:
    """All four channel rates and the generator for one parameter point."""
    a_sq = coefficients(spec, params)
    w1 = spec.xi - spec.eta
    w2 = spec.xi + spec.eta
    gammas = (baths.gamma1, baths.gamma2)
    temps = (baths.T1, baths.T2)

    def channel(omega, mu):
        return 2.0 * sum(spectral_rate(omega, gammas[j], temps[j]) * a_sq[j, mu] for j in range(2))

    # X1_plus: Sigma+ -> Psi+ (energy change +omega1); X1_minus the reverse.
    X1p = channel(w1, 0)
    X1m = channel(-w1, 0)
    # Y2_plus: Sigma- -> Psi+ (energy change +omega2); Y2_minus the reverse.
    Y2p = channel(w2, 1)
    Y2m = channel(-w2, 1)
    gen = generator_matrix(X1p, X1m, Y2p, Y2m)
    gen.setflags(write=False)
    return RateSet(w1, w2, a_sq, X1p, X1m, Y2p, Y2m, gen)
