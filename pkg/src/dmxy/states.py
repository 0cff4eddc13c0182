"""Named initial states (standard basis)."""

import numpy as np

from .errors import ConfigError


def _proj(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def bell_psi():
    """(|01> + |10>) / sqrt(2)."""
    return _proj([0, 1, 1, 0])


def product_01():
    return _proj([0, 1, 0, 0])


def mixed_fig3():
    """Equal mixture of (|00> + |11>)/sqrt(2) and |01>."""
    return 0.5 * _proj([1, 0, 0, 1]) + 0.5 * _proj([0, 1, 0, 0])


def unpolarized():
    return np.eye(4, dtype=complex) / 4


def classical_01_10():
    """Incoherent half-half mixture of |01> and |10>."""
    return 0.5 * (_proj([0, 1, 0, 0]) + _proj([0, 0, 1, 0]))


def plus_plus():
    """|+>|+>; not an X state, only the oracle can evolve it."""
    return _proj([1, 1, 1, 1])


NAMED_STATES = {
    "bell-psi": bell_psi,
    "product-01": product_01,
    "mixed-fig3": mixed_fig3,
    "unpolarized": unpolarized,
    "mixed-01-10": classical_01_10,
}


def named_state(spec: str) -> np.ndarray:
    """Resolve a state name, or ``explicit:`` followed by 16 row-major entries.

    Entries are parsed with ``complex()``, so ``0.5`` and ``0.25-0.1j`` both
    work. The explicit matrix is checked for Hermiticity, unit trace and
    positivity.
    """
    spec = spec.strip()
    if spec in NAMED_STATES:
        return NAMED_STATES[spec]()
    if spec.startswith("explicit"):
        body = spec[len("explicit"):].lstrip(":").replace(",", " ").split()
        if len(body) != 16:
            raise ConfigError(f"explicit state needs 16 entries, got {len(body)}", field="initial")
        try:
            rho = np.array([complex(x) for x in body]).reshape(4, 4)
        except ValueError as exc:
            raise ConfigError(f"bad explicit entry: {exc}", field="initial") from None
        from .model import DensityMatrix

        try:
            DensityMatrix(rho).check(atol=1e-9)
        except ValueError as exc:
            raise ConfigError(f"explicit state is not a density matrix: {exc}", field="initial") from None
        return rho
    known = ", ".join(NAMED_STATES)
    raise ConfigError(f"unknown initial state {spec!r} (known: {known}, explicit:...)", field="initial")
