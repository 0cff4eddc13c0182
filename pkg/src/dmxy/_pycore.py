"""Numpy implementations of the hot kernels.

Same signatures and results as the compiled ``dmxy._core``; used when the
extension is missing or ``DMXY_PURE_PYTHON=1`` is set.
"""

import numpy as np


def rk4_step_matrix(L, h):
    """RK4 update matrix for ``dY/dt = L @ Y``: one step is ``Y <- P @ Y``.

    For a linear right-hand side the four stages collapse to
    P = I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24, evaluated in Horner form.
    """
    A = h * np.asarray(L, dtype=complex)
    I = np.eye(A.shape[0], dtype=complex)
    return I + A @ (I + A @ (I + A @ (I + A / 4.0) / 3.0) / 2.0)


def rk4_linear(L, Y, h, nsteps):
    """Advance ``Y`` in place by ``nsteps`` RK4 steps of ``dY/dt = L @ Y``."""
    L = np.asarray(L)
    if L.shape[0] != L.shape[1] or Y.shape[0] != L.shape[0]:
        raise ValueError("shape mismatch between L and Y")
    if nsteps <= 0:
        return
    P = rk4_step_matrix(L, h)
    y = Y.copy()
    for _ in range(int(nsteps)):
        y = P @ y
    Y[...] = y


def _bose(w, T):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.where(T > 0, w / np.where(T > 0, T, 1.0), np.inf)
        n = np.where(x > 700.0, 0.0, 1.0 / np.expm1(np.minimum(x, 700.0)))
    return np.where(T > 0, n, 0.0)


def _rate(w, g, T):
    return np.where(w > 0, g * _bose(np.abs(w), T), g * (_bose(np.abs(w), T) + 1.0))


def _split(r, x, y2):
    with np.errstate(divide="ignore", invalid="ignore"):
        big = np.where(x >= 0, r + x, r - x)
        small = np.where(big > 0, y2 / np.where(big > 0, big, 1.0), 0.0)
    return np.where(x >= 0, big, small), np.where(x >= 0, small, big)


def asym_concurrence_grid(J, chi, B, b, D, g1, g2, T1, T2, tol=1e-9):
    """Asymptotic concurrence for arrays of parameter points.

    Returns ``(C, status, decay)``; status 0 = ok, 1 = degenerate spectrum,
    2 = no unique steady state, 3 = negative temperature or coupling. ``decay`` is the coherence decay rate
    (X1 + Y2) / 2. Both float outputs are NaN where status != 0.
    """
    J, chi, B, b, D, g1, g2, T1, T2 = np.broadcast_arrays(
        *[np.asarray(a, dtype=float) for a in (J, chi, B, b, D, g1, g2, T1, T2)]
    )
    xi = np.sqrt(b * b + J * J * (1.0 + D * D))
    eta = np.sqrt(B * B + J * J * chi * chi)
    xe = xi * eta
    scale = np.maximum(np.maximum(xi, eta), 1.0)
    degenerate = (np.abs(xi - eta) <= tol * scale) | (xe <= 0)
    status = np.where(degenerate, 1, 0).astype(np.int8)
    invalid = ~((T1 >= 0) & (T2 >= 0) & (g1 >= 0) & (g2 >= 0))
    status[invalid] = 3
    skip = degenerate | invalid

    with np.errstate(divide="ignore", invalid="ignore"):
        safe_xe = np.where(skip, 1.0, xe)
        w1 = np.where(skip, 1.0, xi - eta)
        w2 = xi + eta
        a11 = np.clip((xe + J * J * chi - B * b) / (2 * safe_xe), 0.0, 1.0)
        a21 = np.clip((xe + J * J * chi + B * b) / (2 * safe_xe), 0.0, 1.0)
        a12, a22 = 1.0 - a11, 1.0 - a21
        X1p = 2 * (_rate(w1, g1, T1) * a11 + _rate(w1, g2, T2) * a21)
        X1m = 2 * (_rate(-w1, g1, T1) * a11 + _rate(-w1, g2, T2) * a21)
        Y2p = 2 * (_rate(w2, g1, T1) * a12 + _rate(w2, g2, T2) * a22)
        Y2m = 2 * (_rate(-w2, g1, T1) * a12 + _rate(-w2, g2, T2) * a22)
        X1, Y2 = X1p + X1m, Y2p + Y2m
        stuck = ~skip & ((X1 <= 0) | (Y2 <= 0))
        status[stuck] = 2
        norm = np.where(status == 0, X1 * Y2, 1.0)
        p1, p2 = X1p * Y2p / norm, X1m * Y2m / norm
        p3, p4 = X1m * Y2p / norm, X1p * Y2m / norm
        xp, xm = _split(xi, b, J * J * (1.0 + D * D))
        ep, em = _split(eta, B, J * J * chi * chi)
        r11 = (ep * p3 + em * p4) / (2 * eta)
        r44 = (em * p3 + ep * p4) / (2 * eta)
        r14 = np.abs(J * chi * (p3 - p4)) / (2 * eta)
        r22 = (xp * p1 + xm * p2) / (2 * xi)
        r33 = (xm * p1 + xp * p2) / (2 * xi)
        r23 = np.abs(J) * np.sqrt(1.0 + D * D) * np.abs(p1 - p2) / (2 * xi)
        c = 2 * np.maximum(r14 - np.sqrt(r22 * r33), r23 - np.sqrt(r11 * r44))
    c = np.clip(c, 0.0, 1.0)
    c = np.where(status == 0, c, np.nan)
    decay = np.where(status == 0, 0.5 * (X1 + Y2), np.nan)
    return c, status, decay
