# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; ``dmxy._pycore`` is the reference numpy version."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, expm1

cnp.import_array()

ctypedef double complex cplx


def rk4_step_matrix(L, double h):
    """RK4 update matrix for ``dY/dt = L @ Y``: one step is ``Y <- P @ Y``.

    For a linear right-hand side the four stages collapse to
    P = I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24, evaluated in Horner form.
    """
    A = h * np.asarray(L, dtype=np.complex128)
    I = np.eye(A.shape[0], dtype=np.complex128)
    return np.ascontiguousarray(I + A @ (I + A @ (I + A @ (I + A / 4.0) / 3.0) / 2.0))


def rk4_linear(const cplx[:, ::1] L, cplx[:, ::1] Y, double h, long nsteps):
    """Advance ``Y`` in place by ``nsteps`` RK4 steps of ``dY/dt = L @ Y``."""
    cdef Py_ssize_t n = L.shape[0], k = Y.shape[1]
    cdef Py_ssize_t i, j, c, s
    cdef double ar, ai, yr, yi
    if L.shape[1] != n or Y.shape[0] != n:
        raise ValueError("shape mismatch between L and Y")
    if nsteps <= 0:
        return
    P = rk4_step_matrix(np.asarray(L), h)
    cdef double[:, ::1] Pr = np.ascontiguousarray(P.real)
    cdef double[:, ::1] Pi = np.ascontiguousarray(P.imag)
    # one column at a time, split into real and imaginary parts
    cdef double[::1] ur = np.empty(n), ui = np.empty(n)
    cdef double[::1] vr = np.empty(n), vi = np.empty(n)
    with nogil:
        for c in range(k):
            for i in range(n):
                ur[i] = Y[i, c].real
                ui[i] = Y[i, c].imag
            for s in range(nsteps):
                for i in range(n):
                    ar = 0.0
                    ai = 0.0
                    for j in range(n):
                        yr = ur[j]
                        yi = ui[j]
                        ar = ar + Pr[i, j] * yr - Pi[i, j] * yi
                        ai = ai + Pr[i, j] * yi + Pi[i, j] * yr
                    vr[i] = ar
                    vi[i] = ai
                for i in range(n):
                    ur[i] = vr[i]
                    ui[i] = vi[i]
            for i in range(n):
                Y[i, c] = ur[i] + 1j * ui[i]


cdef inline double _bose(double w, double T) nogil:
    if T == 0.0:
        return 0.0
    cdef double x = w / T
    if x > 700.0:
        return 0.0
    return 1.0 / expm1(x)


cdef inline double _rate(double w, double g, double T) nogil:
    if w > 0:
        return g * _bose(w, T)
    return g * (_bose(-w, T) + 1.0)


cdef inline void _split(double r, double x, double y2, double *plus, double *minus) nogil:
    # r +/- x for r = sqrt(x^2 + y2), cancellation-free
    cdef double big
    if x >= 0:
        big = r + x
        plus[0] = big
        minus[0] = y2 / big if big > 0 else 0.0
    else:
        big = r - x
        minus[0] = big
        plus[0] = y2 / big if big > 0 else 0.0


cdef inline double _clamp01(double x) nogil:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


def asym_concurrence_grid(J, chi, B, b, D, g1, g2, T1, T2, double tol=1e-9):
    """Asymptotic concurrence for arrays of parameter points.

    Returns ``(C, status, decay)``; status 0 = ok, 1 = degenerate spectrum,
    2 = no unique steady state, 3 = negative temperature or coupling. ``decay`` is the coherence decay rate
    (X1 + Y2) / 2. Both float outputs are NaN where status != 0.
    """
    arrs = np.broadcast_arrays(*[np.asarray(a, dtype=np.float64) for a in (J, chi, B, b, D, g1, g2, T1, T2)])
    shape = arrs[0].shape
    cdef double[::1] vJ = np.ascontiguousarray(arrs[0]).ravel()
    cdef double[::1] vchi = np.ascontiguousarray(arrs[1]).ravel()
    cdef double[::1] vB = np.ascontiguousarray(arrs[2]).ravel()
    cdef double[::1] vb = np.ascontiguousarray(arrs[3]).ravel()
    cdef double[::1] vD = np.ascontiguousarray(arrs[4]).ravel()
    cdef double[::1] vg1 = np.ascontiguousarray(arrs[5]).ravel()
    cdef double[::1] vg2 = np.ascontiguousarray(arrs[6]).ravel()
    cdef double[::1] vT1 = np.ascontiguousarray(arrs[7]).ravel()
    cdef double[::1] vT2 = np.ascontiguousarray(arrs[8]).ravel()
    cdef Py_ssize_t m = vJ.shape[0], q
    out_c = np.empty(m, dtype=np.float64)
    out_s = np.zeros(m, dtype=np.int8)
    out_g = np.empty(m, dtype=np.float64)
    cdef double[::1] C = out_c
    cdef double[::1] G = out_g
    cdef signed char[::1] st = out_s
    cdef double Jq, chiq, Bq, bq, Dq, xi, eta, xe, w1, w2, a11, a12, a21, a22
    cdef double X1p, X1m, Y2p, Y2m, X1, Y2, p1, p2, p3, p4
    cdef double xp, xm, ep, em, r11, r14, r22, r23, r33, r44, c1, c2, c, scale
    with nogil:
        for q in range(m):
            Jq = vJ[q]; chiq = vchi[q]; Bq = vB[q]; bq = vb[q]; Dq = vD[q]
            if not (vT1[q] >= 0.0 and vT2[q] >= 0.0 and vg1[q] >= 0.0 and vg2[q] >= 0.0):
                st[q] = 3
                C[q] = 0.0
                G[q] = 0.0
                continue
            xi = sqrt(bq * bq + Jq * Jq * (1.0 + Dq * Dq))
            eta = sqrt(Bq * Bq + Jq * Jq * chiq * chiq)
            scale = xi if xi > eta else eta
            if scale < 1.0:
                scale = 1.0
            xe = xi * eta
            if fabs(xi - eta) <= tol * scale or xe <= 0.0:
                st[q] = 1
                C[q] = 0.0
                G[q] = 0.0
                continue
            w1 = xi - eta
            w2 = xi + eta
            a11 = _clamp01((xe + Jq * Jq * chiq - Bq * bq) / (2.0 * xe))
            a21 = _clamp01((xe + Jq * Jq * chiq + Bq * bq) / (2.0 * xe))
            a12 = 1.0 - a11
            a22 = 1.0 - a21
            X1p = 2.0 * (_rate(w1, vg1[q], vT1[q]) * a11 + _rate(w1, vg2[q], vT2[q]) * a21)
            X1m = 2.0 * (_rate(-w1, vg1[q], vT1[q]) * a11 + _rate(-w1, vg2[q], vT2[q]) * a21)
            Y2p = 2.0 * (_rate(w2, vg1[q], vT1[q]) * a12 + _rate(w2, vg2[q], vT2[q]) * a22)
            Y2m = 2.0 * (_rate(-w2, vg1[q], vT1[q]) * a12 + _rate(-w2, vg2[q], vT2[q]) * a22)
            X1 = X1p + X1m
            Y2 = Y2p + Y2m
            G[q] = 0.5 * (X1 + Y2)
            if X1 <= 0.0 or Y2 <= 0.0:
                st[q] = 2
                C[q] = 0.0
                continue
            p1 = X1p * Y2p / (X1 * Y2)
            p2 = X1m * Y2m / (X1 * Y2)
            p3 = X1m * Y2p / (X1 * Y2)
            p4 = X1p * Y2m / (X1 * Y2)
            _split(xi, bq, Jq * Jq * (1.0 + Dq * Dq), &xp, &xm)
            _split(eta, Bq, Jq * Jq * chiq * chiq, &ep, &em)
            r11 = (ep * p3 + em * p4) / (2.0 * eta)
            r44 = (em * p3 + ep * p4) / (2.0 * eta)
            r14 = fabs(Jq * chiq * (p3 - p4)) / (2.0 * eta)
            r22 = (xp * p1 + xm * p2) / (2.0 * xi)
            r33 = (xm * p1 + xp * p2) / (2.0 * xi)
            r23 = fabs(Jq) * sqrt(1.0 + Dq * Dq) * fabs(p1 - p2) / (2.0 * xi)
            c1 = r14 - sqrt(r22 * r33)
            c2 = r23 - sqrt(r11 * r44)
            c = c1 if c1 > c2 else c2
            c = 2.0 * c
            if c < 0.0:
                c = 0.0
            if c > 1.0:
                c = 1.0
            C[q] = c
    out_c[out_s != 0] = np.nan
    out_g[out_s != 0] = np.nan
    return out_c.reshape(shape), out_s.reshape(shape), out_g.reshape(shape)
