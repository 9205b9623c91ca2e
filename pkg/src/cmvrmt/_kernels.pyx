# cython: language_level=3
"""Compiled kernels: Hessenberg QR eigenvalues and Aberth root finding.

Same algorithms and same API as ``_pykernels``.
"""

import numpy as np
from libc.math cimport sqrt, fabs, hypot, cos, sin, M_PI, fmax

from .errors import ConvergenceError

DEF MAX_ITER_PER_EIG = 50
cdef double _EPS = 2.220446049250313e-16
cdef double _TINY = 2.2250738585072014e-308


cdef inline double cabs_(double complex z) noexcept nogil:
    return hypot(z.real, z.imag)


cdef inline double complex conj_(double complex z) noexcept nogil:
    return z.real - 1j * z.imag


cdef inline double complex csqrt_(double complex z) noexcept nogil:
    cdef double r = cabs_(z)
    cdef double re, im
    if r == 0.0:
        return 0j
    re = sqrt(0.5 * (r + z.real))
    im = sqrt(0.5 * (r - z.real))
    if z.imag < 0:
        im = -im
    return re + 1j * im


cdef void _hessenberg(double complex[:, ::1] H, double complex[::1] v) noexcept nogil:
    cdef Py_ssize_t n = H.shape[0]
    cdef Py_ssize_t k, i, j, m
    cdef double xnorm, vnorm, ax
    cdef double complex phase, acc
    for k in range(n - 2):
        xnorm = 0.0
        for i in range(k + 1, n):
            xnorm += H[i, k].real * H[i, k].real + H[i, k].imag * H[i, k].imag
        xnorm = sqrt(xnorm)
        if xnorm == 0.0:
            continue
        m = n - k - 1
        ax = cabs_(H[k + 1, k])
        phase = H[k + 1, k] / ax if ax != 0.0 else 1.0
        for i in range(m):
            v[i] = H[k + 1 + i, k]
        v[0] = v[0] + phase * xnorm
        vnorm = 0.0
        for i in range(m):
            vnorm += v[i].real * v[i].real + v[i].imag * v[i].imag
        vnorm = sqrt(vnorm)
        for i in range(m):
            v[i] = v[i] / vnorm
        # left: rows k+1.., columns k..
        for j in range(k, n):
            acc = 0.0
            for i in range(m):
                acc = acc + conj_(v[i]) * H[k + 1 + i, j]
            acc = 2.0 * acc
            for i in range(m):
                H[k + 1 + i, j] = H[k + 1 + i, j] - v[i] * acc
        # right: all rows, columns k+1..
        for i in range(n):
            acc = 0.0
            for j in range(m):
                acc = acc + H[i, k + 1 + j] * v[j]
            acc = 2.0 * acc
            for j in range(m):
                H[i, k + 1 + j] = H[i, k + 1 + j] - acc * conj_(v[j])
        for i in range(k + 2, n):
            H[i, k] = 0.0


cdef inline double complex _wilkinson(double complex a, double complex b,
                                      double complex c, double complex d) noexcept nogil:
    cdef double complex p = 0.5 * (a - d)
    cdef double complex bc = b * c
    cdef double complex disc = csqrt_(p * p + bc)
    cdef double complex den
    if cabs_(p + disc) >= cabs_(p - disc):
        den = p + disc
    else:
        den = p - disc
    if den == 0:
        return d
    return d - bc / den


cdef int _qr_eigvals(double complex[:, ::1] H, double complex[::1] eigs) noexcept nogil:
    """Returns -1 on success, else the index that failed to converge."""
    cdef Py_ssize_t n = H.shape[0]
    cdef Py_ssize_t hi, lo, k, j, j0, i, i1
    cdef int its = 0
    cdef double h, scale, hnorm = 0.0, small, c, ax, ay, nrm
    cdef double complex mu, x, y, s, a, b
    for i in range(n):
        for j in range(n):
            hnorm += H[i, j].real * H[i, j].real + H[i, j].imag * H[i, j].imag
    hnorm = sqrt(hnorm)
    small = fmax(_EPS * hnorm, _TINY) if hnorm > 0 else _TINY
    hi = n - 1
    while hi >= 0:
        if hi == 0:
            eigs[0] = H[0, 0]
            break
        lo = hi
        while lo > 0:
            h = cabs_(H[lo, lo - 1])
            scale = cabs_(H[lo, lo]) + cabs_(H[lo - 1, lo - 1])
            if h <= _EPS * scale or h <= small * _EPS:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        its += 1
        if its > MAX_ITER_PER_EIG:
            return <int>hi
        if its % 10 == 0:
            mu = H[hi, hi] + 0.75 * cabs_(H[hi, hi - 1]) * (cos(its) + 1j * sin(its))
        else:
            mu = _wilkinson(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        x = H[lo, lo] - mu
        y = H[lo + 1, lo]
        for k in range(lo, hi):
            if k > lo:
                x = H[k, k - 1]
                y = H[k + 1, k - 1]
            if y == 0:
                c = 1.0
                s = 0.0
            else:
                ax = cabs_(x)
                ay = cabs_(y)
                if ax == 0.0:
                    c = 0.0
                    s = conj_(y) / ay
                else:
                    nrm = hypot(ax, ay)
                    c = ax / nrm
                    s = (x / ax) * conj_(y) / nrm
            j0 = k - 1 if k > lo else lo
            for j in range(j0, hi + 1):
                a = H[k, j]
                b = H[k + 1, j]
                H[k, j] = c * a + s * b
                H[k + 1, j] = -conj_(s) * a + c * b
            if k > lo:
                H[k + 1, k - 1] = 0.0
            i1 = k + 2 if k + 2 < hi else hi
            for i in range(lo, i1 + 1):
                a = H[i, k]
                b = H[i, k + 1]
                H[i, k] = c * a + conj_(s) * b
                H[i, k + 1] = -s * a + c * b
    return -1


def hessenberg(A):
    """Householder reduction to upper Hessenberg form (returns a new array)."""
    Harr = np.array(A, dtype=np.complex128, order="C", copy=True)
    if Harr.ndim != 2 or Harr.shape[0] != Harr.shape[1]:
        raise ValueError("square matrix required")
    cdef double complex[:, ::1] H = Harr
    cdef double complex[::1] v = np.empty(max(Harr.shape[0], 1), dtype=np.complex128)
    with nogil:
        _hessenberg(H, v)
    return Harr


def hessenberg_eigvals(A):
    """Eigenvalues of a square complex matrix by single-shift implicit QR."""
    Harr = hessenberg(A)
    cdef double complex[:, ::1] H = Harr
    cdef Py_ssize_t n = Harr.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] eigs = out
    cdef int status
    if n == 0:
        return out
    with nogil:
        status = _qr_eigvals(H, eigs)
    if status >= 0:
        raise ConvergenceError(
            f"QR iteration did not converge for eigenvalue index {status}")
    return out


def eigvals_batch(stack):
    stack = np.asarray(stack, dtype=np.complex128)
    out = np.empty(stack.shape[:2], dtype=np.complex128)
    for r in range(stack.shape[0]):
        out[r] = hessenberg_eigvals(stack[r])
    return out


cdef inline void _horner(double complex[::1] coeffs, double complex z,
                         double complex* p, double complex* dp) noexcept nogil:
    cdef Py_ssize_t k
    cdef double complex pv = coeffs[0], dv = 0.0
    for k in range(1, coeffs.shape[0]):
        dv = dv * z + pv
        pv = pv * z + coeffs[k]
    p[0] = pv
    dp[0] = dv


def aberth_roots(coeffs, double tol=1e-14, int maxiter=500):
    """Roots of a monic polynomial given by descending coefficients.

    Returns ``(roots, converged)``.
    """
    carr = np.asarray(coeffs, dtype=np.complex128)
    carr = np.ascontiguousarray(carr / carr[0])
    cdef double complex[::1] c = carr
    cdef Py_ssize_t n = carr.shape[0] - 1
    cdef Py_ssize_t i, j, k
    cdef int it
    cdef double radius = 0.0, biggest, r
    cdef double complex p, dp, ratio, s, diff, w
    cdef bint converged = False
    if n == 0:
        return np.empty(0, dtype=np.complex128), True
    for k in range(1, n + 1):
        r = cabs_(c[k]) ** (1.0 / k)
        if r > radius:
            radius = r
    radius = 2.0 * radius
    if radius < 1e-3:
        radius = 1e-3
    if radius > 1.0:
        radius = 1.0
    zarr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] z = zarr
    for i in range(n):
        z[i] = radius * (cos(2 * M_PI * i / n + 0.4) + 1j * sin(2 * M_PI * i / n + 0.4))
    with nogil:
        for it in range(maxiter):
            biggest = 0.0
            for i in range(n):
                _horner(c, z[i], &p, &dp)
                if p == 0:
                    continue
                ratio = p / dp if dp != 0 else p
                s = 0.0
                for j in range(n):
                    if j != i:
                        diff = z[i] - z[j]
                        if diff != 0:
                            s = s + 1.0 / diff
                w = ratio / (1.0 - ratio * s)
                z[i] = z[i] - w
                r = cabs_(w) / fmax(cabs_(z[i]), 1.0)
                if r > biggest:
                    biggest = r
            if biggest < tol:
                converged = True
                break
        for i in range(n):
            for k in range(2):
                _horner(c, z[i], &p, &dp)
                if dp != 0:
                    z[i] = z[i] - p / dp
    return zarr, bool(converged)
