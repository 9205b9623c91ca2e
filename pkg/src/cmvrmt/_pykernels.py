"""Pure numpy implementation of the hot kernels.

Mirrors ``_kernels.pyx`` operation for operation so that both backends
produce the same eigenvalues up to rounding.
"""

import numpy as np

from .errors import ConvergenceError

MAX_ITER_PER_EIG = 50
_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


def hessenberg(A):
    """Householder reduction to upper Hessenberg form (returns a new array)."""
    H = np.array(A, dtype=complex, order="C", copy=True)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * xnorm
        v /= np.linalg.norm(v)
        H[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0.0
    return H


def _givens(x, y):
    if y == 0:
        return 1.0, 0j
    ax = abs(x)
    if ax == 0.0:
        return 0.0, np.conj(y) / abs(y)
    nrm = np.hypot(ax, abs(y))
    return ax / nrm, (x / ax) * np.conj(y) / nrm


def _wilkinson(a, b, c, d):
    p = 0.5 * (a - d)
    bc = b * c
    disc = np.sqrt(p * p + bc)
    den = p + disc if abs(p + disc) >= abs(p - disc) else p - disc
    if den == 0:
        return d
    return d - bc / den


def hessenberg_eigvals(A):
    """Eigenvalues of a square complex matrix by single-shift implicit QR."""
    H = hessenberg(A)
    n = H.shape[0]
    eigs = np.empty(n, dtype=complex)
    if n == 0:
        return eigs
    hnorm = np.sqrt(np.sum(np.abs(H) ** 2))
    small = max(_EPS * hnorm, _TINY) if hnorm > 0 else _TINY
    hi = n - 1
    its = 0
    while hi >= 0:
        if hi == 0:
            eigs[0] = H[0, 0]
            break
        lo = hi
        while lo > 0:
            h = abs(H[lo, lo - 1])
            scale = abs(H[lo, lo]) + abs(H[lo - 1, lo - 1])
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
            raise ConvergenceError(
                f"QR iteration did not converge for eigenvalue index {hi}")
        if its % 10 == 0:
            # exceptional shift breaks cycles on unitary-like blocks
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1]) * np.exp(1j * its)
        else:
            mu = _wilkinson(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        x = H[lo, lo] - mu
        y = H[lo + 1, lo]
        for k in range(lo, hi):
            if k > lo:
                x = H[k, k - 1]
                y = H[k + 1, k - 1]
            c, s = _givens(x, y)
            j0 = k - 1 if k > lo else lo
            rk = H[k, j0:hi + 1].copy()
            rk1 = H[k + 1, j0:hi + 1]
            H[k, j0:hi + 1] = c * rk + s * rk1
            H[k + 1, j0:hi + 1] = -np.conj(s) * rk + c * rk1
            if k > lo:
                H[k + 1, k - 1] = 0.0
            i1 = min(k + 2, hi) + 1
            ck = H[lo:i1, k].copy()
            ck1 = H[lo:i1, k + 1]
            H[lo:i1, k] = c * ck + np.conj(s) * ck1
            H[lo:i1, k + 1] = -s * ck + c * ck1
    return eigs


def eigvals_batch(stack):
    stack = np.asarray(stack, dtype=complex)
    return np.stack([hessenberg_eigvals(M) for M in stack]) if len(stack) else \
        np.empty(stack.shape[:2], dtype=complex)


def _horner(coeffs, z):
    p = coeffs[0]
    dp = 0j
    for c in coeffs[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth_roots(coeffs, tol=1e-14, maxiter=500):
    """Roots of a monic polynomial given by descending coefficients.

    Returns ``(roots, converged)``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    coeffs = coeffs / coeffs[0]
    n = coeffs.size - 1
    if n == 0:
        return np.empty(0, dtype=complex), True
    # Fujiwara-type radius for the starting circle
    radius = 2.0 * max(abs(coeffs[k]) ** (1.0 / k) for k in range(1, n + 1))
    radius = min(max(radius, 1e-3), 1.0)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    converged = False
    for _ in range(maxiter):
        biggest = 0.0
        for i in range(n):
            p, dp = _horner(coeffs, z[i])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else p
            s = 0j
            for j in range(n):
                if j != i:
                    diff = z[i] - z[j]
                    if diff != 0:
                        s += 1.0 / diff
            w = ratio / (1.0 - ratio * s)
            z[i] -= w
            biggest = max(biggest, abs(w) / max(abs(z[i]), 1.0))
        if biggest < tol:
            converged = True
            break
    for i in range(n):
        for _ in range(2):
            p, dp = _horner(coeffs, z[i])
            if dp != 0:
                z[i] -= p / dp
    return z, converged
