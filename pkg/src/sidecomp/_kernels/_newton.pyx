# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled damped-Newton idempotent search.

Mirrors ``_newton_py.newton_search`` step for step: same iteration, same
damping, same ridge and convergence rule, so the two backends agree to
rounding. Everything runs on flat C buffers; no numpy calls inside the
iteration.
"""

from libc.math cimport isfinite

import numpy as np

__all__ = ["newton_search"]


cdef inline double _abs2(double complex z) noexcept:
    return z.real * z.real + z.imag * z.imag


cdef void _matmul(double complex* a, double complex* b, double complex* out,
                  Py_ssize_t n) noexcept:
    cdef Py_ssize_t i, j, k
    cdef double complex acc
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = acc + a[i * n + k] * b[k * n + j]
            out[i * n + j] = acc


cdef bint _solve(double complex* g, double complex* rhs, double complex* x,
                 Py_ssize_t d) noexcept:
    # Gaussian elimination with partial pivoting, in place on g and rhs.
    cdef Py_ssize_t i, j, k, piv
    cdef double best, mag
    cdef double complex factor, tmp
    for k in range(d):
        piv = k
        best = _abs2(g[k * d + k])
        for i in range(k + 1, d):
            mag = _abs2(g[i * d + k])
            if mag > best:
                best = mag
                piv = i
        if best == 0.0:
            return False
        if piv != k:
            for j in range(k, d):
                tmp = g[k * d + j]
                g[k * d + j] = g[piv * d + j]
                g[piv * d + j] = tmp
            tmp = rhs[k]
            rhs[k] = rhs[piv]
            rhs[piv] = tmp
        for i in range(k + 1, d):
            factor = g[i * d + k] / g[k * d + k]
            for j in range(k, d):
                g[i * d + j] = g[i * d + j] - factor * g[k * d + j]
            rhs[i] = rhs[i] - factor * rhs[k]
    for i in range(d - 1, -1, -1):
        tmp = rhs[i]
        for j in range(i + 1, d):
            tmp = tmp - g[i * d + j] * x[j]
        x[i] = tmp / g[i * d + i]
    return True


def newton_search(basis, starts, int max_iter=100, double damping=0.5,
                  double ftol=1e-13):
    """Same contract as ``_newton_py.newton_search``."""
    basis_arr = np.ascontiguousarray(basis, dtype=np.complex128)
    starts_arr = np.ascontiguousarray(
        np.atleast_2d(np.asarray(starts, dtype=np.complex128))
    )
    cdef Py_ssize_t d = basis_arr.shape[0]
    cdef Py_ssize_t n = basis_arr.shape[1]
    cdef Py_ssize_t nn = n * n
    cdef Py_ssize_t runs = starts_arr.shape[0]

    coeffs_arr = np.array(starts_arr, copy=True)
    conv_arr = np.zeros(runs, dtype=np.uint8)

    cdef double complex[:, :, :] bview = basis_arr
    cdef double complex[:, :] cview = coeffs_arr
    cdef unsigned char[:] conv = conv_arr

    work_arr = np.zeros(3 * nn + nn * d + d * d + 4 * d, dtype=np.complex128)
    cdef double complex[:] work = work_arr
    cdef double complex* p
    cdef double complex* pp
    cdef double complex* scratch
    cdef double complex* jac
    cdef double complex* gram
    cdef double complex* rhs
    cdef double complex* delta
    cdef double complex* c
    cdef double complex* bflat

    cdef Py_ssize_t t, it, m, i, j, idx
    cdef double fn2, cn2, maxdiag, ftol2
    cdef double complex acc, cm, fval
    cdef bint ok

    p = &work[0]
    pp = &work[nn]
    scratch = &work[2 * nn]
    jac = &work[3 * nn]
    gram = &work[3 * nn + nn * d]
    rhs = &work[3 * nn + nn * d + d * d]
    delta = &work[3 * nn + nn * d + d * d + d]
    c = &work[3 * nn + nn * d + d * d + 2 * d]
    # remaining d slots unused; kept so pointer math stays simple

    bflat = &bview[0, 0, 0]
    ftol2 = ftol * ftol

    for t in range(runs):
        for m in range(d):
            c[m] = cview[t, m]
        ok = False
        for it in range(max_iter):
            for idx in range(nn):
                p[idx] = 0
            for m in range(d):
                cm = c[m]
                for idx in range(nn):
                    p[idx] = p[idx] + cm * bflat[m * nn + idx]
            _matmul(p, p, pp, n)
            fn2 = 0.0
            cn2 = 0.0
            for idx in range(nn):
                pp[idx] = pp[idx] - p[idx]
                fn2 = fn2 + _abs2(pp[idx])
            for m in range(d):
                cn2 = cn2 + _abs2(c[m])
            if not isfinite(fn2) or not isfinite(cn2) or cn2 > 1e16:
                break
            if fn2 <= ftol2:
                ok = True
                break
            # jac[:, m] = vec(B_m P + P B_m - B_m)
            for m in range(d):
                _matmul(&bflat[m * nn], p, scratch, n)
                for idx in range(nn):
                    jac[idx * d + m] = scratch[idx] - bflat[m * nn + idx]
                _matmul(p, &bflat[m * nn], scratch, n)
                for idx in range(nn):
                    jac[idx * d + m] = jac[idx * d + m] + scratch[idx]
            # gram = jac^H jac, rhs = -jac^H f
            for i in range(d):
                for j in range(d):
                    acc = 0
                    for idx in range(nn):
                        acc = acc + jac[idx * d + i].conjugate() * jac[idx * d + j]
                    gram[i * d + j] = acc
                acc = 0
                for idx in range(nn):
                    fval = pp[idx]
                    acc = acc + jac[idx * d + i].conjugate() * fval
                rhs[i] = -acc
            maxdiag = 0.0
            for i in range(d):
                if gram[i * d + i].real > maxdiag:
                    maxdiag = gram[i * d + i].real
            if maxdiag < 1e-300:
                maxdiag = 1e-300
            for i in range(d):
                gram[i * d + i] = gram[i * d + i] + 1e-12 * maxdiag
            if not _solve(gram, rhs, delta, d):
                break
            for m in range(d):
                c[m] = c[m] + damping * delta[m]
        for m in range(d):
            cview[t, m] = c[m]
        conv[t] = 1 if ok else 0
    return coeffs_arr, conv_arr.astype(bool)
