# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Every function here has a twin with the same signature and the same
floating-point operation order in :mod:`koopspec._pykernels`.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fmod, sqrt, fabs, hypot
from libc.string cimport memmove

cnp.import_array()

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)
    double creal(double complex)
    double cimag(double complex)

BACKEND = "cython"


def levinson_durbin(const double complex[::1] t, double breakdown_tol):
    """Szego / Levinson-Durbin recursion for the monic predictors of ``t``.

    Returns ``(a, reflections, errors, fail_at)``; ``fail_at`` is -1 on
    success, otherwise the degree whose reflection coefficient broke down.
    """
    cdef Py_ssize_t n = t.shape[0] - 1
    cdef Py_ssize_t k, i
    a_arr = np.zeros(n + 1, dtype=np.complex128)
    tmp_arr = np.zeros(n + 1, dtype=np.complex128)
    refl_arr = np.zeros(n, dtype=np.complex128)
    err_arr = np.zeros(n + 1, dtype=np.float64)
    cdef double complex[::1] a = a_arr
    cdef double complex[::1] tmp = tmp_arr
    cdef double complex[::1] refl = refl_arr
    cdef double[::1] err = err_arr
    cdef double complex acc, calpha
    cdef double e = creal(t[0])
    a[0] = 1.0
    err[0] = e
    if not e > 0.0:
        return a_arr[:1], refl_arr[:0], err_arr[:1], 0
    for k in range(n):
        acc = 0.0
        for i in range(k + 1):
            acc = acc + a[i] * t[i + 1]
        calpha = acc / e
        if cabs(calpha) >= 1.0 - breakdown_tol:
            return a_arr[:k + 1], refl_arr[:k], err_arr[:k + 1], k + 1
        refl[k] = conj(calpha)
        for i in range(k + 1):
            tmp[i] = a[i]
        a[k + 1] = tmp[k]
        for i in range(k, 0, -1):
            a[i] = tmp[i - 1] - calpha * conj(tmp[k - i])
        a[0] = -calpha * conj(tmp[k])
        e = e * (1.0 - creal(calpha) * creal(calpha) - cimag(calpha) * cimag(calpha))
        err[k + 1] = e
    return a_arr, refl_arr, err_arr, -1


def levinson_solve(const double complex[::1] t, const double complex[::1] rhs,
                   double breakdown_tol):
    """Solve ``T x = rhs`` for the Hermitian Toeplitz ``T`` with first column ``t``.

    Returns ``(x, fail_at)``.
    """
    cdef Py_ssize_t n = t.shape[0] - 1
    cdef Py_ssize_t k, i
    a_arr = np.zeros(n + 1, dtype=np.complex128)
    tmp_arr = np.zeros(n + 1, dtype=np.complex128)
    x_arr = np.zeros(n + 1, dtype=np.complex128)
    cdef double complex[::1] a = a_arr
    cdef double complex[::1] tmp = tmp_arr
    cdef double complex[::1] x = x_arr
    cdef double complex acc, calpha, eps, coef
    cdef double e = creal(t[0])
    if not e > 0.0:
        return x_arr, 0
    a[0] = 1.0
    x[0] = rhs[0] / e
    for k in range(n):
        acc = 0.0
        for i in range(k + 1):
            acc = acc + a[i] * t[i + 1]
        calpha = acc / e
        if cabs(calpha) >= 1.0 - breakdown_tol:
            return x_arr, k + 1
        for i in range(k + 1):
            tmp[i] = a[i]
        a[k + 1] = tmp[k]
        for i in range(k, 0, -1):
            a[i] = tmp[i - 1] - calpha * conj(tmp[k - i])
        a[0] = -calpha * conj(tmp[k])
        e = e * (1.0 - creal(calpha) * creal(calpha) - cimag(calpha) * cimag(calpha))
        # row k+1 of T applied to [x; 0]
        eps = 0.0
        for i in range(k + 1):
            eps = eps + t[k + 1 - i] * x[i]
        coef = (rhs[k + 1] - eps) / e
        for i in range(k + 2):
            x[i] = x[i] + coef * conj(a[i])
    return x_arr, -1


def trench_fill(const double complex[::1] x):
    """Dense inverse from its first column via the Trench recurrence."""
    cdef Py_ssize_t n = x.shape[0] - 1
    cdef Py_ssize_t j, l
    out = np.empty((n + 1, n + 1), dtype=np.complex128)
    cdef double complex[:, ::1] b = out
    cdef double x0 = creal(x[0])
    for j in range(n + 1):
        b[j, 0] = x[j]
        b[0, j] = conj(x[j])
    for j in range(n):
        for l in range(n):
            b[j + 1, l + 1] = b[j, l] + (x[j + 1] * conj(x[l + 1])
                                         - conj(x[n - j]) * x[n - l]) / x0
    return out


def cat_map_orbit(double x1, double x2, Py_ssize_t m):
    out = np.empty((m, 2), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i
    cdef double y1
    for i in range(m):
        o[i, 0] = x1
        o[i, 1] = x2
        y1 = fmod(2.0 * x1 + x2, 1.0)
        x2 = fmod(x1 + x2, 1.0)
        x1 = y1
    return out


cdef inline void _lorenz(double a, double b, double c, double* out) nogil:
    out[0] = 10.0 * (b - a)
    out[1] = a * (28.0 - c) - b
    out[2] = a * b - (8.0 / 3.0) * c


def lorenz_rk4(double x1, double x2, double x3, Py_ssize_t n_samples,
               double h, Py_ssize_t substeps, Py_ssize_t transient_steps,
               double bound):
    """Fixed-step RK4; returns ``(samples, fail_at)`` with ``fail_at = -1`` on success."""
    out = np.empty((n_samples, 3), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double k1[3]
    cdef double k2[3]
    cdef double k3[3]
    cdef double k4[3]
    cdef double s[3]
    cdef Py_ssize_t step, total = transient_steps + n_samples * substeps
    cdef Py_ssize_t rec = 0
    cdef double hh = 0.5 * h, h6 = h / 6.0
    s[0] = x1
    s[1] = x2
    s[2] = x3
    for step in range(total + 1):
        if step >= transient_steps and (step - transient_steps) % substeps == 0:
            if rec == n_samples:
                break
            o[rec, 0] = s[0]
            o[rec, 1] = s[1]
            o[rec, 2] = s[2]
            rec += 1
        _lorenz(s[0], s[1], s[2], k1)
        _lorenz(s[0] + hh * k1[0], s[1] + hh * k1[1], s[2] + hh * k1[2], k2)
        _lorenz(s[0] + hh * k2[0], s[1] + hh * k2[1], s[2] + hh * k2[2], k3)
        _lorenz(s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2], k4)
        s[0] = s[0] + h6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        s[1] = s[1] + h6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        s[2] = s[2] + h6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        if not (fabs(s[0]) <= bound and fabs(s[1]) <= bound and fabs(s[2]) <= bound):
            return out, step
    return out, -1


def aberth(const double complex[::1] coeffs, double complex[::1] z,
           double tol, Py_ssize_t max_iter):
    """Aberth-Ehrlich iteration in place on ``z`` for a monic polynomial.

    ``coeffs`` are ascending (``coeffs[-1] == 1``). Returns the iteration count
    used, or -1 if ``max_iter`` was exhausted.
    """
    cdef Py_ssize_t n = coeffs.shape[0] - 1
    cdef Py_ssize_t it, i, j, c
    cdef double complex zi, p, dp, s, w
    cdef double step
    for it in range(max_iter):
        step = 0.0
        for i in range(n):
            zi = z[i]
            p = coeffs[n]
            dp = 0.0
            for c in range(n - 1, -1, -1):
                dp = dp * zi + p
                p = p * zi + coeffs[c]
            if p == 0.0:
                continue
            s = 0.0
            for j in range(n):
                if j != i:
                    s = s + 1.0 / (zi - z[j])
            w = p / dp
            w = w / (1.0 - w * s)
            z[i] = zi - w
            if cabs(w) / (1.0 + cabs(zi)) > step:
                step = cabs(w) / (1.0 + cabs(zi))
        if step <= tol:
            return it + 1
    return -1


def chol_append(double[:, ::1] r, Py_ssize_t k, const double[::1] g, double gjj):
    """Append column ``g`` to the upper factor ``r[:k, :k]``; returns the new pivot squared.

    ``r[:k, k]`` is overwritten with ``R^-T g``. ``r[k, k]`` is set only when
    the pivot is positive.
    """
    cdef Py_ssize_t p, i
    cdef double v, d2
    col_arr = np.array(g[:k], dtype=np.float64)
    cdef double[::1] col = col_arr
    # forward solve R^T col = g, sweeping contiguous rows of R
    for p in range(k):
        v = col[p] / r[p, p]
        col[p] = v
        for i in range(p + 1, k):
            col[i] -= r[p, i] * v
    d2 = gjj
    for p in range(k):
        r[p, k] = col[p]
        d2 -= col[p] * col[p]
    if d2 > 0.0:
        r[k, k] = sqrt(d2)
    return d2


def chol_delete(double[:, ::1] r, Py_ssize_t k, Py_ssize_t col, double[::1] y):
    """Remove column ``col`` from ``r[:k, :k]`` and restore triangularity with Givens rotations.

    The same rotations are applied to ``y``; ``y[k-1]`` is dropped.
    """
    cdef Py_ssize_t i, c
    cdef double a, b, rad, cs, sn, t1, t2
    for i in range(k):
        if col < k - 1:
            memmove(&r[i, col], &r[i, col + 1], (k - 1 - col) * sizeof(double))
        r[i, k - 1] = 0.0
    for i in range(col, k - 1):
        a = r[i, i]
        b = r[i + 1, i]
        rad = hypot(a, b)
        cs = a / rad
        sn = b / rad
        r[i, i] = rad
        r[i + 1, i] = 0.0
        for c in range(i + 1, k - 1):
            t1 = r[i, c]
            t2 = r[i + 1, c]
            r[i, c] = cs * t1 + sn * t2
            r[i + 1, c] = cs * t2 - sn * t1
        t1 = y[i]
        t2 = y[i + 1]
        y[i] = cs * t1 + sn * t2
        y[i + 1] = cs * t2 - sn * t1
    for c in range(k):
        r[k - 1, c] = 0.0
    y[k - 1] = 0.0


def back_substitute(const double[:, ::1] r, Py_ssize_t k, const double[::1] y,
                    double[::1] z):
    """Solve ``r[:k, :k] z = y`` (upper triangular)."""
    cdef Py_ssize_t i, c
    cdef double acc
    for i in range(k - 1, -1, -1):
        acc = y[i]
        for c in range(i + 1, k):
            acc -= r[i, c] * z[c]
        z[i] = acc / r[i, i]
