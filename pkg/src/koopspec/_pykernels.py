"""Pure-Python/numpy versions of the compiled kernels in ``_ckernels.pyx``.

Signatures and return conventions match the compiled module exactly. The
ODE and map iterations keep the same scalar operation order, so trajectories
are bit-identical between the two backends; the linear-algebra kernels are
vectorized and agree to rounding.
"""

import math

import numpy as np

BACKEND = "python"


def _szego_step(a, k, calpha):
    prev = a[: k + 1].copy()
    a[k + 1] = prev[k]
    a[1 : k + 1] = prev[:k] - calpha * np.conj(prev[k - 1 :: -1] if k > 0 else prev[:0])
    a[0] = -calpha * np.conj(prev[k])


def levinson_durbin(t, breakdown_tol):
    t = np.asarray(t, dtype=np.complex128)
    n = t.shape[0] - 1
    a = np.zeros(n + 1, dtype=np.complex128)
    refl = np.zeros(n, dtype=np.complex128)
    err = np.zeros(n + 1)
    e = t[0].real
    a[0] = 1.0
    err[0] = e
    if not e > 0.0:
        return a[:1], refl[:0], err[:1], 0
    for k in range(n):
        calpha = np.dot(a[: k + 1], t[1 : k + 2]) / e
        if abs(calpha) >= 1.0 - breakdown_tol:
            return a[: k + 1], refl[:k], err[: k + 1], k + 1
        refl[k] = np.conj(calpha)
        _szego_step(a, k, calpha)
        e = e * (1.0 - calpha.real * calpha.real - calpha.imag * calpha.imag)
        err[k + 1] = e
    return a, refl, err, -1


def levinson_solve(t, rhs, breakdown_tol):
    t = np.asarray(t, dtype=np.complex128)
    rhs = np.asarray(rhs, dtype=np.complex128)
    n = t.shape[0] - 1
    a = np.zeros(n + 1, dtype=np.complex128)
    x = np.zeros(n + 1, dtype=np.complex128)
    e = t[0].real
    if not e > 0.0:
        return x, 0
    a[0] = 1.0
    x[0] = rhs[0] / e
    for k in range(n):
        calpha = np.dot(a[: k + 1], t[1 : k + 2]) / e
        if abs(calpha) >= 1.0 - breakdown_tol:
            return x, k + 1
        _szego_step(a, k, calpha)
        e = e * (1.0 - calpha.real * calpha.real - calpha.imag * calpha.imag)
        eps = np.dot(t[k + 1 : 0 : -1], x[: k + 1])
        coef = (rhs[k + 1] - eps) / e
        x[: k + 2] += coef * np.conj(a[: k + 2])
    return x, -1


def trench_fill(x):
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0] - 1
    b = np.empty((n + 1, n + 1), dtype=np.complex128)
    b[:, 0] = x
    b[0, :] = np.conj(x)
    x0 = x[0].real
    head = x[1:]
    tail = np.conj(x[n:0:-1])
    for j in range(n):
        b[j + 1, 1:] = b[j, :n] + (x[j + 1] * np.conj(head) - np.conj(x[n - j]) * np.conj(tail)) / x0
    return b


def cat_map_orbit(x1, x2, m):
    out = np.empty((m, 2))
    fmod = math.fmod
    for i in range(m):
        out[i, 0] = x1
        out[i, 1] = x2
        y1 = fmod(2.0 * x1 + x2, 1.0)
        x2 = fmod(x1 + x2, 1.0)
        x1 = y1
    return out


def lorenz_rk4(x1, x2, x3, n_samples, h, substeps, transient_steps, bound):
    out = np.empty((n_samples, 3))
    total = transient_steps + n_samples * substeps
    rec = 0
    hh = 0.5 * h
    h6 = h / 6.0
    beta = 8.0 / 3.0
    a, b, c = float(x1), float(x2), float(x3)
    for step in range(total + 1):
        if step >= transient_steps and (step - transient_steps) % substeps == 0:
            if rec == n_samples:
                break
            out[rec, 0] = a
            out[rec, 1] = b
            out[rec, 2] = c
            rec += 1
        k1a = 10.0 * (b - a)
        k1b = a * (28.0 - c) - b
        k1c = a * b - beta * c
        pa, pb, pc = a + hh * k1a, b + hh * k1b, c + hh * k1c
        k2a = 10.0 * (pb - pa)
        k2b = pa * (28.0 - pc) - pb
        k2c = pa * pb - beta * pc
        pa, pb, pc = a + hh * k2a, b + hh * k2b, c + hh * k2c
        k3a = 10.0 * (pb - pa)
        k3b = pa * (28.0 - pc) - pb
        k3c = pa * pb - beta * pc
        pa, pb, pc = a + h * k3a, b + h * k3b, c + h * k3c
        k4a = 10.0 * (pb - pa)
        k4b = pa * (28.0 - pc) - pb
        k4c = pa * pb - beta * pc
        a = a + h6 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        b = b + h6 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        c = c + h6 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c)
        if not (abs(a) <= bound and abs(b) <= bound and abs(c) <= bound):
            return out, step
    return out, -1


def aberth(coeffs, z, tol, max_iter):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    desc = coeffs[::-1]
    ddesc = np.polyder(desc)
    n = coeffs.shape[0] - 1
    for it in range(max_iter):
        step = 0.0
        for i in range(n):
            zi = z[i]
            p = np.polyval(desc, zi)
            if p == 0:
                continue
            dp = np.polyval(ddesc, zi)
            diff = zi - np.delete(z, i)
            s = np.sum(1.0 / diff)
            w = p / dp
            w = w / (1.0 - w * s)
            z[i] = zi - w
            step = max(step, abs(w) / (1.0 + abs(zi)))
        if step <= tol:
            return it + 1
    return -1


def chol_append(r, k, g, gjj):
    if k:
        col = np.array(g[:k], dtype=np.float64)
        for p in range(k):
            col[p] /= r[p, p]
            col[p + 1 :] -= r[p, p + 1 : k] * col[p]
        r[:k, k] = col
        d2 = gjj - float(np.dot(col, col))
    else:
        d2 = float(gjj)
    if d2 > 0.0:
        r[k, k] = math.sqrt(d2)
    return d2


def chol_delete(r, k, col, y):
    r[:k, col : k - 1] = r[:k, col + 1 : k]
    r[:k, k - 1] = 0.0
    for i in range(col, k - 1):
        a = r[i, i]
        b = r[i + 1, i]
        rad = math.hypot(a, b)
        cs = a / rad
        sn = b / rad
        r[i, i] = rad
        r[i + 1, i] = 0.0
        t1 = r[i, i + 1 : k - 1].copy()
        t2 = r[i + 1, i + 1 : k - 1]
        r[i, i + 1 : k - 1] = cs * t1 + sn * t2
        r[i + 1, i + 1 : k - 1] = cs * t2 - sn * t1
        y1, y2 = y[i], y[i + 1]
        y[i] = cs * y1 + sn * y2
        y[i + 1] = cs * y2 - sn * y1
    r[k - 1, :k] = 0.0
    y[k - 1] = 0.0


def back_substitute(r, k, y, z):
    for i in range(k - 1, -1, -1):
        z[i] = (y[i] - np.dot(r[i, i + 1 : k], z[i + 1 : k])) / r[i, i]
