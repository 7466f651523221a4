"""Lawson-Hanson nonnegative least squares on the normal equations.

The solver never forms the design matrix. It needs the right-hand side
``c = A^T b``, a way to read single Gram columns ``G[P, j]`` and a fast
product ``G x``. The Cholesky factor of the passive Gram block is kept up to
date by column appends and Givens deletions, so each active-set change costs
O(k^2) for ``k`` passive variables.
"""

import numpy as np

from . import _kernels
from ._errors import NumericalFailure


def lawson_hanson(c, gram_column, gram_diag, gram_matvec, btb=None, max_iter=None,
                  tol=None, pivot_tol=1e-10, passive0=None):
    """Minimize ``x^T G x - 2 c^T x`` subject to ``x >= 0``.

    Parameters
    ----------
    c : ndarray, shape (n,)
        ``A^T b``.
    gram_column : callable
        ``gram_column(idx, j)`` returns ``G[idx, j]`` for an integer array ``idx``.
    gram_diag : ndarray, shape (n,)
        Diagonal of ``G``.
    gram_matvec : callable
        ``gram_matvec(x)`` returns ``G @ x``.
    btb : float, optional
        ``b^T b``; when given the optimal objective ``||Ax - b||^2`` is returned.
    max_iter : int, optional
        Cap on inner (step-halving) iterations; default ``10 * n``.
    tol : float, optional
        Dual feasibility tolerance on the gradient ``c - G x``.
    pivot_tol : float
        Relative pivot below which a column is treated as dependent on the
        passive set and skipped for the current sweep.
    passive0 : array_like of int, optional
        Warm-start guess for the passive set, for example the support of a
        solution on a coarser grid. Entries whose least-squares values come
        out nonpositive are discarded before the main loop starts.

    Returns
    -------
    x : ndarray
    objective : float or None
    info : dict
        ``passive`` size and counters ``adds``, ``inner``.
    """
    c = np.asarray(c, dtype=np.float64)
    n = c.shape[0]
    max_iter = 10 * n if max_iter is None else max_iter
    if tol is None:
        tol = 10.0 * np.finfo(float).eps * n * max(1.0, float(np.abs(c).max()))
    k = _kernels.impl
    cap = min(n, 64)
    r = np.zeros((cap, cap))
    y = np.zeros(cap)
    z = np.zeros(cap)
    order = []  # passive indices in factor order
    passive = np.zeros(n, dtype=bool)
    skipped = np.zeros(n, dtype=bool)
    x = np.zeros(n)
    w = c.copy()
    adds = inner = 0

    def grow(r, y, z):
        new = min(n, 2 * r.shape[0])
        r2 = np.zeros((new, new))
        r2[: r.shape[0], : r.shape[0]] = r
        return r2, np.resize(y, new), np.zeros(new)

    if passive0 is not None:
        for j in np.unique(np.asarray(passive0, dtype=np.intp)):
            p = len(order)
            if p == r.shape[0]:
                r, y, z = grow(r, y, z)
                y[p:] = 0.0
            g = gram_column(np.asarray(order, dtype=np.intp), j) if p else np.zeros(0)
            d2 = k.chol_append(r, p, np.ascontiguousarray(g, dtype=np.float64),
                               float(gram_diag[j]))
            if not d2 > pivot_tol * gram_diag[j]:
                r[:p, p] = 0.0
                r[p, p] = 0.0
                continue
            y[p] = (c[j] - float(np.dot(r[:p, p], y[:p]))) / r[p, p]
            order.append(int(j))
            passive[j] = True
        while order:
            q = len(order)
            k.back_substitute(r, q, y, z)
            bad = np.flatnonzero(z[:q] <= 0.0)
            if bad.size == 0:
                break
            for pos in bad[::-1]:
                passive[order.pop(int(pos))] = False
                k.chol_delete(r, q, int(pos), y)
                q -= 1
        x[order] = z[: len(order)]
        w = c - gram_matvec(x)

    while True:
        cand = np.where(passive | skipped, -np.inf, w)
        j = int(np.argmax(cand))
        if not cand[j] > tol:
            break
        p = len(order)
        if p == r.shape[0]:
            r, y, z = grow(r, y, z)
            y[p:] = 0.0
        g = gram_column(np.asarray(order, dtype=np.intp), j) if p else np.zeros(0)
        d2 = k.chol_append(r, p, np.ascontiguousarray(g, dtype=np.float64), float(gram_diag[j]))
        if not d2 > pivot_tol * gram_diag[j]:
            r[:p, p] = 0.0
            r[p, p] = 0.0
            skipped[j] = True
            continue
        y[p] = (c[j] - float(np.dot(r[:p, p], y[:p]))) / r[p, p]
        order.append(j)
        passive[j] = True
        adds += 1
        while True:
            q = len(order)
            k.back_substitute(r, q, y, z)
            zq = z[:q]
            if zq.min() > 0.0:
                break
            inner += 1
            if inner > max_iter:
                raise NumericalFailure(
                    f"nonnegative least squares did not converge in {max_iter} iterations")
            idx = np.asarray(order)
            xp = x[idx]
            neg = zq <= 0.0
            alpha = float(np.min(xp[neg] / (xp[neg] - zq[neg])))
            xp = xp + alpha * (zq - xp)
            x[idx] = xp
            drop = np.flatnonzero(xp <= 1e-15 * max(1.0, float(xp.max())))
            if drop.size == 0:  # guard against stalls from rounding
                drop = np.array([int(np.argmin(xp))])
            for pos in drop[::-1]:
                jj = order.pop(int(pos))
                passive[jj] = False
                x[jj] = 0.0
                k.chol_delete(r, q, int(pos), y)
                q -= 1
        x[:] = 0.0
        x[order] = z[: len(order)]
        skipped[:] = False
        w = c - gram_matvec(x)
    objective = None
    if btb is not None:
        objective = float(btb - 2.0 * np.dot(x, c) + np.dot(x, gram_matvec(x)))
    return x, objective, {"passive": len(order), "adds": adds, "inner": inner}
