"""Weakly convergent approximations of a measure from its moments.

Two families are provided: the Fejer-smoothed (Cesaro) density with its
closed-form distribution function, and an atomic quadrature on the uniform
grid ``j / n_q`` fitted by nonnegative least squares. The singularity
indicator compares CDF increments of either with those of the integrated
``zeta_N``.
"""

import json
from dataclasses import dataclass

import numpy as np

from ._errors import InvalidArgument
from .cd_kernel import GridFunction, trig_eval, uniform_grid
from .nnls import lawson_hanson

TWO_PI = 2.0 * np.pi


def cesaro_coefficients(m):
    """Taps ``w_k = (N + 1 - k) / (N + 1) * conj(m_k)``, ``k = 0..N``."""
    if m.modified:
        raise InvalidArgument("expected an unmodified moment sequence")
    n = m.order
    k = np.arange(n + 1)
    return (n + 1 - k) / (n + 1) * np.conj(m.values)


def cesaro_density(m, size):
    """Fejer-smoothed density ``rho_N^CS`` on a uniform grid of ``size`` points."""
    th = uniform_grid(size)
    return GridFunction(th, trig_eval(cesaro_coefficients(m), th))


def cesaro_cdf(m, t):
    """Distribution function of the Cesaro density.

    ``F(t) = w_0 t + sum_{k != 0} w_k (exp(i 2 pi t k) - 1) / (i 2 pi k)``.

    Parameters
    ----------
    m : MomentSequence
    t : float or array_like
        Points in [0, 1].

    Returns
    -------
    float or ndarray
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any((t < 0) | (t > 1)) or not np.all(np.isfinite(t)):
        raise InvalidArgument("t must lie in [0, 1]")
    w = cesaro_coefficients(m)
    k = np.arange(1, w.size)
    out = w[0].real * t
    if k.size:
        coef = w[1:] / (1j * TWO_PI * k)
        step = max(1, (1 << 20) // k.size)
        for s in range(0, t.size, step):
            ph = np.exp(1j * TWO_PI * np.mod(np.outer(t[s:s + step], k), 1.0))
            out[s:s + step] += 2.0 * ((ph - 1.0) @ coef).real
    return float(out[0]) if scalar else out


@dataclass(frozen=True, eq=False)
class QuadratureMeasure:
    """Atomic measure on ``eta_j = j / n_q``, ``j = 0..n_q``.

    Attributes
    ----------
    weights : ndarray
        ``gamma_0..gamma_{n_q}`` with ``gamma_0 == gamma_{n_q}``.
    residual : float
        Optimal value of the moment-matching objective (sum of squared moduli).
    """

    weights: np.ndarray
    residual: float

    @property
    def n_q(self):
        return self.weights.size - 1

    @property
    def locations(self):
        return np.arange(self.n_q + 1) / self.n_q

    def moments(self, order):
        """Trigonometric moments of the quadrature measure."""
        k = np.arange(order + 1)
        return np.exp(1j * TWO_PI * np.mod(np.outer(k, self.locations), 1.0)) @ self.weights

    def to_json(self):
        return json.dumps({"n_q": self.n_q, "weights": self.weights.tolist(),
                           "residual": self.residual})


def _solve_grid(vals, n_q, passive0):
    """One NNLS solve on the merged grid ``j / n_q``, ``j = 0..n_q - 1``.

    Variable 0 stands for both ``gamma_0`` and ``gamma_{n_q}``; its design
    column is twice the column of ``eta = 0``. Stacking real and imaginary
    parts gives a Gram matrix ``s_i s_j g((i - j) mod n_q)`` with
    ``g(d) = sum_k cos(2 pi k d / n_q)``, applied through the FFT.
    """
    n = vals.size - 1
    d = np.arange(n_q)
    g = np.cos(TWO_PI * np.mod(np.outer(d, np.arange(n + 1)), n_q) / n_q).sum(axis=1)
    s = np.ones(n_q)
    s[0] = 2.0
    padded = np.zeros(n_q, dtype=np.complex128)
    padded[: n + 1] = vals
    c = s * np.fft.fft(padded).real
    fg = np.fft.rfft(g)

    def column(idx, j):
        return s[idx] * s[j] * g[(idx - j) % n_q]

    def matvec(x):
        return s * np.fft.irfft(fg * np.fft.rfft(s * x), n_q)

    # pivots are squared in the normal equations, so 1e-13 keeps columns up to
    # a conditioning of about 3e6 relative to the passive set
    return lawson_hanson(c, column, s * s * g[0], matvec, max_iter=10 * n_q,
                         pivot_tol=1e-13, passive0=passive0)


def quadrature(m, n_q=None, levels=3):
    """Nonnegative weights on ``j / n_q`` matching the moments in least squares.

    Minimizes ``sum_{k=0}^N |m_k - sum_j gamma_j exp(i 2 pi k eta_j)|^2`` over
    ``gamma >= 0`` with ``gamma_0 = gamma_{n_q}``.

    Parameters
    ----------
    m : MomentSequence
        Unmodified moments ``m_0..m_N``.
    n_q : int, optional
        Grid size, ``n_q > N``; default ``10 N``.
    levels : int
        Number of grids in the coarse-to-fine sequence ``n_q / 2^l``. A coarse
        solution lives on a subset of the fine grid, so its support seeds the
        active set of the next solve. Coarse grids smaller than ``2 N + 2``
        are skipped.

    Returns
    -------
    QuadratureMeasure

    Raises
    ------
    NumericalFailure
        If a solve exceeds ``10 n_q`` inner iterations.
    """
    if m.modified:
        raise InvalidArgument("expected an unmodified moment sequence")
    n = m.order
    n_q = 10 * max(n, 1) if n_q is None else int(n_q)
    if n_q <= n:
        raise InvalidArgument(f"n_q={n_q} must exceed N={n}")
    chain = [n_q]
    while len(chain) < levels and chain[-1] % 2 == 0 and chain[-1] // 2 >= 2 * n + 2:
        chain.append(chain[-1] // 2)
    passive0 = None
    x = None
    for i, nq in enumerate(reversed(chain)):
        if x is not None:
            passive0 = np.flatnonzero(x > 0) * (nq // prev)
        x, _, _ = _solve_grid(m.values, nq, passive0)
        prev = nq
    weights = np.concatenate([x, x[:1]])
    q = QuadratureMeasure(weights, 0.0)
    # residual from the explicit moment mismatch, not the normal equations
    resid = float(np.sum(np.abs(q.moments(n) - m.values) ** 2))
    weights.setflags(write=False)
    return QuadratureMeasure(weights, resid)


def quadrature_cdf(q, t):
    """``sum_{eta_j <= t} gamma_j``; right-continuous step function."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    cum = np.concatenate([[0.0], np.cumsum(q.weights)])
    out = cum[np.searchsorted(q.locations, t, side="right")]
    return float(out[0]) if scalar else out


@dataclass(frozen=True, eq=False)
class SingularityIndicator:
    """Per-bin indicator values on ``t_k = k / B`` plus bins whose denominator was floored."""

    grid: GridFunction
    flagged_bins: tuple

    def to_json(self):
        d = self.grid.to_dict()
        d["flagged_bins"] = list(self.flagged_bins)
        return json.dumps(d)


def singularity_indicator(f_est, f_zeta, bins=1000, mass=None):
    """Ratio of CDF increments minus one on ``bins`` equal bins of [0, 1].

    ``Delta(t_k) = (F(t_{k+1}) - F(t_k)) / (F_zeta(t_{k+1}) - F_zeta(t_k)) - 1``.

    Parameters
    ----------
    f_est : callable
        Estimated CDF, for example ``lambda t: cesaro_cdf(m, t)``.
    f_zeta : GridFunction
        Integrated ``zeta_N`` over [0, 1]; interpolated linearly between nodes.
    bins : int
    mass : float, optional
        Total mass used for the denominator floor ``1e-12 * mass``; defaults
        to ``f_est(1)``.

    Returns
    -------
    SingularityIndicator
        Grid values at the left bin edges ``t_0..t_{B-1}``.
    """
    if bins < 2:
        raise InvalidArgument("need at least 2 bins")
    if f_zeta.theta[0] > 0 or f_zeta.theta[-1] < 1:
        raise InvalidArgument("F_zeta must cover [0, 1]")
    t = np.arange(bins + 1) / bins
    fe = np.asarray(f_est(t), dtype=np.float64)
    fz = f_zeta(t)
    mass = float(fe[-1]) if mass is None else float(mass)
    num = np.diff(fe)
    den = np.diff(fz)
    floor = 1e-12 * max(mass, np.finfo(float).tiny)
    flagged = np.flatnonzero(den < floor)
    den = np.maximum(den, floor)
    return SingularityIndicator(GridFunction(t[:-1], num / den - 1.0),
                                tuple(int(i) for i in flagged))
