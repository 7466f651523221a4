"""Hermitian positive-definite Toeplitz linear algebra in O(N^2).

The matrix is stored by its first column ``t_0..t_N`` with entry ``(j, l)``
equal to ``t_{j-l}`` and ``t_{-d} = conj(t_d)``.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._errors import InvalidArgument, InvalidData, NotPositiveDefinite

BREAKDOWN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HermitianToeplitz:
    """Hermitian Toeplitz matrix given by its first column.

    Parameters
    ----------
    first_column : array_like of complex
        ``t_0..t_N``; ``t_0`` must be real.
    """

    first_column: np.ndarray

    def __post_init__(self):
        t = np.array(self.first_column, dtype=np.complex128).ravel()
        if t.size == 0:
            raise InvalidArgument("empty Toeplitz column")
        if not np.all(np.isfinite(t)):
            raise InvalidData("Toeplitz entries must be finite")
        if abs(t[0].imag) > 1e-12 * max(1.0, abs(t[0].real)):
            raise InvalidData("t_0 must be real for a Hermitian matrix")
        t[0] = t[0].real
        t.setflags(write=False)
        object.__setattr__(self, "first_column", t)

    @classmethod
    def from_moments(cls, m):
        """Moment matrix ``[m_{j-l}]`` of a :class:`~koopspec.moments.MomentSequence`."""
        return cls(m.values)

    @property
    def size(self):
        return self.first_column.size

    def dense(self):
        t = self.first_column
        n = t.size
        idx = np.arange(n)[:, None] - np.arange(n)[None, :]
        return np.where(idx >= 0, t[np.abs(idx)], np.conj(t[np.abs(idx)]))

    def matvec(self, x):
        return self.dense() @ np.asarray(x, dtype=np.complex128)


def _check_fail(fail_at, what):
    if fail_at == 0:
        raise NotPositiveDefinite(f"{what}: t_0 must be positive", degree=0)
    if fail_at > 0:
        raise NotPositiveDefinite(
            f"{what}: reflection coefficient reached 1 at degree {fail_at}; "
            "matrix is not numerically positive definite", degree=fail_at)


def szego_recursion(T):
    """Monic predictor, reflection coefficients and prediction errors of ``T``.

    Returns
    -------
    a : ndarray
        Coefficients with ``T conj(a) = E_N e_N``.
    reflections : ndarray
    errors : ndarray
        ``E_0..E_N``.
    """
    a, refl, err, fail = _kernels.impl.levinson_durbin(T.first_column, BREAKDOWN_TOL)
    _check_fail(fail, "Levinson recursion")
    return a, refl, err


def levinson_solve(T, rhs):
    """Solve ``T x = rhs`` with the Levinson-Durbin recursion.

    Parameters
    ----------
    T : HermitianToeplitz
    rhs : array_like of complex, length ``N + 1``

    Returns
    -------
    ndarray of complex
    """
    rhs = np.ascontiguousarray(rhs, dtype=np.complex128).ravel()
    if rhs.size != T.size:
        raise InvalidArgument(f"rhs has length {rhs.size}, expected {T.size}")
    x, fail = _kernels.impl.levinson_solve(T.first_column, rhs, BREAKDOWN_TOL)
    _check_fail(fail, "Levinson solve")
    return x


def trench_inverse(T):
    """Dense inverse of ``T`` in O(N^2) with the Trench recurrence.

    The result is symmetrized as ``(B + B^H) / 2``.
    """
    a, _, err = szego_recursion(T)
    # first column of the inverse is the reversed predictor over E_N
    first = np.ascontiguousarray(a[::-1] / err[-1])
    b = _kernels.impl.trench_fill(first)
    return 0.5 * (b + b.conj().T)


def toeplitz_cholesky(T):
    """Lower-triangular ``L`` with ``L^H L = T``.

    Uses the Schur generator algorithm on ``J T J = conj(T)`` (``J`` the
    exchange matrix): an ordinary factor ``conj(T) = G G^H`` flips to
    ``L = (J G J)^H``.
    """
    s = np.conj(T.first_column)
    n = s.size
    if not s[0].real > 0:
        raise NotPositiveDefinite("Schur algorithm: t_0 must be positive", degree=0)
    g = np.zeros((n, n), dtype=np.complex128)
    u = s / np.sqrt(s[0].real)
    v = u.copy()
    v[0] = 0.0
    for k in range(n):
        g[k:, k] = u[k:]
        if k == n - 1:
            break
        u[k + 1:] = u[k:-1].copy()
        u[k] = 0.0
        rho = v[k + 1] / u[k + 1]
        if abs(rho) >= 1.0 - BREAKDOWN_TOL:
            raise NotPositiveDefinite(
                f"Schur algorithm broke down at degree {k + 1}", degree=k + 1)
        c = np.sqrt(1.0 - abs(rho) ** 2)
        u_new = (u[k + 1:] - np.conj(rho) * v[k + 1:]) / c
        v[k + 1:] = (v[k + 1:] - rho * u[k + 1:]) / c
        u[k + 1:] = u_new
        u[k + 1] = u[k + 1].real
    gg = g[::-1, ::-1]
    return np.ascontiguousarray(gg.conj().T)
