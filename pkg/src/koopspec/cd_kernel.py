"""Christoffel-Darboux kernel of the measure plus one unit of Lebesgue measure.

With ``B`` the inverse of the modified moment matrix, the kernel diagonal
``K(theta) = psi^H B psi`` (``psi_j = exp(i 2 pi theta j)``) is the
trigonometric polynomial ``sum_d c_d exp(i 2 pi theta d)`` whose coefficients are
the diagonal sums of ``B``. From it

* ``zeta(theta) = (N + 1) / K(theta) - 1`` tends to the AC density, and
* ``zeta(theta) / (N + 1)`` tends to the atom mass at ``theta``.
"""

import json
from dataclasses import dataclass

import numpy as np

from ._errors import InvalidArgument, InvalidData
from .moments import modify
from .toeplitz import HermitianToeplitz, trench_inverse

TWO_PI = 2.0 * np.pi
_CHUNK = 1 << 20  # grid points times coefficients per evaluation block


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real function sampled on a uniform grid over [0, 1].

    Parameters
    ----------
    theta : ndarray
        Increasing grid including both endpoints.
    values : ndarray
    """

    theta: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        th = np.array(self.theta, dtype=np.float64).ravel()
        v = np.array(self.values, dtype=np.float64).ravel()
        if th.shape != v.shape or th.size < 2:
            raise InvalidData("grid and values must have the same length >= 2")
        if np.any(np.diff(th) <= 0):
            raise InvalidData("grid must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise InvalidData("grid values must be finite")
        th.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "values", v)

    def __call__(self, t):
        """Piecewise-linear interpolation."""
        return np.interp(t, self.theta, self.values)

    def to_dict(self):
        return {"theta": self.theta.tolist(), "values": self.values.tolist()}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["theta"], d["values"])


def uniform_grid(size):
    """``size`` equispaced points on [0, 1] including both ends."""
    if size < 2:
        raise InvalidArgument(f"grid size must be >= 2, got {size}")
    return np.linspace(0.0, 1.0, int(size))


def trig_eval(coeffs, theta, hermitian=True):
    """Evaluate ``sum_k coeffs[k] exp(i 2 pi theta k)``.

    With ``hermitian=True`` the coefficients are ``c_0..c_N`` of a real
    polynomial (``c_{-k} = conj(c_k)``) and the real value
    ``c_0 + 2 Re sum_{k>=1} c_k exp(i 2 pi theta k)`` is returned.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    k = np.arange(coeffs.size, dtype=np.float64)
    out = np.empty(theta.size, dtype=np.float64 if hermitian else np.complex128)
    step = max(1, _CHUNK // max(coeffs.size, 1))
    for s in range(0, theta.size, step):
        # reduce theta*k mod 1 before exponentiating to keep phases accurate
        ph = np.exp(1j * TWO_PI * np.mod(np.outer(theta[s:s + step], k), 1.0))
        if hermitian:
            out[s:s + step] = coeffs[0].real + 2.0 * (ph[:, 1:] @ coeffs[1:]).real
        else:
            out[s:s + step] = ph @ coeffs
    return out


@dataclass(frozen=True, eq=False)
class CDEvaluator:
    """Diagonal of the modified Christoffel-Darboux kernel.

    Attributes
    ----------
    diag_sums : ndarray
        ``c_0..c_N`` with ``c_d = sum_{l-j=d} B[j, l]``.
    base_mass : float
        ``m_0`` of the unmodified measure.
    """

    diag_sums: np.ndarray
    base_mass: float

    @property
    def order(self):
        return self.diag_sums.size - 1

    def kernel(self, theta):
        """``K(theta)``, real and positive."""
        return trig_eval(self.diag_sums, theta)

    def zeta(self, theta):
        return (self.order + 1) / self.kernel(theta) - 1.0

    def atoms(self, theta):
        return self.zeta(theta) / (self.order + 1)


def build_evaluator(m):
    """Build the kernel evaluator of an unmodified moment sequence.

    Parameters
    ----------
    m : MomentSequence
        Moments ``m_0..m_N`` of the measure (not yet modified).

    Returns
    -------
    CDEvaluator

    Raises
    ------
    NotPositiveDefinite
        When the modified moment matrix is numerically indefinite, which only
        happens for badly corrupted estimates.
    """
    if m.modified:
        raise InvalidArgument("pass the unmodified sequence; it is modified internally")
    b = trench_inverse(HermitianToeplitz.from_moments(modify(m)))
    n = b.shape[0]
    c = np.array([np.trace(b, offset=d) for d in range(n)])
    c[0] = c[0].real
    c.setflags(write=False)
    return CDEvaluator(c, m.mass)


def zeta(e, size):
    """``zeta_N`` on a uniform grid of ``size`` points."""
    th = uniform_grid(size)
    return GridFunction(th, e.zeta(th))


def atom_estimate(e, size):
    """Atom-mass estimate ``zeta_N / (N + 1)`` on a uniform grid."""
    th = uniform_grid(size)
    return GridFunction(th, e.atoms(th))


def f_zeta(z):
    """Cumulative trapezoidal integral of a ``zeta_N`` grid, starting at 0."""
    th, v = z.theta, z.values
    inc = 0.5 * (v[1:] + v[:-1]) * np.diff(th)
    return GridFunction(th, np.concatenate([[0.0], np.cumsum(inc)]))
