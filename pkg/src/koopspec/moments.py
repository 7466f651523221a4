"""Truncated trigonometric moment sequences of positive measures on the circle.

A measure on [0, 1] (identified with the unit circle through
``theta -> exp(i 2 pi theta)``) is summarized by ``m_k = int exp(i 2 pi k theta) dmu``
for ``k = 0..N``; negative indices follow from ``m_{-k} = conj(m_k)``.
"""

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._errors import InvalidArgument, InvalidData

TWO_PI = 2.0 * np.pi


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """Moments ``m_0..m_N`` of a positive measure on [0, 1].

    Parameters
    ----------
    values : array_like of complex
        ``m_0, ..., m_N``. ``m_0`` must be real and nonnegative; tiny imaginary
        parts from rounding are dropped.
    modified : bool
        True when one unit of Lebesgue measure has been added (``m_0 + 1``).
    """

    values: np.ndarray
    modified: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128).ravel()
        if v.size == 0:
            raise InvalidArgument("a moment sequence needs at least m_0")
        if not np.all(np.isfinite(v)):
            raise InvalidData("moments must be finite")
        if abs(v[0].imag) > 1e-12 * max(1.0, abs(v[0].real)):
            raise InvalidData(f"m_0 must be real, got {v[0]}")
        if v[0].real < 0:
            raise InvalidData(f"m_0 must be nonnegative, got {v[0].real}")
        v[0] = v[0].real
        object.__setattr__(self, "values", _frozen(v, np.complex128))

    @property
    def order(self):
        return self.values.size - 1

    @property
    def mass(self):
        return float(self.values[0].real)

    def __len__(self):
        return self.values.size

    def two_sided(self):
        """Return ``m_{-N}..m_N`` as one array."""
        return np.concatenate([np.conj(self.values[:0:-1]), self.values])

    def truncate(self, n):
        """Sequence of the same measure up to order ``n``."""
        if not 0 <= n <= self.order:
            raise InvalidArgument(f"cannot truncate order {self.order} to {n}")
        return MomentSequence(self.values[: n + 1], self.modified)

    def to_json(self):
        return json.dumps({
            "order": self.order,
            "modified": self.modified,
            "values": [[float(z.real), float(z.imag)] for z in self.values],
        })

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        vals = np.array([complex(re, im) for re, im in d["values"]])
        if len(vals) != d["order"] + 1:
            raise InvalidData("'order' does not match the number of values")
        return cls(vals, bool(d["modified"]))


@dataclass(frozen=True, eq=False)
class AtomList:
    """Point masses ``sum_j w_j delta_{theta_j}`` on [0, 1].

    An atom may sit at 0 or at 1; both denote the same point of the circle.
    """

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        loc = np.array(self.locations, dtype=np.float64).ravel()
        w = np.array(self.weights, dtype=np.float64).ravel()
        if loc.shape != w.shape:
            raise InvalidArgument("locations and weights differ in length")
        if np.any((loc < 0) | (loc > 1)) or not np.all(np.isfinite(loc)):
            raise InvalidArgument("atom locations must lie in [0, 1]")
        if np.any(~(w > 0)) or not np.all(np.isfinite(w)):
            raise InvalidArgument("atom weights must be positive")
        object.__setattr__(self, "locations", _frozen(loc, np.float64))
        object.__setattr__(self, "weights", _frozen(w, np.float64))

    @classmethod
    def of(cls, pairs):
        """Build from an iterable of ``(theta, weight)`` pairs."""
        pairs = list(pairs)
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    @property
    def mass(self):
        return float(self.weights.sum())

    def cdf(self, t):
        """Cumulative mass on ``[0, t]``, an atom at 0 or 1 split evenly between both ends."""
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        for theta, w in zip(self.locations, self.weights):
            if theta in (0.0, 1.0):
                out = out + 0.5 * w * (1.0 + (t >= 1.0))
            else:
                out = out + w * (t >= theta)
        return out


@dataclass(frozen=True, eq=False)
class PiecewiseDensity:
    """Piecewise-constant density: level ``c`` on each interval ``[a, b)``."""

    pieces: tuple

    def __post_init__(self):
        pieces = tuple(sorted((float(a), float(b), float(c)) for a, b, c in self.pieces))
        prev = 0.0
        for a, b, c in pieces:
            if not 0.0 <= a < b <= 1.0:
                raise InvalidArgument(f"bad interval [{a}, {b})")
            if a < prev:
                raise InvalidArgument("density pieces overlap")
            if c < 0:
                raise InvalidArgument("density levels must be nonnegative")
            prev = b
        object.__setattr__(self, "pieces", pieces)

    @property
    def mass(self):
        return sum(c * (b - a) for a, b, c in self.pieces)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        out = np.zeros_like(theta)
        for a, b, c in self.pieces:
            out = out + c * ((theta >= a) & (theta < b))
        return out

    def cdf(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        for a, b, c in self.pieces:
            out = out + c * (np.clip(t, a, b) - a)
        return out


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples ``y_1..y_M`` of an observable along one orbit.

    Parameters
    ----------
    samples : array_like of complex
    sample_period : float
        Time between samples (1 for maps).
    """

    samples: np.ndarray
    sample_period: float = 1.0

    def __post_init__(self):
        y = np.array(self.samples, dtype=np.complex128).ravel()
        if y.size < 1:
            raise InvalidData("a trajectory needs at least one sample")
        if not np.all(np.isfinite(y)):
            raise InvalidData("trajectory samples must be finite")
        if not self.sample_period > 0:
            raise InvalidArgument("sample_period must be positive")
        object.__setattr__(self, "samples", _frozen(y, np.complex128))
        object.__setattr__(self, "sample_period", float(self.sample_period))

    def __len__(self):
        return self.samples.size


def estimate_moments(traj, order):
    """Ergodic-average moment estimates from a single trajectory.

    ``m_k = (1 / (M - k)) sum_{i=1}^{M-k} y_{i+k} conj(y_i)``.

    Parameters
    ----------
    traj : Trajectory
    order : int
        Highest moment index ``N``; needs ``N < M``.

    Returns
    -------
    MomentSequence
    """
    y = traj.samples
    m = y.size
    if not 0 <= order < m:
        raise InvalidArgument(f"order N={order} requires 0 <= N < M={m}")
    if m < 10 * order:
        warnings.warn(f"M={m} < 10*N={10 * order}; high-order moments will be noisy",
                      stacklevel=2)
    # one dot product per lag: O(N M), no FFT wrap-around or padding
    corr = np.array([np.vdot(y[: m - k], y[k:]) for k in range(order + 1)])
    corr[0] = corr[0].real
    return MomentSequence(corr / (m - np.arange(order + 1)))


def atomic_moments(atoms, order):
    """Moments of ``sum_j w_j delta_{theta_j}``."""
    k = np.arange(order + 1)
    ph = np.exp(1j * TWO_PI * np.outer(k, atoms.locations))
    return MomentSequence(ph @ atoms.weights)


def ac_moments(density, order):
    """Closed-form moments of a piecewise-constant density."""
    k = np.arange(1, order + 1)
    vals = np.zeros(order + 1, dtype=np.complex128)
    for a, b, c in density.pieces:
        vals[0] += c * (b - a)
        vals[1:] += c * (np.exp(1j * TWO_PI * b * k) - np.exp(1j * TWO_PI * a * k)) / (1j * TWO_PI * k)
    return MomentSequence(vals)


def cantor_moments(order):
    """Moments of the middle-thirds Cantor measure on [0, 1].

    ``m_k = exp(i pi k) prod_{n >= 1} cos(2 pi k / 3^n)``, the product cut off once
    the cosine argument falls below 1e-12.
    """
    k = np.arange(order + 1, dtype=np.float64)
    prod = np.ones(order + 1)
    scale = TWO_PI / 3.0
    kmax = max(float(order), 1.0)
    while scale * kmax >= 1e-12:
        prod *= np.cos(scale * k)
        scale /= 3.0
    return MomentSequence(np.exp(1j * np.pi * k) * prod)


def combine(a, b, sign=1):
    """Elementwise ``a + sign * b`` for two unmodified sequences of equal order."""
    if sign not in (1, -1):
        raise InvalidArgument("sign must be +1 or -1")
    if a.order != b.order:
        raise InvalidArgument(f"order mismatch: {a.order} vs {b.order}")
    if a.modified or b.modified:
        raise InvalidArgument("cannot combine modified sequences")
    vals = a.values + sign * b.values
    if vals[0].real < 0:
        raise InvalidData("combination has negative mass")
    return MomentSequence(vals)


def modify(m):
    """Add one unit of Lebesgue measure: ``m_0 -> m_0 + 1``."""
    if m.modified:
        raise InvalidArgument("sequence is already modified")
    vals = m.values.copy()
    vals[0] += 1.0
    return MomentSequence(vals, modified=True)
