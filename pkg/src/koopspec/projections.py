"""Approximate spectral projections as tap filters along a trajectory.

A projection onto a set ``A`` of frequencies is approximated by taps
``alpha_{-N..N}`` such that ``p(theta) = sum_k alpha_k exp(i 2 pi theta k)``
approximates the indicator of ``A``. Applied to samples it gives
``z_j = sum_k alpha_k y_{j+k}``.
"""

import json
import warnings
from dataclasses import dataclass

import numpy as np

from ._errors import InvalidArgument
from .cd_kernel import build_evaluator, uniform_grid
from .moments import AtomList, atomic_moments, combine, MomentSequence, Trajectory
from .weak_approx import quadrature

TWO_PI = 2.0 * np.pi
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Singleton:
    theta: float


@dataclass(frozen=True)
class Interval:
    a: float
    b: float


def _cis_neg(theta, k):
    """``exp(-i 2 pi theta k)`` with the phase reduced mod 1 first."""
    return np.exp(-1j * TWO_PI * np.mod(theta * k, 1.0))


@dataclass(frozen=True, eq=False)
class ProjectionCoefficients:
    """Taps ``alpha_{-N}..alpha_N`` stored at index ``k + N``.

    Attributes
    ----------
    taps : ndarray of complex, length ``2 N + 1``
    target : object
        Description of the set, e.g. a :class:`Singleton`, an
        :class:`Interval` or a tuple of such pieces.
    """

    taps: np.ndarray
    target: object = None

    @property
    def order(self):
        return (self.taps.size - 1) // 2

    def __add__(self, other):
        if self.order != other.order:
            raise InvalidArgument("tap orders differ")
        return ProjectionCoefficients(self.taps + other.taps, (self.target, other.target))

    def __sub__(self, other):
        if self.order != other.order:
            raise InvalidArgument("tap orders differ")
        return ProjectionCoefficients(self.taps - other.taps, (self.target, ("minus", other.target)))

    def scaled(self, factor):
        return ProjectionCoefficients(factor * self.taps, self.target)


def singleton_coeffs(theta0, order, double_sided=False):
    """Taps for the singleton ``{theta0}``.

    The default one-sided form is ``alpha_k = exp(-i 2 pi k theta0) / (N + 1)``
    for ``0 <= k <= N``. ``double_sided=True`` spreads ``1 / (2 N + 1)`` over
    ``|k| <= N`` instead.
    """
    if not 0.0 <= theta0 <= 1.0:
        raise InvalidArgument(f"theta0={theta0} outside [0, 1]")
    if order < 0:
        raise InvalidArgument("order must be nonnegative")
    k = np.arange(-order, order + 1)
    taps = _cis_neg(theta0, k)
    if double_sided:
        taps = taps / (2 * order + 1)
    else:
        taps = np.where(k >= 0, taps / (order + 1), 0.0)
    return ProjectionCoefficients(taps, Singleton(float(theta0)))


def interval_coeffs(a, b, order, double_sided=False):
    """Taps for the arc ``[a, b)``.

    Fejer-weighted Fourier coefficients of the indicator, corrected by half
    a singleton at each end so the value is 1 at ``a`` and 0 at ``b``.
    ``double_sided`` selects the form of those singleton corrections; with
    ``True`` the taps are Hermitian and the indicator approximation is real.
    """
    if not 0.0 <= a < b <= 1.0:
        raise InvalidArgument(f"need 0 <= a < b <= 1, got [{a}, {b})")
    if order < 1:
        raise InvalidArgument("interval taps need order >= 1")
    k = np.arange(-order, order + 1)
    beta = np.empty(k.size, dtype=np.complex128)
    nz = k != 0
    kk = k[nz]
    beta[nz] = ((order - np.abs(kk)) / order * (1j / (TWO_PI * kk))
                * (_cis_neg(b, kk) - _cis_neg(a, kk)))
    beta[order] = b - a
    taps = (0.5 * singleton_coeffs(a, order, double_sided).taps + beta
            - 0.5 * singleton_coeffs(b, order, double_sided).taps)
    return ProjectionCoefficients(taps, Interval(float(a), float(b)))


def indicator_approx(c, theta):
    """``sum_k alpha_k exp(i 2 pi theta k)``; complex, vectorized over ``theta``."""
    scalar = np.ndim(theta) == 0
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    k = np.arange(-c.order, c.order + 1)
    vals = np.exp(1j * TWO_PI * np.mod(np.outer(theta, k), 1.0)) @ c.taps
    return complex(vals[0]) if scalar else vals


def apply_projection(traj, c):
    """Filter a trajectory: ``z_j = sum_{k=-N}^N alpha_k y_{j+k}``.

    Only the window where every tap has data is returned, i.e. samples
    ``N+1..M-N`` in 1-based indexing (length ``M - 2N``).
    """
    y = traj.samples
    n = c.order
    if 2 * n >= y.size:
        raise InvalidArgument(f"need 2N < M, got N={n}, M={y.size}")
    z = np.convolve(y, c.taps[::-1], mode="valid")
    return Trajectory(z, traj.sample_period)


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint singletons and arcs covering [0, 1], each with a representative frequency."""

    elements: tuple
    representatives: tuple

    def __post_init__(self):
        if len(self.elements) != len(self.representatives):
            raise InvalidArgument("one representative per element is required")
        ivs = sorted((e.a, e.b) for e in self.elements if isinstance(e, Interval))
        if not ivs or ivs[0][0] != 0.0 or ivs[-1][1] != 1.0:
            raise InvalidArgument("intervals must cover [0, 1)")
        for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
            if b0 != a1:
                raise InvalidArgument("intervals must be contiguous and disjoint")
        pts = [e.theta for e in self.elements if isinstance(e, Singleton)]
        if len(set(pts)) != len(pts):
            raise InvalidArgument("duplicate singleton")

    def coefficients(self, order):
        """Taps of every element, with singletons removed from the arcs containing them."""
        singles = [e.theta for e in self.elements if isinstance(e, Singleton)]
        out = []
        for e in self.elements:
            if isinstance(e, Singleton):
                out.append(singleton_coeffs(e.theta, order))
                continue
            c = interval_coeffs(e.a, e.b, order)
            for th in singles:
                # theta = 1 is the same point as theta = 0
                if e.a <= th < e.b or (th == 1.0 and e.a == 0.0):
                    c = c - singleton_coeffs(th, order)
            out.append(c)
        return out

    def to_json(self):
        els = []
        for e in self.elements:
            if isinstance(e, Singleton):
                els.append({"type": "singleton", "theta": e.theta})
            else:
                els.append({"type": "interval", "a": e.a, "b": e.b})
        return json.dumps({"elements": els, "representatives": list(self.representatives)})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        els = tuple(Singleton(e["theta"]) if e["type"] == "singleton" else Interval(e["a"], e["b"])
                    for e in d["elements"])
        return cls(els, tuple(d["representatives"]))


def _golden_max(f, lo, hi, tol=1e-10):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def detect_atoms(evaluator, threshold, grid_size=None):
    """Local maxima of the atom estimate above ``threshold``, refined by golden section.

    The circle is treated periodically, so a peak at 0 is reported once (at 0).

    Returns
    -------
    AtomList or None
        Locations and estimated masses; ``None`` when nothing passes.
    """
    n = evaluator.order
    size = 10 * n + 1 if grid_size is None else grid_size
    th = uniform_grid(size)
    v = evaluator.atoms(th)[:-1]  # drop theta = 1, the same point as 0
    h = th[1]
    left = np.roll(v, 1)
    right = np.roll(v, -1)
    peaks = np.flatnonzero((v >= left) & (v > right) & (v >= threshold))
    found = []

    def f(t):
        return float(evaluator.atoms(np.mod(t, 1.0))[0])

    for p in peaks:
        t = _golden_max(f, th[p] - h, th[p] + h)
        t = float(np.mod(t, 1.0))
        if t > 1.0 - 1e-9 or t < 1e-9:
            t = 0.0
        w = f(t)
        if w >= threshold:
            found.append((t, w))
    if not found:
        return None
    return AtomList.of(found)


def build_partition(m, k, evaluator=None, n_q=None, grid_size=None):
    """Partition of [0, 1] into atoms and equal-mass arcs.

    1. Atoms with estimated mass ``>= m_0 / K`` become singletons (at most
       ``K - 1`` of them, the heaviest, so at least one arc remains).
    2. The atoms' moments are subtracted and a quadrature of the remainder
       defines a CDF; arc endpoints are its generalized inverse at equally
       spaced mass levels.
    3. Each arc is represented by its conditional mean frequency under the
       quadrature (midpoint if empty); each singleton by itself.

    Parameters
    ----------
    m : MomentSequence
    k : int
        Number of elements ``K``.
    evaluator : CDEvaluator, optional
        Reused if given, otherwise built from ``m``.
    n_q : int, optional
        Quadrature grid size; default ``10 N``.
    grid_size : int, optional
        Grid for atom detection; default ``10 N + 1``.

    Returns
    -------
    Partition
    """
    if k < 1:
        raise InvalidArgument("K must be >= 1")
    if m.modified:
        raise InvalidArgument("expected an unmodified moment sequence")
    n = m.order
    atoms = None
    if k > 1 and n >= 1:
        evaluator = build_evaluator(m) if evaluator is None else evaluator
        atoms = detect_atoms(evaluator, m.mass / k, grid_size)
    if atoms is not None and atoms.weights.size > k - 1:
        warnings.warn(f"{atoms.weights.size} atoms exceed the threshold; keeping the "
                      f"{k - 1} heaviest", stacklevel=2)
        keep = np.argsort(atoms.weights)[::-1][: k - 1]
        atoms = AtomList(atoms.locations[keep], atoms.weights[keep])
    singles = [] if atoms is None else sorted(float(t) for t in atoms.locations)
    k_int = k - len(singles)

    rest = m
    if atoms is not None:
        vals = m.values - atomic_moments(atoms, n).values
        vals[0] = max(vals[0].real, 0.0)
        rest = MomentSequence(vals)
    q = quadrature(rest, n_q) if n >= 1 and rest.mass > 0 else None
    eta = None
    if q is not None:
        eta, gam = q.locations, q.weights.copy()
        gam[0] += gam[-1]  # eta = 1 is the same point as eta = 0
        gam[-1] = 0.0
        cum = np.cumsum(gam)
        total = cum[-1]
    edges = [0.0]
    if q is not None and total > 0:
        for j in range(1, k_int):
            idx = int(np.searchsorted(cum, j * total / k_int - 1e-14 * total))
            # the atom where the CDF crosses the level stays in the left arc
            a = float(eta[min(idx + 1, eta.size - 1)])
            if a > edges[-1] and a < 1.0:
                edges.append(a)
    if len(edges) < k_int:  # degenerate remainder: fall back to equal widths
        edges = list(np.arange(k_int) / k_int)
    edges.append(1.0)

    elements, reps = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        elements.append(Interval(float(a), float(b)))
        rep = 0.5 * (a + b)
        if q is not None:
            sel = (eta >= a) & (eta < b)
            wsum = gam[sel].sum()
            if wsum > 0:
                rep = float(np.dot(eta[sel], gam[sel]) / wsum)
        reps.append(rep)
    for t in singles:
        elements.append(Singleton(t))
        reps.append(t)
    return Partition(tuple(elements), tuple(reps))


def operator_coefficients(partition, order):
    """Taps of ``sum_j exp(i 2 pi theta_j) P_j``."""
    coeffs = partition.coefficients(order)
    taps = sum(np.exp(1j * TWO_PI * th) * c.taps
               for th, c in zip(partition.representatives, coeffs))
    return ProjectionCoefficients(taps, partition)


def apply_operator_approx(traj, partition, order):
    """Partition-based approximation of one step of the Koopman operator.

    Returns ``z_j = sum_elements exp(i 2 pi theta_j) (P_j y)_j`` on the same
    window as :func:`apply_projection`; ``z_j`` approximates ``y_{j+1}``.
    """
    return apply_projection(traj, operator_coefficients(partition, order))
