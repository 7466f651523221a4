"""Built-in test systems and trajectory file I/O.

* Arnold cat map on the 2-torus, ``x1' = 2 x1 + x2``, ``x2' = x1 + x2`` (mod 1),
  with observables that are finite sums of Fourier modes.
* Lorenz system with the classical parameters ``(10, 28, 8/3)``, integrated
  by fixed-step RK4.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._errors import DivergenceError, InvalidArgument, ParseError
from .moments import Trajectory

TWO_PI = 2.0 * np.pi

# (amplitude, (n1, n2)) pairs: f(x) = sum a exp(i 2 pi (n1 x1 + n2 x2))
CAT_OBSERVABLES = {
    "f1": ((1.0, (2, 1)), (0.5, (5, 3))),
    "f2": ((1.0, (2, 1)), (0.5, (5, 3)), (0.25, (13, 8))),
}

# analytic moments of the spectral measures of the two cat-map observables
CAT_MOMENTS = {
    "f1": (5 / 4, 1 / 2),
    "f2": (21 / 16, 5 / 8, 1 / 4),
}


@dataclass(frozen=True)
class CatMapState:
    x1: float
    x2: float

    def __post_init__(self):
        for v in (self.x1, self.x2):
            if not 0.0 <= v < 1.0:
                raise InvalidArgument("cat-map coordinates must lie in [0, 1)")


@dataclass(frozen=True)
class LorenzState:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.x1, self.x2, self.x3])):
            raise InvalidArgument("Lorenz state must be finite")


def cat_map_step(state):
    """One application of the cat map."""
    return CatMapState(float(np.fmod(2.0 * state.x1 + state.x2, 1.0)),
                       float(np.fmod(state.x1 + state.x2, 1.0)))


def cat_map_orbit(x0, m):
    """States ``x_0..x_{M-1}`` as an ``(M, 2)`` array."""
    if m < 1:
        raise InvalidArgument("M must be >= 1")
    return _kernels.impl.cat_map_orbit(float(x0.x1), float(x0.x2), int(m))


def fourier_observable(modes):
    """Observable ``x -> sum a exp(i 2 pi (n1 x1 + n2 x2))`` for ``modes = [(a, (n1, n2)), ...]``."""
    modes = tuple((complex(a), (int(n[0]), int(n[1]))) for a, n in modes)

    def f(states):
        states = np.atleast_2d(states)
        out = np.zeros(states.shape[0], dtype=np.complex128)
        for a, (n1, n2) in modes:
            out += a * np.exp(1j * TWO_PI * (n1 * states[:, 0] + n2 * states[:, 1]))
        return out

    return f


def cat_map_trajectory(x0, m, observable="f1"):
    """Observable values along a cat-map orbit.

    Parameters
    ----------
    x0 : CatMapState
    m : int
        Number of samples ``M``.
    observable : str or sequence
        ``"f1"``, ``"f2"`` or a list of ``(amplitude, (n1, n2))`` Fourier modes.

    Returns
    -------
    Trajectory
        ``sample_period = 1``.
    """
    modes = CAT_OBSERVABLES.get(observable) if isinstance(observable, str) else observable
    if modes is None:
        raise InvalidArgument(f"unknown cat-map observable {observable!r}")
    return Trajectory(fourier_observable(modes)(cat_map_orbit(x0, m)), 1.0)


def lorenz_field(x):
    """Lorenz vector field at ``x = (x1, x2, x3)``."""
    x1, x2, x3 = x
    return np.array([10.0 * (x2 - x1), x1 * (28.0 - x3) - x2, x1 * x2 - (8.0 / 3.0) * x3])


def lorenz_states(x0, m, ts=0.2, substeps=20, transient=100.0, bound=1e6):
    """Lorenz states sampled every ``ts`` after discarding ``transient`` time units.

    Integration uses fixed-step RK4 with step ``h = ts / substeps``.

    Returns
    -------
    ndarray, shape (M, 3)

    Raises
    ------
    DivergenceError
        If any coordinate exceeds ``bound`` in magnitude.
    """
    if m < 1 or not ts > 0 or substeps < 1 or transient < 0:
        raise InvalidArgument("need M >= 1, ts > 0, substeps >= 1, transient >= 0")
    h = ts / substeps
    n_transient = int(round(transient / h))
    out, fail = _kernels.impl.lorenz_rk4(float(x0.x1), float(x0.x2), float(x0.x3), int(m),
                                         float(h), int(substeps), n_transient, float(bound))
    if fail >= 0:
        raise DivergenceError(f"Lorenz state exceeded {bound:g} at step {fail}")
    return out


def lorenz_trajectory(x0, m, ts=0.2, substeps=20, observable="x1", transient=100.0):
    """Samples of one Lorenz coordinate (``"x1"``, ``"x2"`` or ``"x3"``)."""
    idx = {"x1": 0, "x2": 1, "x3": 2}.get(observable)
    if idx is None:
        raise InvalidArgument(f"unknown Lorenz observable {observable!r}")
    states = lorenz_states(x0, m, ts, substeps, transient)
    return Trajectory(states[:, idx], ts)


def random_cat_state(seed):
    rng = np.random.default_rng(seed)
    return CatMapState(*rng.random(2))


def random_lorenz_state(seed):
    rng = np.random.default_rng(seed)
    return LorenzState(*(rng.standard_normal(3) + np.array([0.0, 0.0, 20.0])))


def write_trajectory(path_or_buf, traj):
    """Write ``index,re,im`` CSV with round-trip float formatting."""
    lines = ["index,re,im"]
    for i, z in enumerate(traj.samples):
        lines.append(f"{i},{float(z.real)!r},{float(z.imag)!r}")
    text = "\r\n".join(lines) + "\r\n"
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(text)
    else:
        with open(path_or_buf, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def parse_trajectory(text, sample_period=1.0):
    """Parse ``index,re[,im]`` CSV text into a :class:`Trajectory`.

    Raises
    ------
    ParseError
        With the offending line number.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("line 1: empty file") from None
    if header not in (["index", "re"], ["index", "re", "im"]):
        raise ParseError(f"line 1: expected header 'index,re,im' or 'index,re', got {','.join(header)!r}")
    has_im = len(header) == 3
    values = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            idx = int(row[0])
            re = float(row[1])
            im = float(row[2]) if has_im else 0.0
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if idx != len(values):
            raise ParseError(f"line {lineno}: index {idx} out of sequence")
        if not (np.isfinite(re) and np.isfinite(im)):
            raise ParseError(f"line {lineno}: non-finite sample")
        values.append(complex(re, im))
    if not values:
        raise ParseError("no samples")
    return Trajectory(np.array(values), sample_period)


def load_trajectory(path, sample_period=1.0):
    """Read a trajectory CSV file."""
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_trajectory(fh.read(), sample_period)


def save_grid(path, grid):
    """Write a :class:`~koopspec.cd_kernel.GridFunction` as JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(grid.to_json())
