"""Orthogonal polynomials of a measure on the circle and their link to Hankel DMD.

Inner products follow ``<p, q> = int p(z) conj(q(z)) dmu``, so the monomial Gram
matrix is ``<z^a, z^b> = m_{a-b}``. The monic orthogonal polynomial of
degree ``N`` is the characteristic polynomial of the compression of the
Koopman operator to ``span(f, Uf, ..., U^{N-1} f)``.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._errors import BasisDegenerate, InvalidArgument, NotPositiveDefinite, NumericalFailure
from .toeplitz import BREAKDOWN_TOL, HermitianToeplitz, levinson_solve, szego_recursion


@dataclass(frozen=True, eq=False)
class PolynomialBasis:
    """Orthonormal polynomials ``phi_0..phi_N`` as rows of a lower-triangular matrix.

    ``coeffs[i, j]`` is the coefficient of ``z^j`` in ``phi_i``.
    """

    coeffs: np.ndarray

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    def __call__(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        powers = z[None, :] ** np.arange(self.order + 1)[:, None]
        return self.coeffs @ powers


@dataclass(frozen=True, eq=False)
class MonicPolynomial:
    """``z^N + sum_{j<N} a_j z^j`` with ``a_0..a_{N-1}`` stored ascending."""

    lower: np.ndarray

    @property
    def degree(self):
        return self.lower.size

    @property
    def coeffs(self):
        """All coefficients ascending, including the leading 1."""
        return np.concatenate([self.lower, [1.0 + 0j]])

    def __call__(self, z):
        return np.polyval(self.coeffs[::-1], z)


@dataclass(frozen=True, eq=False)
class SpectrumEstimate:
    """Zeros of a polynomial, listed with multiplicity."""

    zeros: np.ndarray

    def to_json(self):
        return json.dumps({"zeros": [[float(z.real), float(z.imag)] for z in self.zeros]})


def _check_order(m, n):
    if m.modified:
        raise InvalidArgument("expected the moments of the measure itself, not modified ones")
    if not 0 <= n <= m.order:
        raise InvalidArgument(f"degree {n} needs moments up to m_{n}, have m_{m.order}")


def _predictors(m, n):
    """Rows ``a_0..a_n`` of the Szego recursion and the errors ``E_0..E_n``."""
    t = m.values[: n + 1]
    try:
        _, refl, err = szego_recursion(HermitianToeplitz(t))
    except NotPositiveDefinite as exc:
        raise BasisDegenerate(
            f"monomials are dependent beyond degree {exc.degree - 1}",
            max_degree=exc.degree - 1) from exc
    rows = np.zeros((n + 1, n + 1), dtype=np.complex128)
    a = np.zeros(n + 1, dtype=np.complex128)
    a[0] = 1.0
    rows[0, 0] = 1.0
    for k in range(n):
        calpha = np.conj(refl[k])
        prev = a[: k + 1].copy()
        a[k + 1] = prev[k]
        a[1:k + 1] = prev[:k] - calpha * np.conj(prev[k - 1::-1] if k else prev[:0])
        a[0] = -calpha * np.conj(prev[k])
        rows[k + 1, : k + 2] = a[: k + 2]
    return rows, err


def orthonormal_basis(m, n=None):
    """Orthonormal polynomials up to degree ``n``.

    Row ``i`` is the monic orthogonal polynomial of degree ``i`` divided by
    the square root of its norm, which is the unique lower-triangular ``C``
    with positive diagonal and ``C T C^H = I`` for the moment matrix ``T``.

    Raises
    ------
    BasisDegenerate
        When the moment matrix is not positive definite; ``max_degree`` is the
        largest degree that still works.
    """
    n = m.order if n is None else n
    _check_order(m, n)
    rows, err = _predictors(m, n)
    if not np.all(err > 0):
        bad = int(np.argmax(~(err > 0)))
        raise BasisDegenerate(f"zero norm at degree {bad}", max_degree=bad - 1)
    c = rows / np.sqrt(err)[:, None]
    c.setflags(write=False)
    return PolynomialBasis(c)


def monic_orthogonal(m, n=None):
    """Monic orthogonal polynomial of degree ``n`` (default ``N``)."""
    n = m.order if n is None else n
    _check_order(m, n)
    if n == 0:
        return MonicPolynomial(np.zeros(0, dtype=np.complex128))
    try:
        a, _, _ = szego_recursion(HermitianToeplitz(m.values[: n + 1]))
    except NotPositiveDefinite as exc:
        raise BasisDegenerate(
            f"monomials are dependent beyond degree {exc.degree - 1}",
            max_degree=exc.degree - 1) from exc
    return MonicPolynomial(np.array(a[:n]))


def poly_roots(p, tol=1e-14, max_iter=500):
    """All zeros of a monic polynomial by Aberth-Ehrlich iteration.

    Starting points lie on a circle of radius ``(1 + max|a_j|)^(1/N)`` with
    an irrational angular offset so no start coincides with a symmetric zero.

    Raises
    ------
    NumericalFailure
        If the residual ``|p(z)|`` exceeds ``1e-8 (1 + max|a_j|) max(1, |z|)^N``
        at some returned root.
    """
    n = p.degree
    if n < 1:
        raise InvalidArgument("degree must be at least 1")
    coeffs = np.ascontiguousarray(p.coeffs)
    scale = 1.0 + float(np.abs(p.lower).max(initial=0.0))
    radius = scale ** (1.0 / n)
    z = radius * np.exp(2j * np.pi * (np.arange(n) + 0.4142135623730951) / n)
    z = np.ascontiguousarray(z, dtype=np.complex128)
    it = _kernels.impl.aberth(coeffs, z, tol, max_iter)
    # bound 1e-8 (1 + max|a_j|) inside the closed unit disk, grown by |z|^N outside
    bound = 1e-8 * scale * np.maximum(1.0, np.abs(z)) ** n
    resid = np.abs(p(z))
    if not np.all(resid <= bound):
        worst = int(np.argmax(resid / bound))
        msg = f"residual {resid[worst]:.3g} at {z[worst]:.6g} exceeds {bound[worst]:.3g}"
        if it < 0:
            raise NumericalFailure(f"root finder did not converge in {max_iter} iterations ({msg})")
        raise NumericalFailure(f"root {msg}")
    return SpectrumEstimate(z)


def finite_section_matrix(m, n=None):
    """Matrix of the compressed Koopman operator in the basis ``U^j f``, ``j < N``.

    The Gram matrix is ``G[l, i] = <U^i f, U^l f> = m_{i-l}`` and column ``j``
    solves ``G u = (m_{j+1-l})_l``. For ``j < N - 1`` the right-hand side is
    column ``j + 1`` of ``G``, so those columns are unit vectors; only the last
    column needs a Toeplitz solve. The result is a companion matrix whose
    characteristic polynomial is ``z^N - sum_i u_i z^i``.
    """
    n = m.order if n is None else n
    if n < 1:
        raise InvalidArgument("N must be at least 1")
    _check_order(m, n)
    vals = m.values
    g = HermitianToeplitz(np.conj(vals[:n]))
    rhs = vals[n:0:-1].copy()  # m_{N-l} for l = 0..N-1
    try:
        last = levinson_solve(g, rhs)
    except NotPositiveDefinite as exc:
        raise BasisDegenerate(
            f"Gram matrix is singular beyond degree {exc.degree - 1}",
            max_degree=exc.degree - 1) from exc
    u = np.zeros((n, n), dtype=np.complex128)
    u[np.arange(1, n), np.arange(n - 1)] = 1.0
    u[:, -1] = last
    return u


def hankel_dmd(traj, n):
    """Hankel DMD matrix from a single trajectory.

    With a common window ``i = 0..M-N-1`` of delay vectors,
    ``G[p, l] = avg y_{i+l} conj(y_{i+p})`` and
    ``A[p, j] = avg y_{i+j+1} conj(y_{i+p})``; the result is ``G^{-1} A``,
    solved densely.

    Raises
    ------
    BasisDegenerate
        If ``G`` is numerically singular.
    """
    y = traj.samples
    m = y.size
    if n < 1:
        raise InvalidArgument("N must be at least 1")
    if m < 2 * n + 2:
        raise InvalidArgument(f"need M >= 2N + 2, got M={m}, N={n}")
    w = m - n
    delay = np.stack([y[j:j + w] for j in range(n + 1)])  # (n+1, w)
    full = (np.conj(delay) @ delay.T) / w  # full[p, l] = avg conj(y_{i+p}) y_{i+l}
    g = full[:n, :n]
    a = full[:n, 1:n + 1]
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise BasisDegenerate("empirical Gram matrix is not positive definite") from exc
    if np.linalg.cond(g) > 1.0 / (1e3 * BREAKDOWN_TOL):
        raise BasisDegenerate("empirical Gram matrix is numerically singular")
    return np.linalg.solve(g, a)


def companion_roots(u, tol=1e-8):
    """Eigenvalues of a companion-form matrix through its characteristic polynomial.

    ``u`` must have unit subdiagonal and zeros elsewhere outside the last
    column (as returned by :func:`finite_section_matrix` and, up to
    rounding, :func:`hankel_dmd`). The eigenvalues are the zeros of
    ``z^N - sum_i u[i, -1] z^i``.
    """
    u = np.asarray(u, dtype=np.complex128)
    n = u.shape[0]
    shape = np.zeros((n, n))
    shape[np.arange(1, n), np.arange(n - 1)] = 1.0
    dev = np.abs(u[:, :-1] - shape[:, :-1]).max(initial=0.0)
    if dev > tol * max(1.0, float(np.abs(u).max())):
        raise InvalidArgument(f"matrix is not in companion form (deviation {dev:.3g})")
    return poly_roots(MonicPolynomial(-u[:, -1].copy()))
