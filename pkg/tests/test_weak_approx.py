import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import nnls as scipy_nnls

from koopspec import (
    AtomList, GridFunction, InvalidArgument, QuadratureMeasure, atomic_moments,
    build_evaluator, cesaro_cdf, cesaro_coefficients, cesaro_density, f_zeta, modify,
    quadrature, quadrature_cdf, singularity_indicator, uniform_grid,
)
from koopspec.nnls import lawson_hanson

from corpus import CORPUS, acat, acat_cantor, acat_cantor_cdf, acat_cdf, lebesgue, single_atom


def dense_lh(a, b, **kw):
    g = a.T @ a
    return lawson_hanson(a.T @ b, lambda idx, j: g[idx, j], np.diag(g).copy(),
                         lambda x: g @ x, btb=float(b @ b), **kw)


class TestLawsonHanson:
    def test_against_scipy(self, backend, rng):
        for _ in range(25):
            m, n = rng.integers(3, 30, size=2)
            a = rng.standard_normal((m, n))
            b = rng.standard_normal(m)
            x, obj, _ = dense_lh(a, b)
            ref, rnorm = scipy_nnls(a, b)
            assert np.all(x >= 0)
            assert obj == pytest.approx(rnorm**2, rel=1e-8, abs=1e-10)
            if m >= n:  # unique minimizer
                np.testing.assert_allclose(x, ref, atol=1e-8)

    def test_kkt(self, backend, rng):
        a = rng.standard_normal((40, 60))
        b = rng.standard_normal(40)
        x, _, _ = dense_lh(a, b)
        grad = a.T @ (b - a @ x)
        assert np.all(grad <= 1e-8)
        np.testing.assert_allclose(grad[x > 0], 0, atol=1e-8)

    def test_warm_start_same_answer(self, backend, rng):
        a = rng.standard_normal((30, 20))
        b = rng.standard_normal(30)
        x0, o0, _ = dense_lh(a, b)
        x1, o1, _ = dense_lh(a, b, passive0=np.flatnonzero(x0 > 0)[::2])
        assert o1 == pytest.approx(o0, rel=1e-10)
        np.testing.assert_allclose(x1, x0, atol=1e-9)


class TestCesaro:
    def test_coefficients(self):
        w = cesaro_coefficients(CORPUS["cat_f1"](3))
        np.testing.assert_allclose(w, [1.25, 0.75 * 0.5, 0, 0])

    def test_lebesgue(self):
        np.testing.assert_array_equal(cesaro_density(lebesgue(20), 51).values, 1.0)
        t = np.linspace(0, 1, 33)
        np.testing.assert_allclose(cesaro_cdf(lebesgue(20), t), t, atol=1e-15)

    @pytest.mark.parametrize("name", sorted(CORPUS))
    @pytest.mark.parametrize("n", [1, 50, 300])
    def test_endpoints_and_positivity(self, name, n):
        m = CORPUS[name](n)
        assert cesaro_cdf(m, 0.0) == 0.0
        assert abs(cesaro_cdf(m, 1.0) - m.mass) <= 1e-12
        assert cesaro_density(m, 10 * n + 1).values.min() >= -1e-10 * m.mass

    def test_half_mass_at_atom(self):
        m = single_atom(1000, 0.5, 1.0)
        assert abs(cesaro_cdf(m, 0.5) - 0.5) <= 0.01

    def test_monotone(self, rng):
        m = acat_cantor(200)
        t = np.sort(rng.random((1000, 2)), axis=1)
        f = cesaro_cdf(m, t.ravel()).reshape(t.shape)
        assert np.all(f[:, 0] <= f[:, 1] + 1e-12)

    def test_weak_convergence(self):
        pts = np.array([0.1, 0.45, 0.5, 0.55, 0.9])
        errs = [np.abs(cesaro_cdf(acat(n), pts) - acat_cdf(pts)).max() for n in (100, 300, 1000)]
        assert errs[0] > errs[1] > errs[2]

    def test_domain(self):
        with pytest.raises(InvalidArgument):
            cesaro_cdf(lebesgue(3), 1.5)
        with pytest.raises(InvalidArgument):
            cesaro_coefficients(modify(lebesgue(3)))


class TestQuadrature:
    @pytest.mark.parametrize("n, n_q", [(5, 6), (10, 100), (30, 301)])
    def test_lebesgue(self, n, n_q):
        q = quadrature(lebesgue(n), n_q)
        assert q.residual <= 1e-10
        assert q.weights.sum() == pytest.approx(1.0, abs=1e-8)
        assert q.weights[0] == q.weights[-1]
        assert np.all(q.weights >= 0)

    def test_single_atom(self):
        m = single_atom(20, 0.25, 1.0)
        q = quadrature(m, 200)
        np.testing.assert_allclose(q.moments(20), m.values, atol=1e-6)

    def test_residual_is_explicit_mismatch(self):
        m = single_atom(10, 0.123456, 1.0)  # off-grid: nonzero residual
        q = quadrature(m, 20)
        assert q.residual > 1e-6
        assert q.residual == pytest.approx(np.sum(np.abs(q.moments(10) - m.values) ** 2),
                                           rel=1e-12)

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_corpus_moment_match(self, backend, name):
        m = CORPUS[name](30)
        q = quadrature(m)
        assert q.n_q == 300
        if q.residual <= 1e-8:
            assert np.abs(q.moments(30) - m.values).max() <= 1e-6 * max(1.0, m.mass)

    def test_cdf_endpoints(self):
        q = quadrature(acat(20))
        assert quadrature_cdf(q, 1.0) == pytest.approx(q.weights.sum(), rel=1e-15)
        assert quadrature_cdf(q, 0.0) == q.weights[0]
        t = np.linspace(0, 1, 101)
        assert np.all(np.diff(quadrature_cdf(q, t)) >= 0)

    def test_cdf_close_to_reference(self):
        q = quadrature(acat_cantor(300))
        t = np.arange(1, 1000) / 1000
        assert np.abs(quadrature_cdf(q, t) - acat_cantor_cdf(t)).max() <= 0.05

    def test_json(self):
        q = quadrature(lebesgue(4), 10)
        d = json.loads(q.to_json())
        assert d["n_q"] == 10 and len(d["weights"]) == 11 and "residual" in d

    def test_errors(self):
        with pytest.raises(InvalidArgument):
            quadrature(lebesgue(10), 10)
        with pytest.raises(InvalidArgument):
            quadrature(modify(lebesgue(3)))


class TestIndicator:
    def test_lebesgue_exact_zero(self):
        m = lebesgue(100)
        fz = f_zeta(GridFunction(uniform_grid(1001), build_evaluator(m).zeta(uniform_grid(1001))))
        ind = singularity_indicator(lambda t: cesaro_cdf(m, t), fz, 1000)
        assert np.abs(ind.grid.values).max() <= 1e-12
        assert ind.flagged_bins == ()

    def test_cat_f1_small(self):
        m = CORPUS["cat_f1"](100)
        th = uniform_grid(1001)
        fz = f_zeta(GridFunction(th, build_evaluator(m).zeta(th)))
        ind = singularity_indicator(lambda t: cesaro_cdf(m, t), fz, 1000)
        assert np.abs(ind.grid.values).max() <= 0.1

    def test_acat_atoms_flagged(self):
        m = acat(1000)
        th = uniform_grid(10001)
        fz = f_zeta(GridFunction(th, build_evaluator(m).zeta(th)))
        ind = singularity_indicator(lambda t: cesaro_cdf(m, t), fz, 1000)
        v = ind.grid.values
        assert v[200] > 1
        assert np.abs(v[351:550]).max() <= 0.2

    def test_floor_and_flags(self):
        th = uniform_grid(11)
        fz = GridFunction(th, np.minimum(th, 0.5))  # flat on the right half
        ind = singularity_indicator(lambda t: np.asarray(t), fz, 10, mass=1.0)
        assert ind.flagged_bins == (5, 6, 7, 8, 9)
        assert np.all(np.isfinite(ind.grid.values))
        assert json.loads(ind.to_json())["flagged_bins"] == [5, 6, 7, 8, 9]

    def test_errors(self):
        fz = GridFunction([0.0, 0.5], [0.0, 1.0])
        with pytest.raises(InvalidArgument):
            singularity_indicator(lambda t: t, fz, 10)
        with pytest.raises(InvalidArgument):
            singularity_indicator(lambda t: t, GridFunction([0.0, 1.0], [0.0, 1.0]), 1)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 99), st.floats(0.05, 2.0)), min_size=1, max_size=5,
                unique_by=lambda p: p[0]))
def test_grid_atoms_fit_exactly(pairs):
    # atoms on the quadrature grid are feasible, so the residual vanishes
    atoms = AtomList.of([(j / 100, w) for j, w in pairs])
    m = atomic_moments(atoms, 12)
    q = quadrature(m, 100)
    assert q.residual <= 1e-16 * max(1.0, m.mass) ** 2 + 1e-18
    assert q.weights.sum() == pytest.approx(m.mass, rel=1e-8)


def test_quadrature_measure_locations():
    q = QuadratureMeasure(np.array([0.5, 0.0, 0.5]), 0.0)
    np.testing.assert_array_equal(q.locations, [0.0, 0.5, 1.0])
    np.testing.assert_allclose(q.moments(2), [1.0, 1.0, 1.0])
