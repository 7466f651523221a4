import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from koopspec import (
    HermitianToeplitz, InvalidArgument, InvalidData, NotPositiveDefinite, levinson_solve,
    szego_recursion, toeplitz_cholesky, trench_inverse,
)

from corpus import random_psd_column, toeplitz_dense


def test_dense_layout():
    T = HermitianToeplitz([2.0, 1j, 0.5])
    np.testing.assert_array_equal(T.dense(), toeplitz_dense([2.0, 1j, 0.5]))
    assert T.dense()[1, 0] == 1j and T.dense()[0, 1] == -1j


def test_constructor_errors():
    with pytest.raises(InvalidArgument):
        HermitianToeplitz([])
    with pytest.raises(InvalidData):
        HermitianToeplitz([1j, 0.0])


class TestLevinson:
    def test_identity(self, backend):
        b = np.array([1.0, -2j, 3.0])
        np.testing.assert_allclose(levinson_solve(HermitianToeplitz([1, 0, 0]), b), b)

    def test_2x2_real(self, backend):
        x = levinson_solve(HermitianToeplitz([2, 1]), [1, 0])
        np.testing.assert_allclose(x, [2 / 3, -1 / 3], atol=1e-15)

    def test_2x2_complex(self, backend):
        x = levinson_solve(HermitianToeplitz([2, 1j]), [1, 1])
        np.testing.assert_allclose(x, [(2 + 1j) / 3, (2 - 1j) / 3], atol=1e-15)

    def test_random_vs_dense(self, backend, rng):
        for _ in range(40):
            n = int(rng.integers(1, 65))
            t = random_psd_column(rng, n)
            b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x = levinson_solve(HermitianToeplitz(t), b)
            ref = np.linalg.solve(toeplitz_dense(t), b)
            assert np.linalg.norm(x - ref) <= 1e-8 * np.linalg.norm(ref)

    def test_rhs_length(self, backend):
        with pytest.raises(InvalidArgument):
            levinson_solve(HermitianToeplitz([1, 0]), [1, 2, 3])

    def test_breakdown(self, backend):
        # rank one: every entry equal
        with pytest.raises(NotPositiveDefinite) as info:
            levinson_solve(HermitianToeplitz([1, 1, 1]), [1, 0, 0])
        assert info.value.degree == 1
        with pytest.raises(NotPositiveDefinite):
            levinson_solve(HermitianToeplitz([0.0, 0.0]), [1, 0])


class TestSzego:
    def test_predictor_identity(self, backend, rng):
        for n in (1, 5, 30):
            t = random_psd_column(rng, n + 1)
            a, refl, err = szego_recursion(HermitianToeplitz(t))
            assert a[-1] == 1.0
            rhs = toeplitz_dense(t) @ np.conj(a)
            np.testing.assert_allclose(rhs[:-1], 0, atol=1e-10 * abs(t[0]))
            assert rhs[-1] == pytest.approx(err[-1], rel=1e-10)
            assert np.all(np.abs(refl) < 1)
            assert np.all(np.diff(err) <= 1e-12 * err[0])

    def test_errors_are_determinant_ratios(self, backend, rng):
        t = random_psd_column(rng, 8)
        _, _, err = szego_recursion(HermitianToeplitz(t))
        dets = [np.linalg.det(toeplitz_dense(t[: k + 1])).real for k in range(8)]
        np.testing.assert_allclose(err[1:], np.array(dets[1:]) / np.array(dets[:-1]),
                                   rtol=1e-9)


class TestTrench:
    def test_identity(self, backend):
        np.testing.assert_allclose(trench_inverse(HermitianToeplitz([1, 0, 0, 0])), np.eye(4))

    def test_random_vs_dense(self, backend, rng):
        for _ in range(30):
            n = int(rng.integers(1, 33))
            t = random_psd_column(rng, n)
            b = trench_inverse(HermitianToeplitz(t))
            ref = np.linalg.inv(toeplitz_dense(t))
            assert np.abs(b - ref).max() <= 1e-8 * max(1.0, np.abs(ref).max())
            np.testing.assert_allclose(b, b.conj().T, atol=1e-12 * np.abs(b).max())

    def test_first_column_matches_solve(self, backend, rng):
        t = random_psd_column(rng, 20)
        T = HermitianToeplitz(t)
        e0 = np.eye(20)[0]
        np.testing.assert_allclose(levinson_solve(T, e0), trench_inverse(T)[:, 0], atol=1e-8)


class TestCholesky:
    def test_identity(self):
        np.testing.assert_allclose(toeplitz_cholesky(HermitianToeplitz([1, 0, 0])), np.eye(3))

    def test_scaled_identity(self):
        np.testing.assert_allclose(toeplitz_cholesky(HermitianToeplitz([2, 0, 0, 0])),
                                   np.sqrt(2) * np.eye(4), atol=1e-15)

    def test_random_reconstruction(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 33))
            t = random_psd_column(rng, n)
            L = toeplitz_cholesky(HermitianToeplitz(t))
            T = toeplitz_dense(t)
            assert np.allclose(L, np.tril(L), atol=0)
            assert np.all(np.diag(L).real > 0) and np.all(np.diag(L).imag == 0)
            assert np.abs(L.conj().T @ L - T).max() <= 1e-10 * abs(t[0])

    def test_condition_estimate(self, rng):
        t = random_psd_column(rng, 24)
        L = toeplitz_cholesky(HermitianToeplitz(t))
        est = (np.abs(np.diag(L)).max() / np.abs(np.diag(L)).min()) ** 2
        cond = np.linalg.cond(toeplitz_dense(t))
        assert cond / 10 <= est * 24 and est <= cond * 10

    def test_breakdown(self):
        with pytest.raises(NotPositiveDefinite):
            toeplitz_cholesky(HermitianToeplitz([1, 1, 1]))
        with pytest.raises(NotPositiveDefinite):
            toeplitz_cholesky(HermitianToeplitz([0.0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_solve_inverse_consistent(n, seed):
    rng = np.random.default_rng(seed)
    t = random_psd_column(rng, n)
    T = HermitianToeplitz(t)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = levinson_solve(T, b)
    assert np.linalg.norm(T.matvec(x) - b) <= 1e-7 * np.linalg.norm(b) * np.linalg.cond(T.dense())
