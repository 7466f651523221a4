import json
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from koopspec import (
    AtomList, InvalidArgument, InvalidData, MomentSequence, PiecewiseDensity, Trajectory,
    ac_moments, atomic_moments, cantor_moments, combine, estimate_moments, modify,
)

from corpus import ACAT_ATOMS, ACAT_DENSITY, CORPUS, toeplitz_dense


def rotation(omega, m, amp=1.0):
    return amp * np.exp(2j * np.pi * omega * np.arange(m))


class TestMomentSequence:
    def test_basic(self):
        m = MomentSequence([2.0, 1j, 0.5])
        assert m.order == 2
        assert m.mass == 2.0
        np.testing.assert_array_equal(m.two_sided(), [0.5, -1j, 2.0, 1j, 0.5])

    def test_immutable(self):
        m = MomentSequence([1.0, 0.5])
        with pytest.raises(ValueError):
            m.values[0] = 3.0

    @pytest.mark.parametrize("vals", [[], [-1.0], [1j], [np.nan, 0.0]])
    def test_rejects(self, vals):
        with pytest.raises((InvalidArgument, InvalidData)):
            MomentSequence(vals)

    def test_json_roundtrip(self):
        m = MomentSequence([1.25, 0.5 - 0.25j, 1e-17], modified=True)
        back = MomentSequence.from_json(m.to_json())
        np.testing.assert_array_equal(back.values, m.values)
        assert back.modified

    def test_json_order_mismatch(self):
        with pytest.raises(InvalidData):
            MomentSequence.from_json(json.dumps({"order": 3, "modified": False,
                                                 "values": [[1, 0]]}))

    def test_truncate(self):
        m = MomentSequence([1.0, 0.5, 0.25])
        np.testing.assert_array_equal(m.truncate(1).values, [1.0, 0.5])
        with pytest.raises(InvalidArgument):
            m.truncate(3)


class TestEstimate:
    @pytest.mark.parametrize("n", [0, 3, 9])
    def test_constant(self, n):
        c = 0.3 - 1.2j
        m = estimate_moments(Trajectory(np.full(10, c)), n)
        np.testing.assert_allclose(m.values, abs(c) ** 2, rtol=1e-14)

    def test_rotation_exact(self):
        m = estimate_moments(Trajectory(rotation(0.3, 1000)), 10)
        np.testing.assert_allclose(m.values, np.exp(2j * np.pi * 0.3 * np.arange(11)),
                                   atol=1e-12)

    def test_lag_oracle(self, rng):
        y = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        m = estimate_moments(Trajectory(y), 6)
        for k in range(7):
            ref = sum(y[i + k] * np.conj(y[i]) for i in range(50 - k)) / (50 - k)
            assert abs(m.values[k] - ref) < 1e-12

    def test_m0_is_mean_square(self, rng):
        y = rng.standard_normal(777) + 1j * rng.standard_normal(777)
        m = estimate_moments(Trajectory(y), 5)
        assert m.values[0] == pytest.approx(np.mean(np.abs(y) ** 2), rel=1e-14)
        assert m.values[0].imag == 0.0

    def test_mixture_converges(self, rng):
        omegas = np.array([0.1, 0.37, 0.8])
        amps = np.array([1.0, 0.5 + 0.5j, 0.25])
        phases = np.exp(2j * np.pi * rng.random(3))
        exact = (np.abs(amps) ** 2) @ np.exp(2j * np.pi * np.outer(omegas, np.arange(6)))
        errs = []
        for m in (1000, 10_000, 100_000):
            i = np.arange(m)
            y = (amps * phases) @ np.exp(2j * np.pi * np.outer(omegas, i))
            errs.append(np.abs(estimate_moments(Trajectory(y), 5).values - exact).max())
        assert errs[0] > errs[1] > errs[2]

    def test_errors(self):
        with pytest.raises(InvalidArgument):
            estimate_moments(Trajectory(np.ones(5)), 5)
        with pytest.raises(InvalidData):
            Trajectory([1.0, np.inf])

    def test_warns_on_short_record(self):
        with pytest.warns(UserWarning, match="noisy"):
            estimate_moments(Trajectory(np.ones(50)), 10)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            estimate_moments(Trajectory(np.ones(100)), 10)


class TestGenerators:
    def test_atom_at_zero(self):
        np.testing.assert_allclose(atomic_moments(AtomList.of([(0.0, 1.0)]), 5).values, 1.0)

    def test_atom_at_half(self):
        m = atomic_moments(AtomList.of([(0.5, 0.5)]), 6)
        np.testing.assert_allclose(m.values, 0.5 * (-1.0) ** np.arange(7), atol=1e-15)

    def test_acat_atoms_mass(self):
        assert atomic_moments(ACAT_ATOMS, 3).mass == pytest.approx(0.4)

    def test_lebesgue_density(self):
        m = ac_moments(PiecewiseDensity([(0.0, 1.0, 1.0)]), 8)
        np.testing.assert_allclose(m.values, np.eye(1, 9)[0], atol=1e-15)

    def test_box_density(self):
        m = ac_moments(ACAT_DENSITY, 2)
        assert m.mass == pytest.approx(1.6)
        # independent oracle: midpoint rule on a fine grid
        th = (np.arange(400_000) + 0.5) / 400_000
        ref = np.mean(4.0 * ((th >= 0.3) & (th < 0.7)) * np.exp(2j * np.pi * th))
        assert abs(m.values[1] - ref) < 1e-9
        assert m.values[1] == pytest.approx(-1.2110, abs=1e-4)

    def test_cantor_self_similar(self):
        m = cantor_moments(300)
        k = np.arange(101)
        np.testing.assert_allclose(m.values[3 * k], m.values[k], atol=1e-12)
        assert m.mass == 1.0

    def test_cantor_against_sampling(self):
        # the Cantor measure is the law of sum_n 2 d_n / 3^n with fair bits d_n
        digits = np.array(np.meshgrid(*[[0, 2]] * 14, indexing="ij")).reshape(14, -1)
        pts = (digits / 3.0 ** np.arange(1, 15)[:, None]).sum(axis=0)
        ref = np.exp(2j * np.pi * np.outer(np.arange(6), pts)).mean(axis=1)
        np.testing.assert_allclose(cantor_moments(5).values, ref, atol=1e-5)

    def test_combine(self):
        a = atomic_moments(ACAT_ATOMS, 5)
        b = ac_moments(ACAT_DENSITY, 5)
        zero = MomentSequence(np.zeros(6))
        np.testing.assert_array_equal(combine(a, zero).values, a.values)
        assert combine(a, b).mass == pytest.approx(2.0)
        np.testing.assert_allclose(combine(combine(a, b), b, sign=-1).values, a.values,
                                   atol=1e-15)

    def test_combine_errors(self):
        a = MomentSequence([1.0, 0.0])
        with pytest.raises(InvalidArgument):
            combine(a, MomentSequence([1.0]))
        with pytest.raises(InvalidArgument):
            combine(a, modify(a))

    def test_modify(self):
        np.testing.assert_array_equal(modify(MomentSequence([1.0, 0, 0])).values, [2, 0, 0])
        z = modify(MomentSequence([0.0, 0, 0]))
        assert z.modified
        np.testing.assert_array_equal(z.values, [1, 0, 0])
        with pytest.raises(InvalidArgument):
            modify(z)

    def test_modify_full_example(self):
        # atoms 0.4 + density 1.6 + Cantor 1 + Lebesgue 1
        m = modify(CORPUS["acat_cantor"](4))
        assert m.mass == pytest.approx(4.0)

    @pytest.mark.parametrize("name", sorted(CORPUS))
    @pytest.mark.parametrize("n", [1, 8, 64])
    def test_generated_matrices_psd(self, name, n):
        m = CORPUS[name](n)
        lam = np.linalg.eigvalsh(toeplitz_dense(m.values))
        assert lam.min() >= -1e-10 * m.mass


class TestCdfs:
    def test_atom_cdf_split_at_zero(self):
        a = AtomList.of([(0.0, 0.1), (0.5, 0.2)])
        np.testing.assert_allclose(a.cdf(np.array([0.0, 0.49, 0.5, 1.0])),
                                   [0.05, 0.05, 0.25, 0.3])

    def test_density_cdf(self):
        np.testing.assert_allclose(ACAT_DENSITY.cdf(np.array([0.0, 0.3, 0.5, 1.0])),
                                   [0.0, 0.0, 0.8, 1.6])
        assert ACAT_DENSITY(0.5) == 4.0 and ACAT_DENSITY(0.7) == 0.0

    def test_bad_pieces(self):
        with pytest.raises(InvalidArgument):
            PiecewiseDensity([(0.0, 0.5, 1.0), (0.4, 0.6, 1.0)])
        with pytest.raises(InvalidArgument):
            AtomList.of([(1.5, 1.0)])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0.01, 5)), min_size=1, max_size=3),
       st.lists(st.tuples(st.floats(0, 1), st.floats(0.01, 5)), min_size=1, max_size=3),
       st.lists(st.tuples(st.floats(0, 1), st.floats(0.01, 5)), min_size=1, max_size=3))
def test_combine_associative_commutative(a, b, c):
    ma, mb, mc = (atomic_moments(AtomList.of(p), 6) for p in (a, b, c))
    np.testing.assert_allclose(combine(ma, mb).values, combine(mb, ma).values, atol=1e-13)
    np.testing.assert_allclose(combine(combine(ma, mb), mc).values,
                               combine(ma, combine(mb, mc)).values, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0.01, 5)), min_size=1, max_size=6))
def test_atomic_matrix_psd(pairs):
    m = atomic_moments(AtomList.of(pairs), 12)
    assert np.linalg.eigvalsh(toeplitz_dense(m.values)).min() >= -1e-10 * m.mass
