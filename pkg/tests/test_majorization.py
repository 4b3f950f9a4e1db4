import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cgeur import majorization as mj
from cgeur import prolate
from cgeur.errors import DomainError, ResourceError

GAMMAS = [0.05, 0.5, 2.0, 4.9279, 7.0, 12.0, 30.0]


class TestFValue:
    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_first_is_zero(self, gamma):
        assert mj.f_value(gamma, 1) == 0.0

    @pytest.mark.parametrize("gamma", [0.3, 3.0, 9.0])
    def test_two_and_three(self, gamma):
        assert mj.f_value(gamma, 2) == math.sqrt(prolate.lambda0(gamma / 4).lambda0)
        assert mj.f_value(gamma, 3) == math.sqrt(prolate.lambda0(gamma / 2).lambda0)

    @pytest.mark.parametrize("J", [4, 5, 6, 7, 10, 11])
    def test_bin_product(self, J):
        m = (J * J - 1) // 4 if J % 2 else J * J // 4
        assert mj.f_value(1.3, J) == math.sqrt(prolate.lambda0(1.3 * m / 4).lambda0)

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_non_decreasing_in_J(self, gamma):
        seq = mj.f_sequence(gamma, 40)
        assert np.all(np.diff(seq.values) >= 0)
        assert np.all(np.diff(seq.deficits) <= 0)
        assert np.all((seq.values >= 0) & (seq.values <= 1))

    @pytest.mark.parametrize("J", [2, 3, 4, 9])
    def test_non_decreasing_in_gamma(self, J):
        vals = [mj.f_value(g, J) for g in np.geomspace(1e-3, 50, 200)]
        assert np.all(np.diff(vals) >= 0)

    def test_tends_to_one(self):
        assert mj.f_value(1.0, 200) == pytest.approx(1.0, abs=1e-15)

    def test_deficits_consistent(self):
        seq = mj.f_sequence(2.0, 12)
        np.testing.assert_allclose(seq.values + seq.deficits, 1.0, atol=2e-16)

    @pytest.mark.parametrize("bad", [(0.0, 2), (-1.0, 2), (1.0, 0), (1.0, 1.5)])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            mj.f_value(*bad)


class TestBuildW:
    @pytest.mark.parametrize("gamma", [0.3, 7.0])
    def test_n2(self, gamma):
        w = mj.build_w(gamma, 2)
        f2 = mj.f_value(gamma, 2)
        assert w.coeffs[0] == f2
        assert w.coeffs[1] == pytest.approx(1 - f2, abs=1e-15)

    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("n", [2, 3, 4, 6, 10, None])
    def test_probability_vector(self, gamma, n):
        w = mj.build_w(gamma, n)
        assert np.all(w.coeffs >= 0)
        assert abs(w.coeffs.sum() - 1) <= 1e-12

    def test_truncated_layout(self):
        w = mj.build_w(3.0, 5)
        f = mj.f_sequence(3.0, 5).values
        np.testing.assert_allclose(w.coeffs[:4], np.diff(f), atol=1e-15)
        assert w.coeffs[4] == pytest.approx(1 - f[4], abs=1e-16)
        assert len(w) == 5 and w.n == 5

    def test_small_gamma_limit(self):
        w = mj.build_w(1e-8, 2).coeffs
        assert w[0] == pytest.approx(math.sqrt(1e-8 / (2 * math.pi)), rel=1e-6)
        assert w[1] == pytest.approx(1.0, abs=1e-4)

    def test_untruncated_tail(self):
        w = mj.build_w(0.5, None)
        assert w.n is None
        assert w.coeffs[-1] < mj.TAIL_CUTOFF

    def test_untruncated_matches_truncated_prefix(self):
        full = mj.build_w(2.0, None).coeffs
        part = mj.build_w(2.0, 6).coeffs
        np.testing.assert_allclose(full[:5], part[:5], atol=1e-16)

    def test_inf_equals_none(self):
        np.testing.assert_array_equal(mj.build_w(2.0, math.inf).coeffs, mj.build_w(2.0, None).coeffs)

    def test_index_cap(self):
        with pytest.raises(ResourceError):
            mj.build_w(1e-7, None)

    @pytest.mark.parametrize("n", [1, 0, 2.5])
    def test_bad_n(self, n):
        with pytest.raises(DomainError):
            mj.build_w(1.0, n)

    def test_clamp_and_hard_error(self):
        assert mj._step(0.9, 0.1, 0.9, 0.1 + 5e-16) == 0.0
        with pytest.raises(mj.NumericalError):
            mj._step(0.9, 0.1, 0.9, 0.1 + 1e-11)

    @pytest.mark.parametrize("gamma", [0.1, 1.0, 7.0, 20.0])
    @pytest.mark.parametrize("n", [3, 4, 8])
    def test_w2_majorizes_all(self, gamma, n):
        assert mj.majorizes(mj.build_w(gamma, n).coeffs, mj.build_w(gamma, 2).coeffs, 1e-12)


class TestMajorizes:
    def test_examples(self):
        assert mj.majorizes([0.5, 0.5], [1, 0])
        assert not mj.majorizes([1, 0], [0.5, 0.5])
        assert mj.majorizes([1, 0], [1, 0])

    def test_padding(self):
        assert mj.majorizes([0.25] * 4, [0.5, 0.5])
        assert not mj.majorizes([0.5, 0.5], [0.25] * 4)

    def test_order_irrelevant(self):
        assert mj.majorizes([0.1, 0.6, 0.3], [0.0, 0.3, 0.7], slack=1e-15)

    def test_total_mismatch(self):
        assert not mj.majorizes([0.5, 0.4], [1.0])
        assert mj.majorizes([0.5, 0.5 - 1e-10], [1.0], slack=1e-9)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            mj.majorizes([-0.1, 1.1], [1.0])

    @settings(max_examples=200, deadline=None)
    @given(arrays(np.float64, st.integers(1, 12), elements=st.floats(0, 1)))
    def test_uniform_is_minimal_point_mass_maximal(self, v):
        total = v.sum()
        if total <= 0:
            return
        p = v / total
        assert mj.majorizes(np.full(len(p), 1 / len(p)), p, 1e-12)
        assert mj.majorizes(p, [1.0], 1e-12)

    @settings(max_examples=200, deadline=None)
    @given(arrays(np.float64, st.integers(2, 10), elements=st.floats(0, 1)), st.floats(0, 1))
    def test_robin_hood_transfer(self, v, t):
        # moving mass from richer to poorer entry yields a majorized vector
        if v.sum() <= 0:
            return
        p = np.sort(v / v.sum())[::-1]
        q = p.copy()
        move = t * (p[0] - p[-1]) / 2
        q[0] -= move
        q[-1] += move
        assert mj.majorizes(q, p, 1e-12)


class TestChain:
    @pytest.mark.parametrize("gamma", [0.5, 2.0, 4.9279, 7.0, 12.0])
    def test_chain_holds(self, gamma):
        assert mj.check_chain(gamma, 8)

    def test_chain_wide_scan(self):
        for gamma in np.geomspace(1e-3, 60, 40):
            assert mj.check_chain(float(gamma), 10), gamma

    def test_bad_nmax(self):
        with pytest.raises(DomainError):
            mj.check_chain(1.0, 2)


@pytest.mark.parametrize("z", [1.0, 2.0, 4.0])
def test_continuum_limit(z):
    # cumulative W at i*sqrt(gamma) = z tends to sqrt(lambda0(z^2/16))
    gamma = 1e-6
    i = int(round(z / math.sqrt(gamma)))
    w = mj.build_w(gamma, i + 1).coeffs
    cumulative = w[:i].sum()
    assert abs(cumulative - math.sqrt(prolate.lambda0(z * z / 16).lambda0)) <= 1e-3
