import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from listpa import bounds
from listpa.bounds import Bb84Params, BoundsError


class TestEntropy:
    def test_known_values(self):
        assert bounds.binary_entropy(0.5) == 1.0
        assert bounds.binary_entropy(0.0) == 0.0
        assert bounds.binary_entropy(1.0) == 0.0
        assert abs(bounds.binary_entropy(0.11) - 0.4999) < 1e-3

    def test_symmetry(self):
        for p in (0.1, 0.25, 0.4):
            assert bounds.binary_entropy(p) == pytest.approx(bounds.binary_entropy(1 - p))

    @given(st.floats(0.0, 1.0))
    @settings(max_examples=80)
    def test_inverse_roundtrip(self, y):
        p = bounds.binary_entropy_inverse(y)
        assert 0.0 <= p <= 0.5
        assert bounds.binary_entropy(p) == pytest.approx(y, abs=1e-9)

    def test_domain_errors(self):
        with pytest.raises(BoundsError):
            bounds.binary_entropy(1.5)
        with pytest.raises(BoundsError):
            bounds.binary_entropy_inverse(-0.1)


class TestLengths:
    def test_reference_points(self):
        eps = 2.0**-20
        assert bounds.qlhl_length(100, eps) == 58.0
        assert bounds.qllhl_length(100, eps, 1) == 57.0
        assert bounds.qllhl_length(100, eps, 16) == 61.0
        assert bounds.qllhl_length(100, eps, 1024) == 67.0

    @given(
        st.integers(0, 10**6),
        st.integers(1, 200),
        st.integers(0, 60),
    )
    @settings(max_examples=80)
    def test_list_gain_is_log2(self, k, log_l, eps_exp):
        # exact for integer k; non-integer k can lose the last ulp to cancellation
        eps = 2.0**-eps_exp
        gain = bounds.qllhl_length(float(k), eps, 1 << log_l) - bounds.qllhl_length(float(k), eps, 1)
        assert gain == float(log_l)

    def test_list_one_is_single_minus_one(self):
        # the list bound at L=1 sits exactly 1 bit under the single-key bound
        eps = 2.0**-30
        assert bounds.qlhl_length(50, eps) - bounds.qllhl_length(50, eps, 1) == 1.0

    def test_clamp(self):
        assert bounds.clamped_length(-3.2) == 0
        assert bounds.clamped_length(0.9) == 0
        assert bounds.clamped_length(7.9) == 7

    def test_huge_list_via_log2(self):
        assert bounds.qllhl_length_log2(0.0, 2.0**-20, 50.0) == 7.0

    def test_bad_epsilon(self):
        with pytest.raises(BoundsError):
            bounds.qllhl_length(10, 0.0, 2)
        with pytest.raises(BoundsError):
            bounds.qllhl_length(10, 0.5, 0)


class TestFiniteSize:
    def test_delta_reference_point(self):
        # c=1, n'=10^6, eps=2^-100 -> Delta/n' = 0.1 exactly
        assert bounds.finite_size_delta(10**6, 2.0**-100) / 10**6 == 0.1

    def test_min_entropy_composition(self):
        p = Bb84Params(n_sift=10**6, e_b=0.01, e_ph=0.02, epsilon=2.0**-100)
        expect = 10**6 * (1 - bounds.binary_entropy(0.02) - bounds.binary_entropy(0.01)) - 10**5
        assert bounds.bb84_min_entropy(p) == pytest.approx(expect)


class TestThreshold:
    def test_threshold_is_key_length_root(self):
        p = Bb84Params(n_sift=10**6, e_b=0.01, epsilon=2.0**-100, L=1)
        th = bounds.bb84_phase_threshold(p)
        assert 0.25 < th < 0.26
        for sign, cmp in ((-1e-6, lambda v: v > 0), (+1e-6, lambda v: v <= 0)):
            q = Bb84Params(
                n_sift=10**6, e_b=0.01, e_ph=th + sign, epsilon=2.0**-100, L=1
            )
            assert cmp(bounds.bb84_key_length(q))

    def test_threshold_nondecreasing_in_list_size(self):
        prev = -1.0
        for log_l in (0, 1, 5, 10, 20):
            p = Bb84Params(
                n_sift=10**6, e_b=0.01, epsilon=2.0**-100, L=None, alpha=log_l / 10**6
            )
            th = bounds.bb84_phase_threshold(p)
            assert th >= prev
            prev = th

    def test_hopeless_channel_gives_zero(self):
        p = Bb84Params(n_sift=1000, e_b=0.5, epsilon=2.0**-100, L=1)
        assert bounds.bb84_phase_threshold(p) == 0.0

    def test_exactly_one_of_l_and_alpha(self):
        with pytest.raises(BoundsError):
            Bb84Params(n_sift=10, e_b=0.0, L=2, alpha=0.1)
        with pytest.raises(BoundsError):
            Bb84Params(n_sift=10, e_b=0.0, L=None, alpha=None)


class TestAccounting:
    def test_auth_cost(self):
        assert bounds.auth_cost(16, 2.0**-64) == 4 + 128
        assert bounds.auth_cost(1, 2.0**-64) == 128
        assert bounds.auth_cost(3, 2.0**-10) == 2 + 20

    def test_net_rate(self):
        assert bounds.net_rate(0.25, 100.0) == 75.0
        with pytest.raises(BoundsError):
            bounds.net_rate(1.0, 10.0)

    def test_epsilon_total_additive_and_clamped(self):
        assert bounds.epsilon_total(0.1, 0.2, 0.3) == pytest.approx(0.6)
        assert bounds.epsilon_total(0.9, 0.9, 0.9) == 1.0
        with pytest.raises(BoundsError):
            bounds.epsilon_total(-0.1, 0.0, 0.0)
