"""
Tests de la recursión exacta de srtt / rttvar / rto
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import DomainError
from core.rtocalc import RtoParams, init_state, prior_state, run, run_from, step

samples = st.lists(
    st.fractions(min_value=Fraction(1, 100), max_value=1000, max_denominator=100), min_size=1, max_size=40
)


class TestParams:
    def test_rfc6298_gains(self):
        params = RtoParams.rfc6298("1/10")
        assert params.alpha == Fraction(1, 8)
        assert params.beta == Fraction(1, 4)
        assert params.g == Fraction(1, 10)

    @pytest.mark.parametrize(
        "alpha, beta, g", [(0, "1/4", 1), (1, "1/4", 1), ("1/8", 0, 1), ("1/8", "5/4", 1), ("1/8", "1/4", 0)]
    )
    def test_out_of_range(self, alpha, beta, g):
        with pytest.raises(DomainError):
            RtoParams(alpha, beta, g)


class TestRecursion:
    def test_first_sample(self, rfc_params):
        state = init_state(rfc_params, 8)
        assert (state.step, state.srtt, state.rttvar, state.rto) == (1, 8, 4, 24)

    def test_granularity_dominates(self):
        state = init_state(RtoParams.rfc6298(100), 8)
        assert state.rto == 108

    def test_rttvar_uses_previous_srtt(self, rfc_params):
        state = step(rfc_params, init_state(rfc_params, 8), 16)
        # rttvar = 3/4 * 4 + 1/4 * |8 - 16| ; srtt = 7/8 * 8 + 1/8 * 16
        assert state.rttvar == 5
        assert state.srtt == 9
        assert state.rto == 29
        assert state.step == 2

    def test_sample_equal_to_srtt(self, rfc_params):
        state = step(rfc_params, init_state(rfc_params, 8), 8)
        assert (state.srtt, state.rttvar) == (8, 3)

    def test_non_positive_samples(self, rfc_params):
        with pytest.raises(DomainError):
            init_state(rfc_params, 0)
        with pytest.raises(DomainError):
            run(rfc_params, [8, -1])

    def test_empty_run(self, rfc_params):
        with pytest.raises(DomainError):
            run(rfc_params, [])

    def test_run_from_prior(self, rfc_params):
        prior = prior_state(rfc_params, 60, 4)
        states = run_from(rfc_params, prior, [75])
        assert states[0].step == 2
        assert states[0].srtt == Fraction(495, 8)
        assert states[0].rttvar == Fraction(27, 4)
        assert run_from(rfc_params, prior, []) == []

    def test_prior_state_domain(self, rfc_params):
        with pytest.raises(DomainError):
            prior_state(rfc_params, 0, 1)
        with pytest.raises(DomainError):
            prior_state(rfc_params, 1, -1)

    @settings(max_examples=100)
    @given(values=samples)
    def test_srtt_is_a_convex_combination(self, values):
        params = RtoParams.rfc6298(1)
        states = run(params, values)
        for prev, sample, state in zip(states, values[1:], states[1:]):
            assert min(prev.srtt, sample) <= state.srtt <= max(prev.srtt, sample)
            assert state.rttvar >= 0
            assert state.rto == state.srtt + max(params.g, 4 * state.rttvar)

    @settings(max_examples=100)
    @given(values=samples)
    def test_srtt_matches_the_unrolled_sum(self, values):
        params = RtoParams.rfc6298(1)
        alpha = params.alpha
        n = len(values)
        expected = (1 - alpha) ** (n - 1) * values[0] + sum(
            alpha * (1 - alpha) ** (n - j) * values[j - 1] for j in range(2, n + 1)
        )
        assert run(params, values)[-1].srtt == expected

    @given(
        sample=st.fractions(min_value=Fraction(1, 8), max_value=1000, max_denominator=64),
        alpha=st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100),
        beta=st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100),
        k=st.integers(0, 40),
    )
    def test_constant_samples_decay_rttvar_geometrically(self, sample, alpha, beta, k):
        params = RtoParams(alpha, beta, 1)
        states = run(params, [sample] * (k + 1))
        assert states[-1].srtt == sample
        assert states[-1].rttvar == (1 - beta) ** k * (sample / 2)
