"""
Tests de los testigos delta(alpha, eps) de alpha**n -> 0
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import DomainError
from core.limitwit import (
    WitnessMethod,
    binomial_delta,
    binomial_manual_delta,
    brute_force_min_delta,
    ceiling_delta,
    ceiling_k,
    check_binomial_inequality,
    d_of_eps,
    f_alpha,
    mu,
    witness,
)

alphas = st.fractions(min_value=0, max_value=Fraction(99, 100), max_denominator=100)
epsilons = st.fractions(min_value=Fraction(1, 10 ** 4), max_value=3, max_denominator=10 ** 4)


class TestCeilingWitness:
    def test_k_and_f_alpha(self):
        assert ceiling_k("1/2") == 1
        assert ceiling_k("3/4") == 3
        assert f_alpha("1/2", 1) == Fraction(1, 2)
        assert f_alpha("1/2", 4) == Fraction(1, 8)

    def test_examples(self):
        assert ceiling_delta("1/2", "1/8").delta == 8
        assert ceiling_delta("3/4", "1/10").delta == 26
        assert ceiling_delta(0, "1/100").delta == 0

    def test_large_epsilon_is_clamped(self):
        assert ceiling_delta("1/2", 5).delta == ceiling_delta("1/2", 1).delta

    @given(alpha=st.fractions(min_value=Fraction(1, 100), max_value=Fraction(19, 20), max_denominator=100))
    def test_f_alpha_dominates_from_k(self, alpha):
        k = ceiling_k(alpha)
        assert alpha <= Fraction(k, k + 1)
        for n in range(k, k + 20):
            assert alpha ** n <= f_alpha(alpha, n)


class TestBinomialWitness:
    def test_mu(self):
        assert mu(3, 5) == 3
        assert mu(0, 1) == 1
        assert mu(0, 8) == 4

    def test_d_of_eps(self):
        assert d_of_eps("1/10") == 4
        assert d_of_eps(1) == 1
        assert d_of_eps("3/7") == 3
        with pytest.raises(DomainError):
            d_of_eps(0)

    def test_examples(self):
        assert binomial_delta("3/4", "1/10").delta == 12
        assert binomial_delta("1/2", "1/10").delta == 4
        assert binomial_delta(0, 5).delta == 0

    def test_manual_variant(self):
        assert binomial_manual_delta("3/4", "1/10").delta == 60
        assert binomial_manual_delta("1/2", "1/8").delta == 16

    @pytest.mark.parametrize("n", [1, 2, 5, 50, 200])
    def test_binomial_inequality(self, n):
        assert check_binomial_inequality(n)

    def test_binomial_inequality_domain(self):
        with pytest.raises(DomainError):
            check_binomial_inequality(0)


class TestBruteForce:
    def test_minimal_delta(self):
        assert brute_force_min_delta("1/2", "1/8", 100) == 3
        assert brute_force_min_delta("9/10", "1/2", 100) == 6
        assert brute_force_min_delta(0, 1, 10) == 0

    def test_cap(self):
        assert brute_force_min_delta("999/1000", Fraction(1, 10 ** 9), 10) is None
        with pytest.raises(DomainError):
            witness("999/1000", Fraction(1, 10 ** 9), WitnessMethod.BRUTE_FORCE, cap=10)


class TestWitnessDispatch:
    def test_by_name(self):
        result = witness("1/2", "1/8", "binomial")
        assert result.method is WitnessMethod.BINOMIAL_SEMI_AUTO
        assert result.delta == 4
        assert result.to_dict() == {"method": "binomial", "alpha": "1/2", "epsilon": "1/8", "delta": 4}

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            witness("1/2", "1/8", "newton")

    @pytest.mark.parametrize("alpha, eps", [("1", "1/2"), ("-1/2", "1/2"), ("3/2", "1/2"), ("1/2", "0"), ("1/2", "-1")])
    def test_domain(self, alpha, eps):
        with pytest.raises(DomainError):
            witness(alpha, eps)

    def test_verify(self):
        result = ceiling_delta("3/4", "1/10")
        assert result.verify(10)
        assert result.failures(10) == []
        assert not result.holds_at(1)

    @settings(max_examples=150, deadline=None)
    @given(alpha=alphas, eps=epsilons)
    def test_every_method_satisfies_the_contract(self, alpha, eps):
        minimal = brute_force_min_delta(alpha, eps, 100_000)
        for method in (WitnessMethod.CEILING, WitnessMethod.BINOMIAL_SEMI_AUTO, WitnessMethod.BINOMIAL_MANUAL):
            result = witness(alpha, eps, method)
            assert result.verify(5)
            if minimal is not None:
                assert result.delta >= minimal


class TestSupportingLemmas:
    @given(alpha=st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100),
           extra=st.integers(0, 200))
    def test_ceiling_induction(self, alpha, extra):
        k = ceiling_k(alpha)
        n = k + extra
        assert f_alpha(alpha, k) == alpha ** k
        assert Fraction(k, 1 + k) <= Fraction(n, 1 + n)
        if alpha ** n <= f_alpha(alpha, n):
            assert alpha ** (n + 1) <= f_alpha(alpha, n + 1)

    @given(alpha=st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=1000),
           eps=st.fractions(min_value=Fraction(1, 1000), max_value=1, max_denominator=1000),
           d=st.integers(0, 64))
    def test_manual_variant_lemmas(self, alpha, eps, d):
        assert alpha ** d <= Fraction(1, 2 ** d)
        assert alpha ** eps.denominator <= eps

    @given(alpha=st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000), max_denominator=1000))
    def test_numerator_power_is_at_most_half(self, alpha):
        assert alpha ** alpha.numerator <= Fraction(1, 2)
        assert alpha <= Fraction(alpha.numerator, 1 + alpha.numerator)

    @given(q=st.integers(1, 10 ** 9))
    def test_mu_is_minimal(self, q):
        b = mu(0, q)
        assert q < 2 ** b
        assert b == 0 or not q < 2 ** (b - 1)
        assert Fraction(1, 2 ** b) < Fraction(1, q)
