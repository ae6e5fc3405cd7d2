"""
Comprobaciones aleatorizadas de extremo a extremo con entradas sembradas (numpy PCG64)
"""

from fractions import Fraction

import numpy as np
import pytest

from core.exactnum import ceil_div, power_below
from core.limitwit import (
    WitnessMethod,
    brute_force_min_delta,
    ceiling_k,
    check_binomial_inequality,
    d_of_eps,
    f_alpha,
    witness,
)
from core.netsim import ALL_INVARIANTS, ChannelConfig, replay, run_simulation
from core.rtocalc import RtoParams, prior_state, run_from
from core.scenario import pathological_preset, run_scenario, uniform_preset
from core.steadystate import (
    ConvergenceTarget,
    DeltaRule,
    SteadySpec,
    bound_report,
    bounds_along,
    convergence_n_for,
    gap_below,
)

CONSTRUCTIVE = (WitnessMethod.CEILING, WitnessMethod.BINOMIAL_SEMI_AUTO, WitnessMethod.BINOMIAL_MANUAL)


def rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def random_alpha(gen, max_den=10 ** 6):
    q = int(gen.integers(2, max_den + 1))
    return Fraction(int(gen.integers(1, q)), q)


def random_eps(gen, max_den=10 ** 6):
    b = int(gen.integers(1, max_den + 1))
    return Fraction(int(gen.integers(1, 2 * b)), b)


def random_positive(gen, max_den=1000, max_value=1000):
    den = int(gen.integers(1, max_den + 1))
    return Fraction(int(gen.integers(1, max_value * den + 1)), den)


def test_constructive_witnesses_hold():
    gen = rng(2024)
    for _ in range(1000):
        alpha, eps = random_alpha(gen), random_eps(gen)
        for method in CONSTRUCTIVE:
            result = witness(alpha, eps, method)
            assert result.failures(10) == [], (alpha, eps, method)


def test_brute_force_is_minimal():
    gen = rng(7)
    checked = 0
    while checked < 200:
        alpha, eps = random_alpha(gen, 1000), random_eps(gen, 1000)
        delta = brute_force_min_delta(alpha, eps, 10_000)
        if delta is None:
            continue
        checked += 1
        assert power_below(alpha, delta + 1, eps)
        if delta > 0:
            assert not power_below(alpha, delta, eps)
        for method in CONSTRUCTIVE:
            assert witness(alpha, eps, method).delta >= delta


def test_ceiling_lemmas():
    gen = rng(11)
    for _ in range(1000):
        x, y = random_positive(gen), random_positive(gen)
        m, n = int(gen.integers(1, 1000)), int(gen.integers(1, 1000))
        assert ceil_div(x, m * n) == ceil_div(ceil_div(x, m), n)
        assert x / ceil_div(x, y) <= y

        alpha = random_alpha(gen, 1000)
        k = ceiling_k(alpha)
        assert alpha <= Fraction(k, 1 + k)
        alpha_j = alpha ** k
        for j in range(k, k + 51):
            assert alpha_j <= f_alpha(alpha, j)
            alpha_j *= alpha


def test_binomial_lemmas():
    for n in range(1, 201):
        assert check_binomial_inequality(n)
    gen = rng(13)
    for _ in range(1000):
        alpha = random_alpha(gen)
        # alpha**p <= 1/2  <=>  (1/alpha)**p no es < 2
        assert not power_below(1 / alpha, alpha.numerator, 2)
        eps = random_eps(gen)
        assert Fraction(1, 2 ** d_of_eps(eps)) < eps


def test_steady_state_bounds_contain_random_runs():
    gen = rng(17)
    params = RtoParams.rfc6298(1)
    for _ in range(500):
        c = Fraction(int(gen.integers(20, 400)), int(gen.integers(1, 5)))
        r = c * Fraction(int(gen.integers(1, 64)), 64)
        prior_srtt = c * Fraction(int(gen.integers(1, 129)), 64)
        prior_rttvar = r * Fraction(int(gen.integers(1, 257)), 64)
        spec = SteadySpec(c, r, params, prior_srtt, prior_rttvar)

        length = int(gen.integers(1, 501))
        draws = gen.integers(0, 65, size=length)
        samples = [spec.low + 2 * r * Fraction(int(u), 64) for u in draws]
        trace = run_from(params, prior_state(params, prior_srtt, prior_rttvar), samples)

        for n, low, high in bounds_along(spec, length):
            assert low <= trace[n].srtt <= high

        for _ in range(5):
            n = int(gen.integers(0, length))
            m = int(gen.integers(0, n + 1))
            report = bound_report(spec, n, m, trace, DeltaRule.SOUND)
            assert trace[n].rttvar <= report.rttvar_upper


def test_convergence_certificates():
    gen = rng(19)
    params = RtoParams.rfc6298(1)
    eps = Fraction(1, 1000)
    targets = (ConvergenceTarget.L_TO_C_MINUS_R, ConvergenceTarget.H_TO_C_PLUS_R, ConvergenceTarget.RTTVAR_BOUND_TO_2R)
    for _ in range(100):
        c = Fraction(int(gen.integers(20, 200)))
        r = c * Fraction(int(gen.integers(1, 32)), 64)
        spec = SteadySpec(c, r, params, c * Fraction(int(gen.integers(1, 129)), 64), r * int(gen.integers(1, 8)))
        for target in targets:
            big_n = convergence_n_for(spec, target, eps)
            for n in range(big_n + 1, big_n + 11):
                assert gap_below(spec, target, n, eps), (spec, target, n)


def test_pathological_timeouts():
    report = run_scenario(pathological_preset(1000, RtoParams.rfc6298(1)))
    assert set(report.spike_steps[1:]) <= set(report.timeout_steps)
    assert set(report.timeout_steps) <= set(report.spike_steps)


def test_uniform_without_timeouts():
    for seed in range(10):
        assert run_scenario(uniform_preset(1000, RtoParams.rfc6298(20), seed=seed)).count == 0


def test_ambiguous_ack_replay():
    ambiguous = replay("ambiguous-ack")
    assert ambiguous.samples_for(2) == []
    assert ambiguous.ambiguities[0].candidate_rtts == (4, 1)

    lossless = replay("ambiguous-ack-lossless")
    assert [s.rtt for s in lossless.samples_for(2)] == [4]


GRID = [
    ChannelConfig(drop_prob=drop, dup_prob=dup, min_delay=1, max_delay=max_delay, fifo_acks=fifo)
    for drop in (0.0, 0.1, 0.5)
    for dup in (0.0, 0.1)
    for fifo in (False, True)
    for max_delay in (3,)
]


@pytest.mark.parametrize("index", range(100))
def test_simulation_invariants(index):
    cfg = GRID[index % len(GRID)].model_copy(update={"seed": index})
    report = run_simulation(cfg, 200, RtoParams.rfc6298(1))
    assert report.completed
    for name in ALL_INVARIANTS:
        assert report.violations(name) == [], name
    assert all(s.rtt >= 2 * cfg.min_delay for s in report.samples)
    if index < 5:
        assert run_simulation(cfg, 200, RtoParams.rfc6298(1)) == report
