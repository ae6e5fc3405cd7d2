"""
Tests de los generadores de escenarios y la detección de timeouts
"""

from fractions import Fraction

import pytest

from core.errors import DomainError
from core.rtocalc import RtoParams
from core.scenario import (
    Pathological,
    ScenarioSpec,
    Uniform,
    detect_timeouts,
    generate,
    pathological_preset,
    run_scenario,
    spike_steps,
    uniform_preset,
)
from core.steadystate import is_steady_state


class TestGenerators:
    def test_pathological_samples(self, rfc_params):
        spec = pathological_preset(300, rfc_params)
        samples = generate(spec)
        assert len(samples) == 300
        assert [j for j, s in enumerate(samples, start=1) if s == 75] == [100, 200, 300]
        assert all(s == 60 for j, s in enumerate(samples, start=1) if j % 100)
        assert spike_steps(spec) == [100, 200, 300]

    def test_pathological_is_a_steady_state(self, rfc_params):
        assert is_steady_state(generate(pathological_preset(500, rfc_params)), Fraction(135, 2), Fraction(15, 2))

    def test_uniform_is_deterministic(self, rfc_params):
        first = generate(uniform_preset(200, rfc_params, seed=7))
        second = generate(uniform_preset(200, rfc_params, seed=7))
        other = generate(uniform_preset(200, rfc_params, seed=8))
        assert first == second
        assert first != other
        assert all(60 <= s < 75 for s in first)
        assert all(s.denominator <= 2 ** 53 for s in first)
        assert spike_steps(uniform_preset(200, rfc_params)) == []

    @pytest.mark.parametrize(
        "kwargs", [{"period": 1}, {"base": 0}, {"base": 80, "spike": 75}]
    )
    def test_invalid_pathological(self, kwargs):
        with pytest.raises(DomainError):
            Pathological(**kwargs)

    @pytest.mark.parametrize("kwargs", [{"lo": 75, "hi": 60}, {"lo": 0}, {"seed": 2 ** 64}])
    def test_invalid_uniform(self, kwargs):
        with pytest.raises(DomainError):
            Uniform(**kwargs)

    def test_invalid_length(self, rfc_params):
        with pytest.raises(DomainError):
            ScenarioSpec(Pathological(), 0, rfc_params)


class TestTimeouts:
    def test_constant_samples_never_time_out(self, rfc_params):
        report = detect_timeouts([60] * 50, rfc_params)
        assert report.count == 0
        assert all(row.timeout is False for row in report.trace)

    def test_first_step_never_times_out(self, rfc_params):
        report = detect_timeouts([10 ** 6], rfc_params)
        assert report.timeout_steps == []

    def test_sample_above_previous_rto(self, rfc_params):
        # rto_1 = 8 + 16 = 24
        assert detect_timeouts([8, 24], rfc_params).timeout_steps == []
        assert detect_timeouts([8, 25], rfc_params).timeout_steps == [2]

    def test_pathological_spikes_all_time_out(self, rfc_params):
        report = run_scenario(pathological_preset(1000, rfc_params))
        assert report.timeout_steps == list(range(100, 1001, 100))
        assert report.timeout_steps == report.spike_steps
        assert report.summary()["count"] == 10

    def test_spike_equal_to_base(self, rfc_params):
        report = run_scenario(pathological_preset(400, rfc_params, base=60, spike=60))
        assert report.count == 0
        assert report.spike_steps == []

    @pytest.mark.parametrize("seed", range(10))
    def test_large_granularity_suppresses_timeouts(self, seed):
        report = run_scenario(uniform_preset(1000, RtoParams.rfc6298(20), seed=seed))
        assert report.count == 0

    def test_trace_rows(self, rfc_params):
        report = run_scenario(pathological_preset(3, rfc_params))
        first, second = report.trace[0], report.trace[1]
        assert (first.step, first.srtt, first.rttvar, first.rto) == (1, 60, 30, 180)
        assert (second.srtt, second.rttvar, second.rto) == (60, Fraction(45, 2), 150)
