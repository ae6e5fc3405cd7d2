"""
RTO Forge - Scenarios
Generadores de escenarios (picos periódicos y uniforme) y detección de timeouts
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from .errors import DomainError
from .exactnum import RationalLike, as_natural, as_rational
from .rtocalc import RtoParams, RtoState, run

UNIFORM_RESOLUTION_BITS = 53

DEFAULT_PERIOD = 100
DEFAULT_BASE = Fraction(60)
DEFAULT_SPIKE = Fraction(75)


@dataclass(frozen=True)
class Pathological:
    """Cada period-ésima muestra vale spike; el resto vale base"""

    period: int = DEFAULT_PERIOD
    base: Fraction = DEFAULT_BASE
    spike: Fraction = DEFAULT_SPIKE

    def __post_init__(self):
        object.__setattr__(self, "base", as_rational(self.base))
        object.__setattr__(self, "spike", as_rational(self.spike))
        if as_natural(self.period, "period") < 2:
            raise DomainError(f"period must be >= 2, got {self.period}")
        if not 0 < self.base <= self.spike:
            raise DomainError("pathological scenario requires 0 < base <= spike")


@dataclass(frozen=True)
class Uniform:
    """Muestras i.i.d. uniformes en [lo, hi) con resolución diádica 2**-53"""

    lo: Fraction = DEFAULT_BASE
    hi: Fraction = DEFAULT_SPIKE
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if not 0 < self.lo < self.hi:
            raise DomainError("uniform scenario requires 0 < lo < hi")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must fit in 64 bits")


ScenarioKind = Union[Pathological, Uniform]


@dataclass(frozen=True)
class ScenarioSpec:
    kind: ScenarioKind
    length: int
    params: RtoParams

    def __post_init__(self):
        if as_natural(self.length, "length") < 1:
            raise DomainError("scenario length must be >= 1")


@dataclass(frozen=True)
class TraceRow:
    """Fila de traza: muestra y estado srtt/rttvar/rto, cotas opcionales y bandera de timeout"""

    step: int
    sample: Fraction
    srtt: Fraction
    rttvar: Fraction
    rto: Fraction
    L: Optional[Fraction] = None
    H: Optional[Fraction] = None
    rttvar_upper: Optional[Fraction] = None
    timeout: Optional[bool] = None


@dataclass(frozen=True)
class TimeoutReport:
    timeout_steps: List[int]
    spike_steps: List[int]
    trace: List[TraceRow] = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.timeout_steps)

    def summary(self) -> dict:
        return {"count": self.count, "steps": list(self.timeout_steps), "spike_steps": list(self.spike_steps)}


def pathological_preset(length: int, params: RtoParams, **overrides) -> ScenarioSpec:
    """Escenario de picos con period=100, base=60, spike=75 salvo que se indique otra cosa"""
    return ScenarioSpec(Pathological(**overrides), length, params)


def uniform_preset(length: int, params: RtoParams, **overrides) -> ScenarioSpec:
    """Escenario uniforme sobre [60, 75] salvo que se indique otra cosa"""
    return ScenarioSpec(Uniform(**overrides), length, params)


def generate(spec: ScenarioSpec) -> List[Fraction]:
    """
    Genera las muestras del escenario

    Returns:
        Lista de longitud spec.length (pasos 1-based en el sentido de S_j)
    """
    kind = spec.kind
    if isinstance(kind, Pathological):
        return [kind.spike if j % kind.period == 0 else kind.base for j in range(1, spec.length + 1)]

    rng = np.random.Generator(np.random.PCG64(kind.seed))
    scale = 1 << UNIFORM_RESOLUTION_BITS
    width = kind.hi - kind.lo
    draws = rng.integers(0, scale, size=spec.length, dtype=np.int64)
    return [kind.lo + width * Fraction(int(u), scale) for u in draws]


def spike_steps(spec: ScenarioSpec) -> List[int]:
    """Pasos con pico (solo escenarios patológicos con spike > base)"""
    kind = spec.kind
    if not isinstance(kind, Pathological) or kind.spike == kind.base:
        return []
    return list(range(kind.period, spec.length + 1, kind.period))


def detect_timeouts(
    samples: Sequence[RationalLike],
    params: RtoParams,
    spikes: Iterable[int] = (),
) -> TimeoutReport:
    """
    Marca un timeout en el paso j >= 2 si S_j > rto_{j-1}

    El rto armado antes de la muestra es el del paso anterior; la desigualdad es
    estricta, así que muestras constantes nunca producen timeouts.
    """
    samples = [as_rational(s) for s in samples]
    states: List[RtoState] = run(params, samples)
    rows = []
    timeouts = []
    for index, (sample, state) in enumerate(zip(samples, states)):
        fired = index > 0 and sample > states[index - 1].rto
        if fired:
            timeouts.append(state.step)
        rows.append(TraceRow(state.step, sample, state.srtt, state.rttvar, state.rto, timeout=fired))
    return TimeoutReport(timeouts, sorted(spikes), rows)


def run_scenario(spec: ScenarioSpec) -> TimeoutReport:
    return detect_timeouts(generate(spec), spec.params, spike_steps(spec))
