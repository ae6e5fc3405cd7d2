"""
RTO Forge - RTO Calculation
Recursión exacta de srtt, rttvar y rto sobre una secuencia de muestras RTT

    rto_i    = srtt_i + max(G, 4 * rttvar_i)
    rttvar_i = S_1 / 2                                          si i = 1
               (1 - beta) rttvar_{i-1} + beta |srtt_{i-1} - S_i|   si i > 1
    srtt_i   = S_1                                              si i = 1
               (1 - alpha) srtt_{i-1} + alpha S_i                si i > 1

Sin suelo de 1 segundo, sin backoff y sin redondeo a la granularidad del reloj.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List

from .errors import DomainError
from .exactnum import RationalLike, as_rational, format_rational

RFC6298_ALPHA = Fraction(1, 8)
RFC6298_BETA = Fraction(1, 4)


@dataclass(frozen=True)
class RtoParams:
    """Ganancias alpha, beta y granularidad G (misma unidad que las muestras)"""

    alpha: Fraction
    beta: Fraction
    g: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "g"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {format_rational(self.alpha)}")
        if not 0 < self.beta < 1:
            raise DomainError(f"beta must lie in (0, 1), got {format_rational(self.beta)}")
        if self.g <= 0:
            raise DomainError(f"g must be > 0, got {format_rational(self.g)}")

    @classmethod
    def rfc6298(cls, g: RationalLike) -> "RtoParams":
        """Ganancias estándar alpha=1/8, beta=1/4; G siempre debe indicarse"""
        return cls(RFC6298_ALPHA, RFC6298_BETA, as_rational(g))

    def rto_for(self, srtt: Fraction, rttvar: Fraction) -> Fraction:
        return srtt + max(self.g, 4 * rttvar)


@dataclass(frozen=True)
class RtoState:
    step: int
    srtt: Fraction
    rttvar: Fraction
    rto: Fraction


def _positive_sample(sample: RationalLike) -> Fraction:
    sample = as_rational(sample)
    if sample <= 0:
        raise DomainError(f"RTT samples must be > 0, got {format_rational(sample)}")
    return sample


def init_state(params: RtoParams, s1: RationalLike) -> RtoState:
    """Estado tras la primera muestra: srtt = S_1, rttvar = S_1 / 2"""
    s1 = _positive_sample(s1)
    rttvar = s1 / 2
    return RtoState(1, s1, rttvar, params.rto_for(s1, rttvar))


def prior_state(params: RtoParams, srtt: RationalLike, rttvar: RationalLike, step: int = 1) -> RtoState:
    """
    Construye el estado previo (srtt_{i-1}, rttvar_{i-1}) desde el que continúa la recursión

    Raises:
        DomainError: Si srtt <= 0, rttvar < 0 o step < 1
    """
    srtt = as_rational(srtt)
    rttvar = as_rational(rttvar)
    if srtt <= 0 or rttvar < 0:
        raise DomainError("prior srtt must be > 0 and prior rttvar >= 0")
    if step < 1:
        raise DomainError(f"step must be >= 1, got {step}")
    return RtoState(step, srtt, rttvar, params.rto_for(srtt, rttvar))


def step(params: RtoParams, prev: RtoState, sample: RationalLike) -> RtoState:
    """
    Un paso de la recursión

    rttvar se actualiza con srtt_{i-1}, antes de actualizar srtt.
    """
    if prev.step < 1:
        raise DomainError(f"previous state must have step >= 1, got {prev.step}")
    sample = _positive_sample(sample)
    rttvar = (1 - params.beta) * prev.rttvar + params.beta * abs(prev.srtt - sample)
    srtt = (1 - params.alpha) * prev.srtt + params.alpha * sample
    return RtoState(prev.step + 1, srtt, rttvar, params.rto_for(srtt, rttvar))


def run(params: RtoParams, samples: Iterable[RationalLike]) -> List[RtoState]:
    """
    Pliega init_state y step sobre las muestras

    Returns:
        Un estado por muestra

    Raises:
        DomainError: Si no hay muestras o alguna es <= 0
    """
    samples = list(samples)
    if not samples:
        raise DomainError("run requires at least one sample")
    states = [init_state(params, samples[0])]
    for sample in samples[1:]:
        states.append(step(params, states[-1], sample))
    return states


def run_from(params: RtoParams, start: RtoState, samples: Iterable[RationalLike]) -> List[RtoState]:
    """Continúa la recursión desde un estado dado; no incluye el estado inicial"""
    states = []
    current = start
    for sample in samples:
        current = step(params, current, sample)
        states.append(current)
    return states
