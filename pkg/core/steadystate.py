"""
RTO Forge - Steady State
Cotas cerradas de srtt y rttvar bajo un estado estacionario c/r y planificadores de convergencia

Un estado estacionario c/r es una ventana de muestras S_i .. S_{i+n} contenidas en [c - r, c + r].
Todas las cotas se expresan respecto a los valores previos srtt_{i-1} y rttvar_{i-1}.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from .errors import DomainError
from .exactnum import RationalLike, as_natural, as_rational, format_rational, power, power_below
from .limitwit import WitnessMethod, witness
from .rtocalc import RtoParams, RtoState

# Hasta este k geometric_weight contrasta la forma cerrada con la suma literal
LITERAL_CHECK_LIMIT = 16


@dataclass(frozen=True)
class SteadySpec:
    """Centro c, radio r, parámetros y valores previos srtt_{i-1}, rttvar_{i-1}"""

    c: Fraction
    r: Fraction
    params: RtoParams
    srtt_prior: Fraction
    rttvar_prior: Fraction

    def __post_init__(self):
        for name in ("c", "r", "srtt_prior", "rttvar_prior"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.r <= 0:
            raise DomainError(f"radius must be > 0, got {format_rational(self.r)}")
        if self.c - self.r <= 0:
            raise DomainError("c - r must be > 0 so that samples stay positive")
        if self.srtt_prior <= 0 or self.rttvar_prior <= 0:
            raise DomainError("prior srtt and rttvar must be > 0")

    @property
    def low(self) -> Fraction:
        return self.c - self.r

    @property
    def high(self) -> Fraction:
        return self.c + self.r


class DeltaRule(str, Enum):
    """Cómo instanciar la cota Delta_m de |srtt_{j-1} - S_j| para j >= i + m"""

    EQ3 = "eq3"
    SOUND = "sound"


class ConvergenceTarget(str, Enum):
    L_TO_C_MINUS_R = "L"
    H_TO_C_PLUS_R = "H"
    RTTVAR_BOUND_TO_2R = "rttvar"
    DELTA_TO_2R = "delta"


@dataclass(frozen=True)
class BoundReport:
    n: int
    L: Fraction
    H: Fraction
    delta_m: Fraction
    rttvar_upper: Fraction


def is_steady_state(samples: Iterable[RationalLike], c: RationalLike, r: RationalLike) -> bool:
    """True si todas las muestras están en el intervalo cerrado [c - r, c + r]"""
    c, r = as_rational(c), as_rational(r)
    if r <= 0:
        raise DomainError(f"radius must be > 0, got {format_rational(r)}")
    return all(c - r <= as_rational(s) <= c + r for s in samples)


def _check_gain(alpha: RationalLike) -> Fraction:
    alpha = as_rational(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {format_rational(alpha)}")
    return alpha


def geometric_weight_sum(alpha: RationalLike, k: int) -> Fraction:
    """Suma literal sum_{j=0..k} (1 - alpha)**j * alpha"""
    alpha = _check_gain(alpha)
    k = as_natural(k, "k")
    total = Fraction(0)
    term = alpha
    for _ in range(k + 1):
        total += term
        term *= 1 - alpha
    return total


def geometric_weight(alpha: RationalLike, k: int) -> Fraction:
    """
    Peso acumulado de las muestras tras k+1 pasos: 1 - (1 - alpha)**(k+1)

    Para k pequeño se contrasta con la suma literal.

    Raises:
        ArithmeticError: Si la forma cerrada no coincide con la suma literal
    """
    alpha = _check_gain(alpha)
    k = as_natural(k, "k")
    closed = 1 - power(1 - alpha, k + 1)
    if k <= LITERAL_CHECK_LIMIT and closed != geometric_weight_sum(alpha, k):
        raise ArithmeticError(f"closed form mismatch for alpha={alpha}, k={k}")
    return closed


def srtt_bounds(spec: SteadySpec, n: int) -> Tuple[Fraction, Fraction]:
    """
    Cotas L <= srtt_{i+n} <= H

    L = (1-alpha)**(n+1) srtt_{i-1} + (1 - (1-alpha)**(n+1)) (c - r), H igual con c + r.
    """
    n = as_natural(n)
    decay = power(1 - spec.params.alpha, n + 1)
    return _bounds_for(spec, decay)


def _bounds_for(spec: SteadySpec, decay: Fraction) -> Tuple[Fraction, Fraction]:
    carried = decay * spec.srtt_prior
    return carried + (1 - decay) * spec.low, carried + (1 - decay) * spec.high


def bounds_along(spec: SteadySpec, count: int) -> Iterator[Tuple[int, Fraction, Fraction]]:
    """Genera (n, L, H) para n = 0 .. count-1 con actualización incremental del factor"""
    keep = 1 - spec.params.alpha
    decay = keep
    for n in range(as_natural(count, "count")):
        low, high = _bounds_for(spec, decay)
        yield n, low, high
        decay *= keep


def delta_m(spec: SteadySpec, m: int, rule: DeltaRule = DeltaRule.EQ3) -> Fraction:
    """
    Cota Delta_m de |srtt_{j-1} - S_j|

    EQ3:   (1-alpha)**(m+1) srtt_{i-1} + 2r - (1-alpha)**(m+1) (c + r)
    SOUND: supremo exacto sobre j >= i + m de max{|L - (c+r)|, |H - (c-r)|},
           evaluando ambas ramas: max(2r, |2r + T (srtt_{i-1} - (c+r))|,
           |2r + T ((c-r) - srtt_{i-1})|) con T = (1-alpha)**m.
    """
    m = as_natural(m, "m")
    rule = DeltaRule(rule)
    keep = 1 - spec.params.alpha
    two_r = 2 * spec.r
    if rule is DeltaRule.EQ3:
        decay = power(keep, m + 1)
        return decay * spec.srtt_prior + two_r - decay * spec.high
    decay = power(keep, m)
    return max(
        two_r,
        abs(two_r + decay * (spec.srtt_prior - spec.high)),
        abs(two_r + decay * (spec.low - spec.srtt_prior)),
    )


def rttvar_upper(
    spec: SteadySpec,
    n: int,
    m: int,
    trace: Optional[Sequence[RtoState]] = None,
    rule: DeltaRule = DeltaRule.EQ3,
) -> Fraction:
    """
    Cota superior de rttvar_{i+n} partiendo del paso i + m

    (1-beta)**(n+1-m) rttvar_{i+m-1} + (1 - (1-beta)**(n+1-m)) Delta_m

    Args:
        spec: Estado estacionario con sus valores previos
        n: Índice relativo del rttvar acotado
        m: Corte 0 <= m < n
        trace: Estados i, i+1, ... producidos desde prior_state (necesario si m > 0)
        rule: Instanciación de Delta_m

    Raises:
        DomainError: Si m >= n, o m > 0 sin traza suficiente
    """
    n = as_natural(n)
    m = as_natural(m, "m")
    if m >= n:
        raise DomainError(f"rttvar_upper requires m < n, got m={m}, n={n}")
    return _rttvar_bound(spec, n, m, trace, rule)


def _rttvar_bound(spec, n, m, trace, rule) -> Fraction:
    if m == 0:
        start = spec.rttvar_prior
    else:
        if trace is None or len(trace) < m:
            raise DomainError(f"rttvar_upper with m={m} needs a trace of at least {m} states")
        start = trace[m - 1].rttvar
    decay = power(1 - spec.params.beta, n + 1 - m)
    return decay * start + (1 - decay) * delta_m(spec, m, rule)


def rttvar_limit_bound(spec: SteadySpec, n: int) -> Fraction:
    """Cota de rttvar_{i+n} con Delta = 2r; converge a 2r cuando n crece"""
    n = as_natural(n)
    decay = power(1 - spec.params.beta, n + 1)
    return decay * spec.rttvar_prior + (1 - decay) * 2 * spec.r


def bound_report(
    spec: SteadySpec,
    n: int,
    m: int = 0,
    trace: Optional[Sequence[RtoState]] = None,
    rule: DeltaRule = DeltaRule.SOUND,
) -> BoundReport:
    """
    Informe de cotas en n; admite m == n (un solo paso desde rttvar_{i+n-1})

    Raises:
        DomainError: Si m > n
    """
    n = as_natural(n)
    m = as_natural(m, "m")
    if m > n:
        raise DomainError(f"bound_report requires m <= n, got m={m}, n={n}")
    low, high = srtt_bounds(spec, n)
    upper = _rttvar_bound(spec, n, m, trace, DeltaRule(rule))
    return BoundReport(n, low, high, delta_m(spec, m, rule), upper)


def _gap_shape(spec: SteadySpec, target: ConvergenceTarget) -> Tuple[Fraction, Fraction]:
    """(q, X) tales que |cantidad(n) - límite| = q**(n+1) * |X|"""
    target = ConvergenceTarget(target)
    alpha, beta = spec.params.alpha, spec.params.beta
    if target is ConvergenceTarget.L_TO_C_MINUS_R:
        return 1 - alpha, spec.srtt_prior - spec.low
    if target is ConvergenceTarget.H_TO_C_PLUS_R:
        return 1 - alpha, spec.srtt_prior - spec.high
    if target is ConvergenceTarget.RTTVAR_BOUND_TO_2R:
        return 1 - beta, spec.rttvar_prior - 2 * spec.r
    return 1 - alpha, spec.srtt_prior - spec.high


def limit_of(spec: SteadySpec, target: ConvergenceTarget) -> Fraction:
    target = ConvergenceTarget(target)
    if target is ConvergenceTarget.L_TO_C_MINUS_R:
        return spec.low
    if target is ConvergenceTarget.H_TO_C_PLUS_R:
        return spec.high
    return 2 * spec.r


def quantity(spec: SteadySpec, target: ConvergenceTarget, n: int) -> Fraction:
    """Valor en n de la cantidad que converge: L, H, la cota de rttvar o Delta_n (EQ3)"""
    target = ConvergenceTarget(target)
    if target is ConvergenceTarget.L_TO_C_MINUS_R:
        return srtt_bounds(spec, n)[0]
    if target is ConvergenceTarget.H_TO_C_PLUS_R:
        return srtt_bounds(spec, n)[1]
    if target is ConvergenceTarget.RTTVAR_BOUND_TO_2R:
        return rttvar_limit_bound(spec, n)
    return delta_m(spec, n, DeltaRule.EQ3)


def limit_gap(spec: SteadySpec, target: ConvergenceTarget, n: int) -> Fraction:
    """|cantidad(n) - límite| en forma cerrada"""
    factor, gap = _gap_shape(spec, target)
    return power(factor, as_natural(n) + 1) * abs(gap)


def gap_below(spec: SteadySpec, target: ConvergenceTarget, n: int, eps: RationalLike) -> bool:
    """Decide exactamente |cantidad(n) - límite| < eps, también para n enormes"""
    eps = as_rational(eps)
    factor, gap = _gap_shape(spec, target)
    if gap == 0:
        return eps > 0
    return power_below(factor, as_natural(n) + 1, eps / abs(gap))


def convergence_n_for(
    spec: SteadySpec,
    target: ConvergenceTarget,
    eps: RationalLike,
    method: WitnessMethod = WitnessMethod.CEILING,
) -> int:
    """
    N tal que para todo n >= N la cantidad está a menos de eps de su límite

    Se reduce al testigo de q**n -> 0: con M = max(1, |X|), si q**(n+1) < eps / M
    entonces q**(n+1) |X| < eps. El testigo da delta con q**k < eps/M para k > delta,
    y n >= delta implica n + 1 > delta.

    Returns:
        N (0 si la cantidad ya está en su límite)
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise DomainError(f"eps must be > 0, got {format_rational(eps)}")
    factor, gap = _gap_shape(spec, target)
    if gap == 0:
        return 0
    scale = max(Fraction(1), abs(gap))
    return witness(factor, eps / scale, method).delta
