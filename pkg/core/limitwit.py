"""
RTO Forge - Limit Witnesses
Testigos constructivos delta(alpha, eps) de que alpha**n -> 0 para alpha en [0, 1)

Todo testigo cumple el contrato: para todo n > delta, alpha**n < eps (estricto).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from .errors import DomainError
from .exactnum import (
    RationalLike,
    as_natural,
    as_rational,
    ceil,
    ceil_div,
    format_rational,
    power,
    power_below,
)

logger = logging.getLogger(__name__)

DEFAULT_BRUTE_FORCE_CAP = 10_000


class WitnessMethod(str, Enum):
    CEILING = "ceiling"
    BINOMIAL_SEMI_AUTO = "binomial"
    BINOMIAL_MANUAL = "binomial-manual"
    BRUTE_FORCE = "brute-force"


@dataclass(frozen=True)
class WitnessResult:
    """Testigo delta para el par (alpha, epsilon) y el método que lo construyó"""

    delta: int
    method: WitnessMethod
    alpha: Fraction
    epsilon: Fraction

    def holds_at(self, n: int) -> bool:
        """Comprueba exactamente alpha**n < epsilon"""
        return power_below(self.alpha, n, self.epsilon)

    def failures(self, horizon: int) -> List[int]:
        """
        Verifica el contrato en n = delta+1 .. delta+horizon

        Returns:
            Lista de los n donde alpha**n < epsilon no se cumple (vacía si es válido)
        """
        horizon = as_natural(horizon, "horizon")
        return [n for n in range(self.delta + 1, self.delta + horizon + 1) if not self.holds_at(n)]

    def verify(self, horizon: int) -> bool:
        return not self.failures(horizon)

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "alpha": format_rational(self.alpha),
            "epsilon": format_rational(self.epsilon),
            "delta": self.delta,
        }


def _check_pair(alpha: RationalLike, epsilon: RationalLike):
    alpha = as_rational(alpha)
    epsilon = as_rational(epsilon)
    if not 0 <= alpha < 1:
        raise DomainError(f"alpha must lie in [0, 1), got {format_rational(alpha)}")
    if epsilon <= 0:
        raise DomainError(f"epsilon must be > 0, got {format_rational(epsilon)}")
    return alpha, epsilon


def ceiling_k(alpha: RationalLike) -> int:
    """k = ceil(alpha / (1 - alpha)), el punto de arranque de la inducción"""
    alpha = as_rational(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {format_rational(alpha)}")
    return ceil(alpha / (1 - alpha))


def f_alpha(alpha: RationalLike, n: int) -> Fraction:
    """
    f_alpha(n) = k * alpha**k / n con k = ceil(alpha / (1 - alpha))

    Para todo n >= k se cumple alpha**n <= f_alpha(n).
    """
    k = ceiling_k(alpha)
    n = as_natural(n)
    if n < 1:
        raise DomainError("f_alpha is defined for n >= 1")
    alpha = as_rational(alpha)
    return k * power(alpha, k) / n


def ceiling_delta(alpha: RationalLike, epsilon: RationalLike) -> WitnessResult:
    """
    Testigo por la construcción del techo

    Con eps' = min(eps, 1) / 2 (la división por 2 convierte <= en <),
    delta = max(k, ceil(k * alpha**k / eps')).

    Args:
        alpha: Base en [0, 1)
        epsilon: Tolerancia > 0

    Returns:
        WitnessResult con method=CEILING
    """
    alpha, epsilon = _check_pair(alpha, epsilon)
    if alpha == 0:
        return WitnessResult(0, WitnessMethod.CEILING, alpha, epsilon)

    strict_eps = min(epsilon, Fraction(1)) / 2
    k = ceiling_k(alpha)
    d = ceil_div(k * power(alpha, k), strict_eps)
    logger.debug("ceiling witness alpha=%s eps=%s k=%d d=%d", alpha, epsilon, k, d)
    return WitnessResult(max(k, d), WitnessMethod.CEILING, alpha, epsilon)


def mu(b: int, q: int) -> int:
    """Menor b' >= b con q < 2**b'"""
    b = as_natural(b, "b")
    q = as_natural(q, "q")
    while not q < (1 << b):
        b += 1
    return b


def d_of_eps(epsilon: RationalLike) -> int:
    """
    d(eps) = mu(0, denominator(eps)); garantiza 1 / 2**d < eps

    Raises:
        DomainError: Si eps <= 0
    """
    epsilon = as_rational(epsilon)
    if epsilon <= 0:
        raise DomainError(f"epsilon must be > 0, got {format_rational(epsilon)}")
    return mu(0, epsilon.denominator)


def binomial_delta(alpha: RationalLike, epsilon: RationalLike) -> WitnessResult:
    """
    Testigo binomial (variante semiautomática)

    Con p = numerator(alpha) se tiene alpha**p <= 1/2 (porque 2 p**p <= (1+p)**p),
    así que para n > p * d(eps) vale alpha**n <= (1/2)**d < eps.
    """
    alpha, epsilon = _check_pair(alpha, epsilon)
    if alpha == 0:
        return WitnessResult(0, WitnessMethod.BINOMIAL_SEMI_AUTO, alpha, epsilon)

    p = alpha.numerator
    d = d_of_eps(min(epsilon, Fraction(1)))
    logger.debug("binomial witness alpha=%s eps=%s p=%d d=%d", alpha, epsilon, p, d)
    return WitnessResult(p * d, WitnessMethod.BINOMIAL_SEMI_AUTO, alpha, epsilon)


def binomial_manual_delta(alpha: RationalLike, epsilon: RationalLike) -> WitnessResult:
    """
    Testigo binomial (variante manual)

    Para beta <= 1/2 y eps' = x/y se cumple beta**y <= eps'. Con beta = alpha**p y
    eps' = min(eps, 1) / 2 resulta delta = p * denominator(eps').
    """
    alpha, epsilon = _check_pair(alpha, epsilon)
    if alpha == 0:
        return WitnessResult(0, WitnessMethod.BINOMIAL_MANUAL, alpha, epsilon)

    strict_eps = min(epsilon, Fraction(1)) / 2
    delta = alpha.numerator * strict_eps.denominator
    return WitnessResult(delta, WitnessMethod.BINOMIAL_MANUAL, alpha, epsilon)


def brute_force_min_delta(alpha: RationalLike, epsilon: RationalLike, cap: int) -> Optional[int]:
    """
    Menor delta <= cap con alpha**(delta+1) < eps, por barrido lineal exacto

    Como alpha**n decrece con n, el primer acierto es válido para todo n > delta.

    Returns:
        delta mínimo, o None si no existe ninguno <= cap
    """
    alpha, epsilon = _check_pair(alpha, epsilon)
    cap = as_natural(cap, "cap")
    if alpha == 0:
        return 0

    p, q = alpha.numerator, alpha.denominator
    a, b = epsilon.numerator, epsilon.denominator
    # alpha**n < a/b  <=>  p**n * b < q**n * a ; p/q ya está en términos mínimos
    p_n, q_n = p, q
    for delta in range(cap + 1):
        if p_n * b < q_n * a:
            return delta
        p_n *= p
        q_n *= q
    return None


def check_binomial_inequality(n: int) -> bool:
    """Comprueba 2 * n**n <= (1 + n)**n de forma exacta"""
    n = as_natural(n)
    if n == 0:
        raise DomainError("check_binomial_inequality requires n >= 1")
    return 2 * n ** n <= (1 + n) ** n


def witness(
    alpha: RationalLike,
    epsilon: RationalLike,
    method: WitnessMethod = WitnessMethod.CEILING,
    cap: int = DEFAULT_BRUTE_FORCE_CAP,
) -> WitnessResult:
    """
    Construye un testigo con el método indicado

    Args:
        alpha: Base en [0, 1)
        epsilon: Tolerancia > 0
        method: Método (o su nombre: "ceiling", "binomial", "binomial-manual", "brute-force")
        cap: Límite de búsqueda para brute-force

    Raises:
        DomainError: Método desconocido o brute-force sin resultado bajo cap
    """
    try:
        method = WitnessMethod(method)
    except ValueError:
        available = [m.value for m in WitnessMethod]
        raise DomainError(f"Unknown witness method '{method}'. Available methods: {available}")

    if method is WitnessMethod.CEILING:
        return ceiling_delta(alpha, epsilon)
    if method is WitnessMethod.BINOMIAL_SEMI_AUTO:
        return binomial_delta(alpha, epsilon)
    if method is WitnessMethod.BINOMIAL_MANUAL:
        return binomial_manual_delta(alpha, epsilon)

    alpha, epsilon = _check_pair(alpha, epsilon)
    delta = brute_force_min_delta(alpha, epsilon, cap)
    if delta is None:
        raise DomainError(f"No witness found below cap={cap}")
    return WitnessResult(delta, WitnessMethod.BRUTE_FORCE, alpha, epsilon)
