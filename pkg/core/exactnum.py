"""
RTO Forge - Exact Numbers
Aritmética racional exacta, utilidades de techo y comparación certificada de potencias
"""

import math
import re
from fractions import Fraction
from typing import Tuple, Union

from .errors import DomainError, ExactDivisionByZero, RationalParseError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

# Por encima de este tamaño (en bits) no se materializa x**n para comparar
_EXACT_BITS = 1 << 16
_PRECISIONS = (64, 256, 1024, 4096)

_RATIONAL_RE = re.compile(r"^[+-]?(\d+(/\d+)?|\d+\.\d*|\.\d+)$")

Dyadic = Tuple[int, int]


def as_rational(value: RationalLike) -> Fraction:
    """
    Convierte un valor a racional exacto

    Args:
        value: Fraction, entero o texto ("p/q", "67.5")

    Returns:
        Fraction en forma canónica

    Raises:
        DomainError: Si el valor es un float u otro tipo inexacto
    """
    if isinstance(value, bool):
        raise DomainError("Booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise DomainError(f"Expected an exact rational, got {type(value).__name__}")


def as_natural(value: int, name: str = "n") -> int:
    """Valida que el valor sea un natural (entero >= 0)"""
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"{name} must be an integer, got {type(value).__name__}")
    if value < 0:
        raise DomainError(f"{name} must be >= 0, got {value}")
    return value


def add(x: RationalLike, y: RationalLike) -> Fraction:
    return as_rational(x) + as_rational(y)


def sub(x: RationalLike, y: RationalLike) -> Fraction:
    return as_rational(x) - as_rational(y)


def mul(x: RationalLike, y: RationalLike) -> Fraction:
    return as_rational(x) * as_rational(y)


def div(x: RationalLike, y: RationalLike) -> Fraction:
    """
    División exacta

    Raises:
        ExactDivisionByZero: Si y == 0
    """
    y = as_rational(y)
    if y == 0:
        raise ExactDivisionByZero(f"Division of {format_rational(as_rational(x))} by zero")
    return as_rational(x) / y


def power(x: RationalLike, n: int) -> Fraction:
    """
    Potencia exacta x**n por cuadrados repetidos (0**0 == 1)

    Args:
        x: Base racional
        n: Exponente natural

    Returns:
        x elevado a n, en forma canónica
    """
    x = as_rational(x)
    n = as_natural(n)
    # Fraction.__pow__ eleva numerador y denominador por separado (siguen coprimos)
    return x ** n


def ceil(x: RationalLike) -> int:
    """Menor entero >= x (techo matemático, también para negativos)"""
    return math.ceil(as_rational(x))


def ceil_div(x: RationalLike, y: RationalLike) -> int:
    """
    Calcula ceil(x / y)

    Raises:
        DomainError: Si y <= 0
    """
    y = as_rational(y)
    if y <= 0:
        raise DomainError(f"ceil_div requires y > 0, got {format_rational(y)}")
    return math.ceil(as_rational(x) / y)


def power_below(x: RationalLike, n: int, bound: RationalLike) -> bool:
    """
    Decide exactamente si x**n < bound sin construir x**n cuando n es enorme

    Calcula cotas diádicas inferior y superior de x**n con redondeo dirigido.
    Si las cotas no deciden se aumenta la precisión; en último caso se
    compara de forma exacta.

    Args:
        x: Base racional >= 0
        n: Exponente natural
        bound: Cota racional

    Returns:
        True si x**n < bound
    """
    x = as_rational(x)
    n = as_natural(n)
    bound = as_rational(bound)
    if x < 0:
        raise DomainError("power_below requires x >= 0")
    if bound <= 0:
        return False
    if n == 0:
        return 1 < bound
    if x == 0:
        return True

    size = n * max(x.numerator.bit_length(), x.denominator.bit_length())
    if size <= _EXACT_BITS:
        return x ** n < bound

    for precision in _PRECISIONS:
        lower, upper = _enclose_power(x, n, precision)
        if _dyadic_below(upper, bound):
            return True
        if not _dyadic_below(lower, bound):
            return False
    return x ** n < bound


def _enclose(x: Fraction, precision: int) -> Tuple[Dyadic, Dyadic]:
    shift = precision - (x.numerator.bit_length() - x.denominator.bit_length())
    if shift >= 0:
        num, den = x.numerator << shift, x.denominator
    else:
        num, den = x.numerator, x.denominator << -shift
    return (num // den, -shift), (-((-num) // den), -shift)


def _round(value: Dyadic, precision: int, upward: bool) -> Dyadic:
    mantissa, exponent = value
    excess = mantissa.bit_length() - precision
    if excess <= 0:
        return value
    if upward:
        return -((-mantissa) >> excess), exponent + excess
    return mantissa >> excess, exponent + excess


def _dyadic_mul(a: Dyadic, b: Dyadic, precision: int, upward: bool) -> Dyadic:
    return _round((a[0] * b[0], a[1] + b[1]), precision, upward)


def _enclose_power(x: Fraction, n: int, precision: int) -> Tuple[Dyadic, Dyadic]:
    base_lo, base_hi = _enclose(x, precision)
    lo: Dyadic = (1, 0)
    hi: Dyadic = (1, 0)
    while n:
        if n & 1:
            lo = _dyadic_mul(lo, base_lo, precision, upward=False)
            hi = _dyadic_mul(hi, base_hi, precision, upward=True)
        n >>= 1
        if n:
            base_lo = _dyadic_mul(base_lo, base_lo, precision, upward=False)
            base_hi = _dyadic_mul(base_hi, base_hi, precision, upward=True)
    return lo, hi


def _dyadic_below(value: Dyadic, bound: Fraction) -> bool:
    mantissa, exponent = value
    if mantissa == 0:
        return True
    a, b = bound.numerator, bound.denominator
    # 2**(top_v - 1) <= value < 2**top_v ; 2**(top_b - 1) < bound < 2**(top_b + 1)
    top_v = mantissa.bit_length() + exponent
    top_b = a.bit_length() - b.bit_length()
    if top_v <= top_b - 1:
        return True
    if top_v - 1 >= top_b + 1:
        return False
    if exponent >= 0:
        return (mantissa << exponent) * b < a
    return mantissa * b < (a << -exponent)


def parse_rational(text: str) -> Fraction:
    """
    Parsea un racional desde texto

    Acepta "p/q", enteros y decimales finitos ("67.5" -> 135/2), convertidos sin redondeo.

    Raises:
        RationalParseError: Si el texto no es un racional válido
    """
    if not isinstance(text, str):
        raise RationalParseError(f"Expected text, got {type(text).__name__}")
    cleaned = text.strip()
    if not _RATIONAL_RE.match(cleaned):
        raise RationalParseError(f"Invalid rational literal: {text!r}")
    try:
        return Fraction(cleaned)
    except ZeroDivisionError:
        raise RationalParseError(f"Zero denominator in {text!r}")


def format_rational(x: RationalLike) -> str:
    """Serializa como "p/q" (o "p" si q == 1), con el signo en el numerador"""
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_decimal_string(x: RationalLike, digits: int) -> str:
    """
    Aproximación decimal con un número fijo de cifras (redondeo al par)

    Args:
        x: Valor racional
        digits: Cifras tras el punto decimal

    Returns:
        Texto decimal, p.ej. "61.875"
    """
    x = as_rational(x)
    digits = as_natural(digits, "digits")
    scaled = round(x * 10 ** digits)
    sign = "-" if scaled < 0 else ""
    integer, fraction = divmod(abs(scaled), 10 ** digits)
    if digits == 0:
        return f"{sign}{integer}"
    return f"{sign}{integer}.{fraction:0{digits}d}"
