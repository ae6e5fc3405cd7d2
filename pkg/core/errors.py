"""
RTO Forge - Errors
Jerarquía de excepciones compartida por todos los módulos
"""

from typing import Any, Dict, Optional


class RtoForgeError(Exception):
    """Base de todos los errores de RTO Forge"""


class DomainError(RtoForgeError, ValueError):
    """Una precondición de la operación no se cumple (alpha fuera de rango, eps <= 0, ...)"""


class ExactDivisionByZero(DomainError, ZeroDivisionError):
    """División exacta por cero"""


class RationalParseError(DomainError):
    """Texto que no representa un racional válido"""


class ConfigError(RtoForgeError):
    """Configuración inválida o ilegible"""


class InvariantViolation(RtoForgeError):
    """
    Violación de un invariante del simulador

    Args:
        name: Nombre del invariante
        tick: Instante de reloj en que se detectó
        details: Información adicional serializable
    """

    def __init__(self, name: str, tick: int, details: Optional[Dict[str, Any]] = None):
        self.name = name
        self.tick = tick
        self.details = details or {}
        super().__init__(f"Invariant '{name}' violated at tick {tick}: {self.details}")
