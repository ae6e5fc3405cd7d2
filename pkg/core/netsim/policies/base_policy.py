"""
RTO Forge - Base Send Policy
Clase base abstracta para las políticas de envío del emisor
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List

from ..endpoints import SenderState


class BaseSendPolicy(ABC):
    """
    Clase base para todas las políticas de envío

    En cada tick, una vez procesadas las entregas de ese tick, el simulador
    pregunta a la política qué paquetes transmitir.
    """

    def __init__(self, name: str = None):
        self.name = name or self.__class__.__name__.replace("Policy", "").lower()
        self._config: Dict[str, Any] = {}

    @abstractmethod
    def decide(self, sender: SenderState, now: int) -> List[int]:
        """
        Decide las transmisiones de este tick

        Args:
            sender: Estado actual del emisor (solo lectura)
            now: Tick actual

        Returns:
            Ids de paquete a transmitir, en orden
        """
        pass

    @abstractmethod
    def finished(self, sender: SenderState, now: int) -> bool:
        """
        Indica si la simulación puede terminar

        Returns:
            True si la política no hará nada más
        """
        pass

    def get_policy_name(self) -> str:
        return self.name

    def get_config_info(self) -> Dict[str, Any]:
        """
        Obtiene información de configuración de la política

        Returns:
            Diccionario con nombre y parámetros
        """
        return {"name": self.name, **self._config}
