"""
RTO Forge - Policy Factory
Factory para crear políticas de envío por nombre
"""

import logging
from typing import Any, Dict, List, Type

from ...errors import DomainError
from .base_policy import BaseSendPolicy
from .scripted_policy import ScriptedPolicy
from .window_policy import WindowPolicy

logger = logging.getLogger(__name__)


class PolicyFactory:
    """
    Registro de políticas de envío

    Soporta:
    - window: ventana deslizante con retransmisión por timeout
    - scripted: transmisiones explícitas (tick, paquete)
    """

    def __init__(self):
        self._available_policies: Dict[str, Type[BaseSendPolicy]] = {
            "window": WindowPolicy,
            "scripted": ScriptedPolicy,
        }

    def create(self, name: str, **kwargs: Any) -> BaseSendPolicy:
        """
        Crea una política

        Args:
            name: Nombre registrado de la política
            **kwargs: Parámetros del constructor

        Returns:
            Instancia de la política

        Raises:
            DomainError: Si la política no está registrada
        """
        if name not in self._available_policies:
            available = self.get_available_policies()
            raise DomainError(f"Policy '{name}' not available. Available policies: {available}")
        return self._available_policies[name](**kwargs)

    def get_available_policies(self) -> List[str]:
        return sorted(self._available_policies)

    def add_custom_policy(self, name: str, policy_class: Type[BaseSendPolicy]):
        """
        Agrega una política personalizada

        Args:
            name: Nombre de registro
            policy_class: Clase de la política (debe heredar de BaseSendPolicy)
        """
        if not isinstance(policy_class, type) or not issubclass(policy_class, BaseSendPolicy):
            raise DomainError("Policy class must inherit from BaseSendPolicy")
        self._available_policies[name] = policy_class
        logger.info("custom policy '%s' registered", name)
