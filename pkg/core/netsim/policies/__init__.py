"""
RTO Forge - Send Policies Package
Políticas que deciden qué transmite el emisor en cada tick
"""

from .base_policy import BaseSendPolicy
from .policy_factory import PolicyFactory
from .scripted_policy import ScriptedPolicy
from .window_policy import WindowPolicy

__all__ = [
    "BaseSendPolicy",
    "PolicyFactory",
    "ScriptedPolicy",
    "WindowPolicy",
]
