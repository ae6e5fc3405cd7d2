"""
RTO Forge - Network Simulator Package
Simulación de eventos discretos del canal, emisor y receptor con muestreo de Karn
"""

from .channel import BaseChannel, Channel, ChannelConfig, ScriptedChannel
from .endpoints import PacketRecord, ReceiverState, SenderState
from .model import AmbiguityRecord, Datagram, DatagramKind, InvariantRecord, RttSample, SimCounters
from .monitors import ALL_INVARIANTS, InvariantMonitor
from .policies import BaseSendPolicy, PolicyFactory, ScriptedPolicy, WindowPolicy
from .replay import available_replays, replay, resolve_replay
from .simulation import DEFAULT_MAX_TICKS, NetworkSimulation, SimReport, SimulationConfig, run_simulation

__all__ = [
    "ALL_INVARIANTS",
    "AmbiguityRecord",
    "BaseChannel",
    "BaseSendPolicy",
    "Channel",
    "ChannelConfig",
    "DEFAULT_MAX_TICKS",
    "Datagram",
    "DatagramKind",
    "InvariantMonitor",
    "InvariantRecord",
    "NetworkSimulation",
    "PacketRecord",
    "PolicyFactory",
    "ReceiverState",
    "RttSample",
    "ScriptedChannel",
    "ScriptedPolicy",
    "SenderState",
    "SimCounters",
    "SimReport",
    "SimulationConfig",
    "WindowPolicy",
    "available_replays",
    "replay",
    "resolve_replay",
    "run_simulation",
]
