"""
RTO Forge - Replays
Cronogramas guionizados del ACK ambiguo y de su variante sin pérdidas
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import DomainError
from ..rtocalc import RtoParams
from .channel import ChannelConfig, FateKey, ScriptedChannel
from .model import DatagramKind
from .policies import ScriptedPolicy
from .simulation import NetworkSimulation, SimReport, SimulationConfig

P = DatagramKind.PACKET
A = DatagramKind.ACK


@dataclass(frozen=True)
class ReplayScript:
    name: str
    description: str
    n_packets: int
    transmissions: Tuple[Tuple[int, int], ...]
    fates: Dict[FateKey, Sequence[int]]


# El 2 se envía en t=3 y se pierde; el ACK 2 duplicado llega en t=6 y provoca la
# retransmisión; el ACK 4 llega en t=7 y no se sabe si el RTT es 7-3 o 7-6.
AMBIGUOUS_ACK = ReplayScript(
    name="ambiguous-ack",
    description="packet 2 lost and retransmitted; ACK 4 cannot be attributed",
    n_packets=3,
    transmissions=((1, 1), (3, 2), (4, 3), (6, 2)),
    fates={
        (P, 1, 0): [1],
        (A, 2, 0): [2],
        (P, 2, 0): [],
        (P, 3, 0): [1],
        (A, 2, 1): [1],
        (P, 2, 1): [0],
        (A, 4, 0): [1],
    },
)

# Mismo cronograma sin pérdida: el 2 llega en t=6 y el ACK 4 en t=7 mide 7-3=4
AMBIGUOUS_ACK_LOSSLESS = ReplayScript(
    name="ambiguous-ack-lossless",
    description="same schedule without the loss; ACK 4 samples packet 2 with RTT 4",
    n_packets=3,
    transmissions=((1, 1), (3, 2), (4, 3)),
    fates={
        (P, 1, 0): [1],
        (A, 2, 0): [2],
        (P, 2, 0): [3],
        (P, 3, 0): [1],
        (A, 2, 1): [1],
        (A, 4, 0): [1],
    },
)

SCRIPTS: Dict[str, ReplayScript] = {script.name: script for script in (AMBIGUOUS_ACK, AMBIGUOUS_ACK_LOSSLESS)}

# nombres históricos de los guiones en la interfaz de línea de órdenes
ALIASES: Dict[str, str] = {"fig1": AMBIGUOUS_ACK.name, "fig1-lossless": AMBIGUOUS_ACK_LOSSLESS.name}


def available_replays() -> List[str]:
    return sorted([*SCRIPTS, *ALIASES])


def resolve_replay(name: str) -> str:
    """Nombre canónico del guion; DomainError si no existe"""
    name = ALIASES.get(name, name)
    if name not in SCRIPTS:
        raise DomainError(f"Unknown replay '{name}'. Available replays: {available_replays()}")
    return name


def replay(name: str, params: Optional[RtoParams] = None) -> SimReport:
    """
    Ejecuta un cronograma guionizado

    Args:
        name: "ambiguous-ack" o "ambiguous-ack-lossless" (o sus alias "fig1" y "fig1-lossless")
        params: Parámetros de RTO (RFC 6298 con G=1 por defecto)

    Raises:
        DomainError: Si el guion no existe
    """
    script = SCRIPTS[resolve_replay(name)]
    params = params or RtoParams.rfc6298(1)
    config = SimulationConfig(ChannelConfig(), script.n_packets, params)
    simulation = NetworkSimulation(
        config,
        policy=ScriptedPolicy(script.transmissions),
        channel_factory=lambda env: ScriptedChannel(env, script.fates),
    )
    return simulation.run()
