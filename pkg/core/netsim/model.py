"""
RTO Forge - Network Model
Tipos de valor del simulador: datagramas, muestras RTT y registros de invariantes
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Tuple


class DatagramKind(str, Enum):
    PACKET = "packet"
    ACK = "ack"


@dataclass(frozen=True)
class Datagram:
    """Paquete o ACK; el par (kind, id) identifica al datagrama"""

    id: int
    kind: DatagramKind

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, int) or self.id < 1:
            raise ValueError(f"datagram id must be an integer >= 1, got {self.id!r}")

    @classmethod
    def packet(cls, packet_id: int) -> "Datagram":
        return cls(packet_id, DatagramKind.PACKET)

    @classmethod
    def ack(cls, ack_id: int) -> "Datagram":
        return cls(ack_id, DatagramKind.ACK)

    def __str__(self) -> str:
        return f"{'P' if self.kind is DatagramKind.PACKET else 'A'}{self.id}"


@dataclass(frozen=True)
class RttSample:
    """Muestra RTT en ticks tomada al recibir el primer ACK mayor que packet_id"""

    packet_id: int
    rtt: int
    tick: int
    previous_highest_ack: int


@dataclass(frozen=True)
class AmbiguityRecord:
    """ACK nuevo que cubre un paquete retransmitido: no se muestrea"""

    tick: int
    ack: int
    packet_id: int
    candidate_rtts: Tuple[int, ...]


@dataclass(frozen=True)
class InvariantRecord:
    invariant_name: str
    tick: int
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"invariant_name": self.invariant_name, "tick": self.tick, "details": dict(self.details)}


@dataclass(frozen=True)
class SimCounters:
    transmissions: int = 0
    retransmissions: int = 0
    deliveries: int = 0
    acks_received: int = 0
