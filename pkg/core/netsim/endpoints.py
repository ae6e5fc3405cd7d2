"""
RTO Forge - Endpoints
Estado del emisor (muestreo de Karn y RTO) y del receptor (ACK acumulativo)
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set

from ..errors import DomainError, InvariantViolation
from ..rtocalc import RtoParams, RtoState, init_state, step
from .model import AmbiguityRecord, RttSample

logger = logging.getLogger(__name__)


@dataclass
class PacketRecord:
    tx_times: List[int]
    sampled: bool = False

    @property
    def first_tx_time(self) -> int:
        return self.tx_times[0]

    @property
    def last_tx_time(self) -> int:
        return self.tx_times[-1]

    @property
    def tx_count(self) -> int:
        return len(self.tx_times)


class SenderState:
    """
    Emisor secuencial

    highest_ack_received empieza en 1 (el ACK trivial). El RTT de un paquete p va
    desde su primera transmisión hasta el primer ACK a > p; como los ACK previos
    eran <= highest_ack_received, el paquete medido al llegar un ACK nuevo es el
    anterior highest_ack_received.
    """

    def __init__(self, n_packets: int, params: RtoParams, initial_rto: Fraction):
        if n_packets < 1:
            raise DomainError(f"n_packets must be >= 1, got {n_packets}")
        self.n_packets = n_packets
        self.params = params
        self.clock = 0
        self.next_to_send = 1
        self.highest_ack_received = 1
        self.records: Dict[int, PacketRecord] = {}
        self.rto_state: Optional[RtoState] = None
        self.rto = Fraction(initial_rto)
        self.last_activity = 0
        self.samples: List[RttSample] = []
        self.ambiguities: List[AmbiguityRecord] = []

    @property
    def highest_transmitted(self) -> int:
        return self.next_to_send - 1

    @property
    def outstanding(self) -> int:
        """Paquetes transmitidos aún no reconocidos"""
        return self.next_to_send - self.highest_ack_received

    @property
    def done(self) -> bool:
        return self.highest_ack_received > self.n_packets

    def timed_out(self, now: int) -> bool:
        return self.outstanding > 0 and now - self.last_activity > self.rto

    def record_transmission(self, packet_id: int, now: int) -> PacketRecord:
        """
        Anota la transmisión (o retransmisión) de un paquete

        Raises:
            InvariantViolation: Si el paquete rompe el prefijo {1..k} o excede n_packets
        """
        self.clock = now
        if packet_id < 1 or packet_id > self.next_to_send or packet_id > self.n_packets:
            raise InvariantViolation(
                "sender_prefix", now, {"packet_id": packet_id, "next_to_send": self.next_to_send}
            )
        if packet_id == self.next_to_send:
            record = PacketRecord([now])
            self.records[packet_id] = record
            self.next_to_send += 1
        else:
            record = self.records[packet_id]
            record.tx_times.append(now)
        self.last_activity = now
        return record

    def on_ack(self, ack: int, now: int) -> Optional[RttSample]:
        """
        Procesa un ACK recibido

        Returns:
            La muestra RTT si el ACK es nuevo y el paquete medido se transmitió una sola vez

        Raises:
            DomainError: Si ack < 1
            InvariantViolation: Si el ACK reconoce paquetes nunca transmitidos
        """
        if ack < 1:
            raise DomainError(f"ACK ids start at 1, got {ack}")
        self.clock = now
        if ack <= self.highest_ack_received:
            return None
        if ack - 1 > self.highest_transmitted:
            raise InvariantViolation(
                "no_creation", now, {"ack": ack, "highest_transmitted": self.highest_transmitted}
            )

        measured = self.highest_ack_received
        record = self.records[measured]
        self.highest_ack_received = ack
        self.last_activity = now

        if record.tx_count != 1 or record.sampled:
            ambiguity = AmbiguityRecord(now, ack, measured, tuple(now - t for t in record.tx_times))
            self.ambiguities.append(ambiguity)
            logger.info(
                "t=%d ACK %d is ambiguous for packet %d (candidate RTTs %s), not sampled",
                now, ack, measured, list(ambiguity.candidate_rtts),
            )
            return None

        record.sampled = True
        sample = RttSample(measured, now - record.first_tx_time, now, measured)
        self.samples.append(sample)
        if self.rto_state is None:
            self.rto_state = init_state(self.params, sample.rtt)
        else:
            self.rto_state = step(self.params, self.rto_state, sample.rtt)
        self.rto = self.rto_state.rto
        logger.debug("t=%d sample packet=%d rtt=%d rto=%s", now, measured, sample.rtt, self.rto)
        return sample


@dataclass
class ReceiverState:
    """Receptor con ACK acumulativo: siempre reconoce el menor id no entregado"""

    delivered: Set[int] = field(default_factory=set)
    next_expected: int = 1

    def on_packet(self, packet_id: int) -> int:
        """Registra la entrega y devuelve el ACK a emitir (1 si no hay nada que reconocer)"""
        self.delivered.add(packet_id)
        while self.next_expected in self.delivered:
            self.next_expected += 1
        return self.next_expected
