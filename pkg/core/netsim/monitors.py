"""
RTO Forge - Invariant Monitors
Observador independiente que comprueba en tiempo de ejecución los invariantes del modelo
"""

import logging
from collections import Counter
from typing import Any, Dict, List, Optional, Set

from ..errors import InvariantViolation
from .model import Datagram, DatagramKind, InvariantRecord, RttSample

logger = logging.getLogger(__name__)

NO_CREATION = "no_creation"
SENDER_PREFIX = "sender_prefix"
RECEIVER_CUMULATIVE = "receiver_cumulative"
KARN_SINGLE_TRANSMISSION = "karn_single_transmission"
PESSIMISM = "pessimism"
FIFO_SAMPLE_ID = "fifo_sample_id"
ACK_MONOTONIC = "ack_monotonic"

ALL_INVARIANTS = (
    NO_CREATION,
    SENDER_PREFIX,
    RECEIVER_CUMULATIVE,
    KARN_SINGLE_TRANSMISSION,
    PESSIMISM,
    FIFO_SAMPLE_ID,
    ACK_MONOTONIC,
)


class InvariantMonitor:
    """
    Lleva su propia contabilidad de lo transmitido y entregado, sin leer el
    estado interno de los extremos, y anota cada violación en el log.

    Args:
        min_round_trip: Cota inferior de cualquier RTT real (2 * min_delay); None la desactiva
        fifo_acks: Si el camino de vuelta es FIFO se exige que el paquete medido sea el ACK previo
    """

    def __init__(self, min_round_trip: Optional[int] = None, fifo_acks: bool = False):
        self.min_round_trip = min_round_trip
        self.fifo_acks = fifo_acks
        self.log: List[InvariantRecord] = []
        self._sent: Counter = Counter()
        self._tx_times: Dict[int, List[int]] = {}
        self._highest_packet = 0
        self._delivered_packets: Set[int] = set()
        self._first_missing = 1
        self._last_ack_delivered = 0
        self._ack_high = 1
        self._ack_high_before = 1

    def record(self, name: str, tick: int, details: Optional[Dict[str, Any]] = None):
        entry = InvariantRecord(name, tick, dict(details or {}))
        self.log.append(entry)
        logger.warning("invariant %s violated at t=%d: %s", name, tick, entry.details)

    def record_violation(self, error: InvariantViolation):
        self.record(error.name, error.tick, error.details)

    def on_transmit(self, dgram: Datagram, now: int):
        if dgram.kind is DatagramKind.PACKET:
            if dgram.id > self._highest_packet + 1:
                self.record(SENDER_PREFIX, now, {"packet_id": dgram.id, "highest_sent": self._highest_packet})
            self._highest_packet = max(self._highest_packet, dgram.id)
            self._tx_times.setdefault(dgram.id, []).append(now)
        self._sent[(dgram.kind, dgram.id)] += 1

    def on_delivery(self, dgram: Datagram, now: int):
        if self._sent[(dgram.kind, dgram.id)] == 0:
            self.record(NO_CREATION, now, {"datagram": str(dgram)})
        if dgram.kind is DatagramKind.PACKET:
            self._delivered_packets.add(dgram.id)
            while self._first_missing in self._delivered_packets:
                self._first_missing += 1
        else:
            self._ack_high_before = self._ack_high
            self._ack_high = max(self._ack_high, dgram.id)
            self._last_ack_delivered = dgram.id

    def on_ack_emitted(self, ack: int, now: int):
        """El único ACK legal es el menor id no entregado: {1..a-1} entregados y a no"""
        if ack != self._first_missing:
            self.record(RECEIVER_CUMULATIVE, now, {"ack": ack, "first_missing": self._first_missing})

    def on_ack_processed(self, ack: int, highest_before: int, highest_after: int, now: int):
        if highest_after < highest_before:
            self.record(ACK_MONOTONIC, now, {"before": highest_before, "after": highest_after})
        if ack > highest_before and ack - 1 > self._highest_packet:
            self.record(NO_CREATION, now, {"ack": ack, "highest_sent": self._highest_packet})

    def on_sample(self, sample: RttSample, now: int):
        tx_times = self._tx_times.get(sample.packet_id, [])
        if len(tx_times) != 1 or sample.rtt != now - tx_times[0]:
            self.record(
                KARN_SINGLE_TRANSMISSION,
                now,
                {"packet_id": sample.packet_id, "rtt": sample.rtt, "tx_times": list(tx_times)},
            )
        if self.min_round_trip is not None and sample.rtt < self.min_round_trip:
            self.record(PESSIMISM, now, {"rtt": sample.rtt, "min_round_trip": self.min_round_trip})
        # el paquete medido es el mayor ACK entregado antes y el ACK actual es el primero que lo supera
        if self.fifo_acks and (
            sample.packet_id != self._ack_high_before or self._last_ack_delivered <= sample.packet_id
        ):
            self.record(
                FIFO_SAMPLE_ID,
                now,
                {
                    "packet_id": sample.packet_id,
                    "previous_highest_ack": self._ack_high_before,
                    "ack": self._last_ack_delivered,
                },
            )

    def violations(self, name: Optional[str] = None) -> List[InvariantRecord]:
        if name is None:
            return list(self.log)
        return [entry for entry in self.log if entry.invariant_name == name]
