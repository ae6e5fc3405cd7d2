"""
RTO Forge - Network Simulation
Bucle de eventos discretos (simpy) que une canal, emisor, receptor y monitores
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import simpy

from ..errors import DomainError, InvariantViolation
from ..exactnum import RationalLike, as_rational
from ..rtocalc import RtoParams, RtoState, run
from .channel import BaseChannel, Channel, ChannelConfig
from .endpoints import ReceiverState, SenderState
from .model import AmbiguityRecord, Datagram, DatagramKind, InvariantRecord, RttSample, SimCounters
from .monitors import InvariantMonitor
from .policies import BaseSendPolicy, WindowPolicy

logger = logging.getLogger(__name__)

DEFAULT_MAX_TICKS = 100_000

ChannelFactory = Callable[[simpy.Environment], BaseChannel]


@dataclass(frozen=True)
class SimulationConfig:
    """
    Parámetros de una simulación

    initial_rto por defecto es 2 * max_delay + 1, suficiente para que el primer
    paquete no expire antes de su ACK en un canal sin pérdidas.
    """

    channel: ChannelConfig
    n_packets: int
    params: RtoParams
    window: int = 1
    initial_rto: Optional[Fraction] = None
    max_ticks: int = DEFAULT_MAX_TICKS

    def __post_init__(self):
        if self.n_packets < 1:
            raise DomainError(f"n_packets must be >= 1, got {self.n_packets}")
        if self.window < 1:
            raise DomainError(f"window must be >= 1, got {self.window}")
        if self.max_ticks < 1:
            raise DomainError(f"max_ticks must be >= 1, got {self.max_ticks}")
        if self.initial_rto is not None:
            rto = as_rational(self.initial_rto)
            if rto <= 0:
                raise DomainError("initial_rto must be > 0")
            object.__setattr__(self, "initial_rto", rto)

    @property
    def start_rto(self) -> Fraction:
        if self.initial_rto is not None:
            return self.initial_rto
        return Fraction(2 * self.channel.max_delay + 1)


@dataclass(frozen=True)
class SimReport:
    """Resultado inmutable de una simulación; dos ejecuciones con la misma semilla son iguales"""

    samples: Tuple[RttSample, ...]
    trace: Tuple[RtoState, ...]
    invariant_log: Tuple[InvariantRecord, ...]
    ambiguities: Tuple[AmbiguityRecord, ...]
    final_state: Optional[RtoState]
    counters: SimCounters
    completed: bool
    ticks: int

    @property
    def ok(self) -> bool:
        return not self.invariant_log

    def violations(self, name: str) -> List[InvariantRecord]:
        return [entry for entry in self.invariant_log if entry.invariant_name == name]

    def samples_for(self, packet_id: int) -> List[RttSample]:
        return [s for s in self.samples if s.packet_id == packet_id]


class NetworkSimulation:
    """
    Modelo de dos extremos sobre un reloj global de ticks enteros

    En cada tick se procesan primero las entregas planificadas para ese tick y
    después la política decide las transmisiones del emisor.
    """

    def __init__(
        self,
        config: SimulationConfig,
        policy: Optional[BaseSendPolicy] = None,
        channel_factory: Optional[ChannelFactory] = None,
        min_round_trip: Optional[int] = None,
    ):
        self.config = config
        self.env = simpy.Environment()
        if channel_factory is None:
            self.channel: BaseChannel = Channel(self.env, config.channel)
            min_round_trip = 2 * config.channel.min_delay
        else:
            self.channel = channel_factory(self.env)
        self.policy = policy or WindowPolicy(config.window)
        self.sender = SenderState(config.n_packets, config.params, config.start_rto)
        self.receiver = ReceiverState()
        self.monitor = InvariantMonitor(min_round_trip, fifo_acks=self.channel.fifo_acks)
        self._counters: Dict[str, int] = {"transmissions": 0, "retransmissions": 0, "deliveries": 0, "acks_received": 0}
        self.channel.connect(DatagramKind.PACKET, self._on_packet)
        self.channel.connect(DatagramKind.ACK, self._on_ack)

    @property
    def now(self) -> int:
        return int(self.env.now)

    def _send(self, dgram: Datagram):
        self.monitor.on_transmit(dgram, self.now)
        self.channel.transmit(dgram)

    def _on_packet(self, dgram: Datagram):
        self._counters["deliveries"] += 1
        self.monitor.on_delivery(dgram, self.now)
        ack = self.receiver.on_packet(dgram.id)
        self.monitor.on_ack_emitted(ack, self.now)
        self._send(Datagram.ack(ack))

    def _on_ack(self, dgram: Datagram):
        now = self.now
        self._counters["acks_received"] += 1
        self.monitor.on_delivery(dgram, now)
        before = self.sender.highest_ack_received
        try:
            sample = self.sender.on_ack(dgram.id, now)
        except InvariantViolation as error:
            self.monitor.record_violation(error)
            return
        if sample is not None:
            self.monitor.on_sample(sample, now)
        self.monitor.on_ack_processed(dgram.id, before, self.sender.highest_ack_received, now)

    def _sender_loop(self):
        while True:
            yield self.env.timeout(1)
            # deja pasar las entregas ya planificadas para este tick
            yield self.env.timeout(0)
            now = self.now
            if self.policy.finished(self.sender, now) or now > self.config.max_ticks:
                return
            for packet_id in self.policy.decide(self.sender, now):
                try:
                    record = self.sender.record_transmission(packet_id, now)
                except InvariantViolation as error:
                    self.monitor.record_violation(error)
                    continue
                self._counters["transmissions"] += 1
                if record.tx_count > 1:
                    self._counters["retransmissions"] += 1
                self._send(Datagram.packet(packet_id))

    def run(self) -> SimReport:
        """
        Ejecuta la simulación hasta que la política termina o se alcanza max_ticks

        Returns:
            SimReport con las muestras, la traza de rtocalc y el log de invariantes
        """
        self.env.run(until=self.env.process(self._sender_loop()))
        samples = tuple(self.sender.samples)
        trace = tuple(run(self.config.params, [s.rtt for s in samples])) if samples else ()
        report = SimReport(
            samples=samples,
            trace=trace,
            invariant_log=tuple(self.monitor.log),
            ambiguities=tuple(self.sender.ambiguities),
            final_state=trace[-1] if trace else None,
            counters=SimCounters(**self._counters),
            completed=self.sender.done,
            ticks=self.now,
        )
        logger.info(
            "simulation finished at t=%d: %d samples, %d ambiguous ACKs, %d violations, completed=%s",
            report.ticks, len(report.samples), len(report.ambiguities), len(report.invariant_log), report.completed,
        )
        return report


def run_simulation(
    cfg: ChannelConfig,
    n_packets: int,
    params: RtoParams,
    send_policy: Optional[BaseSendPolicy] = None,
    *,
    window: int = 1,
    initial_rto: Optional[RationalLike] = None,
    max_ticks: int = DEFAULT_MAX_TICKS,
) -> SimReport:
    """
    Simula n_packets sobre un canal aleatorio

    Args:
        cfg: Configuración del canal (incluye la semilla)
        n_packets: Paquetes a entregar (>= 1)
        params: Parámetros del cálculo de RTO
        send_policy: Política de envío (WindowPolicy(window) si no se indica)
        window: Tamaño de ventana de la política por defecto
        initial_rto: RTO antes de la primera muestra
        max_ticks: Límite de ticks simulados

    Returns:
        SimReport determinista para la semilla dada
    """
    config = SimulationConfig(
        cfg, n_packets, params, window, as_rational(initial_rto) if initial_rto is not None else None, max_ticks
    )
    return NetworkSimulation(config, send_policy).run()
