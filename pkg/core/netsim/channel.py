"""
RTO Forge - Channel
Canal no fiable sobre simpy: pierde, retrasa, duplica y reordena datagramas, nunca los crea
"""

import logging
from abc import ABC, abstractmethod
from collections import Counter
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import simpy
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .model import Datagram, DatagramKind

logger = logging.getLogger(__name__)

DeliveryHandler = Callable[[Datagram], None]
FateKey = Tuple[DatagramKind, int, int]


class ChannelConfig(BaseModel):
    """
    Configuración del canal aleatorio

    Los retardos son enteros en ticks, uniformes en [min_delay, max_delay].
    """

    model_config = ConfigDict(frozen=True)

    drop_prob: float = Field(default=0.0, ge=0.0, le=1.0)
    dup_prob: float = Field(default=0.0, ge=0.0, le=1.0)
    min_delay: int = Field(default=1, ge=1)
    max_delay: int = Field(default=3, ge=1)
    fifo_acks: bool = False
    seed: int = Field(default=0, ge=0, lt=2 ** 64)

    @model_validator(mode="after")
    def _check_delays(self) -> "ChannelConfig":
        if self.max_delay < self.min_delay:
            raise ValueError(f"max_delay ({self.max_delay}) must be >= min_delay ({self.min_delay})")
        return self


class BaseChannel(ABC):
    """
    Clase base de los canales

    Cada transmisión se resuelve en una lista de retardos: vacía si se pierde,
    uno por copia entregada en otro caso. En modo fifo_acks la entrega de un ACK
    nunca se adelanta a la del último ACK ya planificado.
    """

    def __init__(self, env: simpy.Environment, fifo_acks: bool = False):
        self.env = env
        self.fifo_acks = fifo_acks
        self.sent: Counter = Counter()
        self.delivered: Counter = Counter()
        self._handlers: Dict[DatagramKind, DeliveryHandler] = {}
        self._last_ack_delivery = 0

    def connect(self, kind: DatagramKind, handler: DeliveryHandler):
        """Registra quién recibe los datagramas de un tipo (receptor o emisor)"""
        self._handlers[DatagramKind(kind)] = handler

    @abstractmethod
    def _fates(self, dgram: Datagram) -> List[int]:
        """Retardos de las copias que llegarán; lista vacía si se pierde"""
        pass

    def transmit(self, dgram: Datagram) -> List[int]:
        """
        Entrega el datagrama al canal

        Returns:
            Ticks absolutos de entrega planificados (vacío si se pierde)
        """
        now = int(self.env.now)
        self.sent[(dgram.kind, dgram.id)] += 1
        arrivals = []
        for delay in self._fates(dgram):
            at = now + delay
            if self.fifo_acks and dgram.kind is DatagramKind.ACK:
                at = max(at, self._last_ack_delivery)
                self._last_ack_delivery = at
            arrivals.append(at)
            self.env.process(self._deliver(dgram, at - now))
        if not arrivals:
            logger.debug("t=%d %s dropped", now, dgram)
        return arrivals

    def _deliver(self, dgram: Datagram, delay: int):
        yield self.env.timeout(delay)
        self.delivered[(dgram.kind, dgram.id)] += 1
        handler = self._handlers.get(dgram.kind)
        if handler is not None:
            handler(dgram)


class Channel(BaseChannel):
    """
    Canal aleatorio con numpy Generator(PCG64(seed))

    Orden de consumo del generador por transmisión: pérdida, retardo,
    duplicado y, si lo hay, el retardo de la copia.
    """

    def __init__(self, env: simpy.Environment, config: ChannelConfig):
        super().__init__(env, config.fifo_acks)
        self.config = config
        self._rng = np.random.Generator(np.random.PCG64(config.seed))

    def _draw_delay(self) -> int:
        return int(self._rng.integers(self.config.min_delay, self.config.max_delay + 1))

    def _fates(self, dgram: Datagram) -> List[int]:
        if self._rng.random() < self.config.drop_prob:
            return []
        delays = [self._draw_delay()]
        if self._rng.random() < self.config.dup_prob:
            delays.append(self._draw_delay())
        return delays


class ScriptedChannel(BaseChannel):
    """
    Canal con destinos fijados de antemano

    fates asocia (kind, id, ocurrencia) a la lista de retardos; la ocurrencia
    cuenta desde 0 las transmisiones de ese mismo datagrama.
    """

    def __init__(
        self,
        env: simpy.Environment,
        fates: Mapping[FateKey, Sequence[int]],
        fifo_acks: bool = False,
        default_delay: Optional[int] = None,
    ):
        super().__init__(env, fifo_acks)
        for key, delays in fates.items():
            if any(d < 0 for d in delays):
                raise ValueError(f"negative delay in script for {key}")
        self._fates_table = {key: list(delays) for key, delays in fates.items()}
        self._default_delay = default_delay

    def _fates(self, dgram: Datagram) -> List[int]:
        occurrence = self.sent[(dgram.kind, dgram.id)] - 1
        key = (dgram.kind, dgram.id, occurrence)
        if key in self._fates_table:
            return list(self._fates_table[key])
        if self._default_delay is None:
            return []
        return [self._default_delay]
