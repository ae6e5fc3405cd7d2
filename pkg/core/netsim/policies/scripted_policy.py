"""
RTO Forge - Scripted Policy
Transmisiones explícitas (tick, paquete) para reproducir cronogramas concretos
"""

from collections import defaultdict
from typing import Dict, Iterable, List, Tuple

from ..endpoints import SenderState
from .base_policy import BaseSendPolicy


class ScriptedPolicy(BaseSendPolicy):
    """Transmite exactamente lo que dice el guion y termina al reconocerse todo o al agotarlo"""

    def __init__(self, transmissions: Iterable[Tuple[int, int]], drain_ticks: int = 10):
        super().__init__("scripted")
        self._schedule: Dict[int, List[int]] = defaultdict(list)
        for tick, packet_id in transmissions:
            self._schedule[tick].append(packet_id)
        self._last_tick = max(self._schedule, default=0)
        self.drain_ticks = drain_ticks
        self._config = {"transmissions": sum(len(v) for v in self._schedule.values()), "drain_ticks": drain_ticks}

    def decide(self, sender: SenderState, now: int) -> List[int]:
        return list(self._schedule.get(now, []))

    def finished(self, sender: SenderState, now: int) -> bool:
        return sender.done or now >= self._last_tick + self.drain_ticks
