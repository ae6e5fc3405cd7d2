"""
RTO Forge - Window Policy
Política por defecto: ventana de W paquetes y retransmisión del menor no reconocido al expirar el RTO
"""

import logging
from typing import List

from ...errors import DomainError
from ..endpoints import SenderState
from .base_policy import BaseSendPolicy

logger = logging.getLogger(__name__)


class WindowPolicy(BaseSendPolicy):
    """
    Envía el siguiente paquete en cada tick mientras haya menos de W sin reconocer.

    Si now - última actividad > rto retransmite un único paquete, el menor no
    reconocido; la retransmisión cuenta como actividad y rearma el temporizador.
    """

    def __init__(self, window: int = 1):
        super().__init__("window")
        if isinstance(window, bool) or not isinstance(window, int) or window < 1:
            raise DomainError(f"window must be an integer >= 1, got {window!r}")
        self.window = window
        self._config = {"window": window}

    def decide(self, sender: SenderState, now: int) -> List[int]:
        if sender.done:
            return []
        if sender.timed_out(now):
            lowest = sender.highest_ack_received
            logger.debug("t=%d timeout (rto=%s), retransmitting packet %d", now, sender.rto, lowest)
            return [lowest]
        if sender.outstanding < self.window and sender.next_to_send <= sender.n_packets:
            return [sender.next_to_send]
        return []

    def finished(self, sender: SenderState, now: int) -> bool:
        return sender.done
