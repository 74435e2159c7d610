"""Chat sessions and turn history."""

import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone


@dataclass(frozen=True)
class ChatTurn:
    role: str  # "user" | "assistant"
    text: str
    timestamp: datetime
    trace_id: str = ""


@dataclass
class ChatSession:
    """Turn history plus the admission lock that serializes a session.

    ``history_window`` counts exchanges (a user turn and the assistant turn
    that answers it), not individual turns.
    """

    id: str
    turns: list[ChatTurn] = field(default_factory=list)
    history_window: int = 5
    lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)

    def append(self, role: str, text: str, trace_id: str = "") -> ChatTurn:
        turn = ChatTurn(role=role, text=text, timestamp=datetime.now(timezone.utc), trace_id=trace_id)
        self.turns.append(turn)
        return turn

    def recent_turns(self, window: int | None = None) -> list[ChatTurn]:
        """Turns of the last ``window`` exchanges, oldest first."""
        window = self.history_window if window is None else window
        if window <= 0:
            return []
        exchanges: list[list[ChatTurn]] = []
        for turn in self.turns:
            if turn.role == "user" or not exchanges:
                exchanges.append([turn])
            else:
                exchanges[-1].append(turn)
        return [turn for exchange in exchanges[-window:] for turn in exchange]
