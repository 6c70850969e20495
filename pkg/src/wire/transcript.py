"""Append-only frame transcript with digests."""

import hashlib
import time
from typing import List, Optional

from pydantic import BaseModel, ConfigDict

from ..monitoring.logger import ibbs_logger
from ..utils.config import config
from .codec import SECRET_TYPES, Frame, MsgType

SENT = "sent"
RECEIVED = "received"


class TranscriptEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    timestamp: float
    endpoint: str
    direction: str
    msg_type: str
    length: int
    digest: str
    payload: Optional[str] = None


class TranscriptLog:
    """Frames seen by one endpoint, in order.

    Full payloads are kept only when ``include_payloads`` is set, and never
    for key frames.
    """

    def __init__(self, endpoint: str, include_payloads: Optional[bool] = None,
                 sink: bool = True):
        self.endpoint = endpoint
        if include_payloads is None:
            include_payloads = config.get("wire.log_payloads", False)
        self.include_payloads = include_payloads
        self.sink = sink
        self.entries: List[TranscriptEntry] = []

    def record(self, direction: str, frame: Frame) -> TranscriptEntry:
        keep = self.include_payloads and frame.msg_type not in SECRET_TYPES
        entry = TranscriptEntry(
            timestamp=time.time(),
            endpoint=self.endpoint,
            direction=direction,
            msg_type=frame.msg_type.name,
            length=len(frame.payload),
            digest=hashlib.sha256(frame.payload).hexdigest(),
            payload=frame.payload.hex() if keep else None,
        )
        self.entries.append(entry)
        if self.sink:
            ibbs_logger.log_frame(entry.model_dump())
        return entry

    def msg_types(self, direction: Optional[str] = None) -> List[str]:
        return [e.msg_type for e in self.entries if direction is None or e.direction == direction]

    def count(self, msg_type: MsgType) -> int:
        return sum(1 for e in self.entries if e.msg_type == msg_type.name)

    def __len__(self) -> int:
        return len(self.entries)
