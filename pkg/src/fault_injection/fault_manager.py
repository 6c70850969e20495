"""Frame-level fault injection for session transports."""

from enum import Enum
from typing import Any, Callable, Dict, List, Optional

from loguru import logger
from pydantic import BaseModel, Field

from ..monitoring.logger import ibbs_logger
from ..wire.codec import Frame, MsgType, decode_frame, encode_frame
from ..wire.transport import FrameTransport


class FaultType(str, Enum):
    """Types of faults that can be injected into outgoing frames."""
    BIT_FLIP = "bit_flip"
    TERNARY_CODE_11 = "ternary_code_11"
    DROP = "drop"
    TRUNCATE = "truncate"


class FaultSpec(BaseModel):
    """Fault applied to the ``occurrence``-th frame of ``msg_type`` (1-based)."""
    fault_type: FaultType
    msg_type: MsgType
    occurrence: int = Field(default=1, ge=1)
    parameters: Dict[str, Any] = Field(default_factory=dict)
    fired: bool = False


def flip_last_bit(payload: bytes) -> bytes:
    """Change the last payload byte while keeping the value it ends no larger.

    Clears the lowest set bit, or sets bit 0 of a zero byte, so a fixed-width
    field stays below its modulus in all but the edge case of a value one
    below the modulus ending in a zero byte.
    """
    if not payload:
        return payload
    last = payload[-1]
    mutated = last & (last - 1) if last else 1
    return payload[:-1] + bytes([mutated])


def set_ternary_code_11(payload: bytes, entry: int = 0) -> bytes:
    """Overwrite one packed ternary entry with the invalid code 11."""
    index, shift = entry >> 2, 6 - 2 * (entry & 3)
    if index >= len(payload):
        return payload
    out = bytearray(payload)
    out[index] |= 0b11 << shift
    return bytes(out)


class FaultManager:
    """Schedules faults by frame type and occurrence and applies them to encoded frames."""

    def __init__(self):
        self.faults: List[FaultSpec] = []
        self.seen: Dict[MsgType, int] = {}
        self.stats = {
            "total_faults_scheduled": 0,
            "total_faults_injected": 0,
            "frames_inspected": 0,
            "faults_by_type": {},
        }
        self.fault_callbacks: List[Callable[[FaultSpec], None]] = []

    def schedule_fault(self, fault_type: FaultType, msg_type: MsgType, occurrence: int = 1,
                       parameters: Optional[Dict[str, Any]] = None) -> FaultSpec:
        """Schedule a fault.

        Args:
            fault_type: Type of fault to inject
            msg_type: Frame type the fault applies to
            occurrence: Which frame of that type (1-based)
            parameters: Fault parameters (``bytes`` for truncation, ``entry`` for code 11)

        Returns:
            The scheduled fault
        """
        spec = FaultSpec(fault_type=fault_type, msg_type=msg_type, occurrence=occurrence,
                         parameters=parameters or {})
        self.faults.append(spec)
        self.stats["total_faults_scheduled"] += 1
        logger.debug(f"Scheduled {fault_type.value} on {msg_type.name} #{occurrence}")
        return spec

    def clear_faults(self) -> None:
        self.faults.clear()
        self.seen.clear()

    def add_fault_callback(self, callback: Callable[[FaultSpec], None]) -> None:
        self.fault_callbacks.append(callback)

    def apply(self, data: bytes) -> Optional[bytes]:
        """Encoded frame after any due fault; None when the frame is dropped."""
        frame = decode_frame(data)
        self.stats["frames_inspected"] += 1
        count = self.seen.get(frame.msg_type, 0) + 1
        self.seen[frame.msg_type] = count

        for spec in self.faults:
            if spec.fired or spec.msg_type != frame.msg_type or spec.occurrence != count:
                continue
            spec.fired = True
            self._record(spec)
            if spec.fault_type == FaultType.DROP:
                return None
            frame = self._mutate(spec, frame)
        return encode_frame(frame)

    def _mutate(self, spec: FaultSpec, frame: Frame) -> Frame:
        payload = frame.payload
        if spec.fault_type == FaultType.BIT_FLIP:
            payload = flip_last_bit(payload)
        elif spec.fault_type == FaultType.TERNARY_CODE_11:
            payload = set_ternary_code_11(payload, int(spec.parameters.get("entry", 0)))
        elif spec.fault_type == FaultType.TRUNCATE:
            cut = int(spec.parameters.get("bytes", 1))
            payload = payload[:max(0, len(payload) - cut)]
        return Frame(msg_type=frame.msg_type, payload=payload, version=frame.version)

    def _record(self, spec: FaultSpec) -> None:
        self.stats["total_faults_injected"] += 1
        by_type = self.stats["faults_by_type"]
        by_type[spec.fault_type.value] = by_type.get(spec.fault_type.value, 0) + 1
        ibbs_logger.log_fault(spec.fault_type.value, spec.msg_type.name,
                              {"occurrence": spec.occurrence, **spec.parameters})
        for callback in self.fault_callbacks:
            try:
                callback(spec)
            except Exception as e:
                logger.error(f"Error in fault callback: {e}")

    def get_statistics(self) -> Dict[str, Any]:
        return {
            **self.stats,
            "pending_faults": sum(1 for f in self.faults if not f.fired),
        }


class FaultyTransport(FrameTransport):
    """Wraps a transport and passes outgoing frames through a FaultManager."""

    def __init__(self, inner: FrameTransport, manager: FaultManager):
        super().__init__(inner.name, transcript=inner.transcript, recv_timeout=inner.recv_timeout)
        self.inner = inner
        self.manager = manager

    async def send_bytes(self, data: bytes) -> None:
        mutated = self.manager.apply(data)
        if mutated is not None:
            await self.inner.send_bytes(mutated)

    async def recv_bytes(self) -> bytes:
        return await self.inner.recv_bytes()

    async def close(self) -> None:
        await self.inner.close()
