"""Tests for frame-level fault injection."""

import asyncio
import random

import pytest

from src.fault_injection.fault_manager import (
    FaultManager,
    FaultType,
    FaultyTransport,
    flip_last_bit,
    set_ternary_code_11,
)
from src.protocols.ibbs import ibbs_extract, ibbs_setup
from src.utils.errors import (
    ExitCode,
    RemoteError,
    RetryLimitExceededError,
    TransportTimeoutError,
    WireDecodeError,
)
from src.utils.models import SessionRole
from src.wire.codec import Frame, MsgType, SessionStatus, decode_frame, encode_frame
from src.wire.session_runner import BlindSessionInputs, run_blind_session
from src.wire.transport import pipe_pair
from tests.conftest import make_toy

ALICE = b"alice@example.org"
N_ENTRIES = 16


def _inputs(limit=None):
    rng = random.Random(12)
    backend = make_toy(101, n=N_ENTRIES)
    params, msk = ibbs_setup(backend, rng, mode="otter")
    keys = ibbs_extract(backend, params, msk, ALICE, rng)
    signer = BlindSessionInputs(backend=backend, params=params, rng=random.Random(13),
                                keys=keys, limit=limit)
    user = BlindSessionInputs(backend=backend, params=params, rng=random.Random(14),
                              pk=keys.pk, identity=ALICE, message=b"m", limit=limit)
    return signer, user


async def _run(signer_transport, user_transport, limit=None):
    signer_inputs, user_inputs = _inputs(limit)
    return await asyncio.gather(
        run_blind_session(signer_transport, SessionRole.SIGNER, signer_inputs),
        run_blind_session(user_transport, SessionRole.USER, user_inputs),
        return_exceptions=True,
    )


class TestMutations:
    def test_flip_last_bit(self):
        assert flip_last_bit(b"\x01\x06") == b"\x01\x04"
        assert flip_last_bit(b"\x00") == b"\x01"
        assert flip_last_bit(b"\x64") == b"\x60"
        assert flip_last_bit(b"") == b""

    def test_code_11(self):
        assert set_ternary_code_11(b"\x61") == b"\xe1"
        assert set_ternary_code_11(b"\x61", entry=3) == b"\x63"
        assert set_ternary_code_11(b"\x00\x00", entry=4) == b"\x00\xc0"
        assert set_ternary_code_11(b"\x00", entry=9) == b"\x00"


class TestFaultManager:
    def test_occurrence_and_stats(self):
        manager = FaultManager()
        fired = []
        manager.add_fault_callback(lambda spec: fired.append(spec.msg_type))
        manager.schedule_fault(FaultType.TRUNCATE, MsgType.RHO_S2, occurrence=2, parameters={"bytes": 2})
        frame = encode_frame(Frame(msg_type=MsgType.RHO_S2, payload=b"\x01\x02\x03"))

        assert manager.apply(frame) == frame
        truncated = decode_frame(manager.apply(frame))
        assert truncated.payload == b"\x01"
        assert manager.apply(frame) == frame

        stats = manager.get_statistics()
        assert stats["frames_inspected"] == 3
        assert stats["total_faults_injected"] == 1
        assert stats["faults_by_type"] == {"truncate": 1}
        assert stats["pending_faults"] == 0
        assert fired == [MsgType.RHO_S2]

    def test_drop_and_clear(self):
        manager = FaultManager()
        manager.schedule_fault(FaultType.DROP, MsgType.RHO_S1)
        frame = encode_frame(Frame(msg_type=MsgType.RHO_S1, payload=b"\x00"))
        other = encode_frame(Frame(msg_type=MsgType.RHO_U, payload=b"\x00"))
        assert manager.apply(other) == other
        assert manager.apply(frame) is None
        manager.clear_faults()
        assert manager.get_statistics()["pending_faults"] == 0
        assert manager.apply(frame) == frame


class TestSessionFaults:
    """Faults injected into live blind-signing sessions."""

    @pytest.mark.asyncio
    async def test_bit_flip_on_second_signer_message(self):
        signer_end, user_end = pipe_pair(transcripts=False)
        manager = FaultManager()
        manager.schedule_fault(FaultType.BIT_FLIP, MsgType.RHO_S2)
        signer, user = await _run(FaultyTransport(signer_end, manager), user_end, limit=1)

        assert isinstance(user, RetryLimitExceededError)
        assert user.failures == [((1, N_ENTRIES - 1),)]
        assert signer.status == SessionStatus.ABORT

    @pytest.mark.asyncio
    async def test_bit_flip_recovered_by_retry(self):
        signer_end, user_end = pipe_pair(transcripts=False)
        manager = FaultManager()
        manager.schedule_fault(FaultType.BIT_FLIP, MsgType.RHO_S2)
        signer, user = await _run(FaultyTransport(signer_end, manager), user_end, limit=2)

        assert user.status == SessionStatus.ACCEPTED
        assert user.attempts == 2
        assert user.failures == [((1, N_ENTRIES - 1),)]
        assert signer.attempts == 2

    @pytest.mark.asyncio
    async def test_invalid_ternary_code(self):
        signer_end, user_end = pipe_pair(transcripts=False)
        manager = FaultManager()
        manager.schedule_fault(FaultType.TERNARY_CODE_11, MsgType.RHO_U, parameters={"entry": 5})
        signer, user = await _run(signer_end, FaultyTransport(user_end, manager))

        assert isinstance(signer, WireDecodeError)
        assert isinstance(user, RemoteError)
        assert user.code == ExitCode.DECODE

    @pytest.mark.asyncio
    async def test_dropped_frame_times_out(self):
        signer_end, user_end = pipe_pair(transcripts=False, recv_timeout=0.2)
        manager = FaultManager()
        manager.schedule_fault(FaultType.DROP, MsgType.RHO_S1)
        signer, user = await _run(FaultyTransport(signer_end, manager), user_end)

        assert isinstance(user, TransportTimeoutError)
        assert isinstance(signer, TransportTimeoutError)

    @pytest.mark.asyncio
    async def test_truncated_frame(self):
        signer_end, user_end = pipe_pair(transcripts=False)
        manager = FaultManager()
        manager.schedule_fault(FaultType.TRUNCATE, MsgType.RHO_S2)
        signer, user = await _run(FaultyTransport(signer_end, manager), user_end)

        assert isinstance(user, WireDecodeError)
        assert isinstance(signer, RemoteError)
        assert manager.get_statistics()["total_faults_injected"] == 1
