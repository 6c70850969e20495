"""Drive the blind-signature and identification state machines over a transport."""

import random
import uuid
from typing import List, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict

from ..action.base_backend import ActionBackend
from ..monitoring.logger import ibbs_logger
from ..protocols.ibbs import (
    BlindSignature,
    IbbsParams,
    IbbsPublicKey,
    IbbsUserKeys,
    MismatchIndex,
    ibbs_s1,
    ibbs_s2,
    ibbs_u1,
    ibbs_u2,
)
from ..protocols.ibid import (
    IbidParams,
    IbidUserKey,
    ibid_prove_commit,
    ibid_respond,
    ibid_verifier_challenge,
    ibid_verifier_commit,
    ibid_verifier_decide,
    ibid_verifier_session,
)
from ..utils.errors import (
    IbbsError,
    ParameterError,
    ProtocolError,
    RemoteError,
    RetryLimitExceededError,
    TransportError,
)
from ..utils.models import SessionRole
from .codec import MsgType, SessionStatus, WireCodec, decode_session_end, error_frame, session_end_frame
from .transport import FrameTransport


class BlindSessionInputs(BaseModel):
    """Role-specific inputs; the signer never receives the message."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    backend: ActionBackend
    params: IbbsParams
    rng: random.Random
    keys: Optional[IbbsUserKeys] = None
    pk: Optional[IbbsPublicKey] = None
    identity: bytes = b""
    message: bytes = b""
    limit: Optional[int] = None


class BlindSessionOutcome(BaseModel):
    role: SessionRole
    attempts: int
    status: SessionStatus
    signature: Optional[BlindSignature] = None
    failures: List[Tuple[MismatchIndex, ...]] = []


class IbidSessionInputs(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    backend: ActionBackend
    params: IbidParams
    rng: random.Random
    usk: Optional[IbidUserKey] = None
    identity: bytes = b""


async def _report_error(transport: FrameTransport, error: IbbsError) -> None:
    """Tell the peer why the session ends, unless the peer or the stream is the cause."""
    if not isinstance(error, (RemoteError, TransportError)):
        try:
            await transport.send_frame(error_frame(error.exit_code, str(error)))
        except IbbsError:
            pass


async def _blind_signer(transport: FrameTransport, inputs: BlindSessionInputs,
                        codec: WireCodec, session_id: str) -> BlindSessionOutcome:
    if inputs.keys is None:
        raise ParameterError("signer endpoint needs user keys")
    limit = inputs.limit or inputs.params.retry_limit
    attempts = 0
    while True:
        attempts += 1
        # fresh state every attempt
        rho_s1, session = ibbs_s1(inputs.backend, inputs.params, inputs.keys, inputs.rng)
        await transport.send_frame(codec.encode_rho_s1(rho_s1))
        rho_u = codec.decode_rho_u(await transport.expect(MsgType.RHO_U))
        rho_s2 = ibbs_s2(inputs.backend, inputs.params, session, inputs.keys, rho_u)
        await transport.send_frame(codec.encode_rho_s2(rho_s2))

        status = decode_session_end(await transport.expect(MsgType.SESSION_END))
        ibbs_logger.log_session_event(session_id, SessionRole.SIGNER.value, status.name.lower(),
                                      {"attempt": attempts})
        if status != SessionStatus.RETRY:
            return BlindSessionOutcome(role=SessionRole.SIGNER, attempts=attempts, status=status)
        if attempts >= limit:
            raise ProtocolError(f"user requested attempt {attempts + 1} beyond the limit of {limit}")


async def _blind_user(transport: FrameTransport, inputs: BlindSessionInputs,
                      codec: WireCodec, session_id: str) -> BlindSessionOutcome:
    if inputs.pk is None:
        raise ParameterError("user endpoint needs the signer's public key")
    limit = inputs.limit or inputs.params.retry_limit
    failures: List[Tuple[MismatchIndex, ...]] = []
    for attempt in range(1, limit + 1):
        rho_s1 = codec.decode_rho_s1(await transport.expect(MsgType.RHO_S1))
        rho_u, session = ibbs_u1(inputs.backend, inputs.params, rho_s1, inputs.message, inputs.rng)
        await transport.send_frame(codec.encode_rho_u(rho_u))
        rho_s2 = codec.decode_rho_s2(await transport.expect(MsgType.RHO_S2))
        outcome = ibbs_u2(inputs.backend, inputs.params, inputs.pk, inputs.identity, session, rho_s2)

        if outcome.signature is not None:
            await transport.send_frame(session_end_frame(SessionStatus.ACCEPTED))
            ibbs_logger.log_session_event(session_id, SessionRole.USER.value, "accepted", {"attempt": attempt})
            return BlindSessionOutcome(role=SessionRole.USER, attempts=attempt, status=SessionStatus.ACCEPTED,
                                       signature=outcome.signature, failures=failures)

        failures.append(outcome.mismatched_indices)
        ibbs_logger.log_session_event(session_id, SessionRole.USER.value, "rejected",
                                      {"attempt": attempt, "mismatched": list(outcome.mismatched_indices)})
        last = attempt == limit
        await transport.send_frame(session_end_frame(SessionStatus.ABORT if last else SessionStatus.RETRY))
    raise RetryLimitExceededError(limit, failures)


async def run_blind_session(transport: FrameTransport, role: SessionRole,
                            inputs: BlindSessionInputs) -> BlindSessionOutcome:
    """Run S1 -> U1 -> S2 -> U2 (plus SESSION_END) until a signature or the retry limit.

    Args:
        transport: Connected frame transport
        role: SIGNER or USER
        inputs: Role inputs; both ends share ``params``

    Returns:
        Outcome for this endpoint; the user's carries the signature

    Raises:
        RetryLimitExceededError: User side, when every attempt was rejected
        ProtocolError: On out-of-order frames or a peer error frame
        WireDecodeError: On malformed frames
        TransportError: On stream failure or timeout
    """
    codec = WireCodec(inputs.params.action, inputs.params.n)
    session_id = uuid.uuid4().hex[:12]
    ibbs_logger.log_session_event(session_id, role.value, "start",
                                  {"mode": inputs.params.mode.value, "n": inputs.params.n})
    try:
        if role == SessionRole.SIGNER:
            return await _blind_signer(transport, inputs, codec, session_id)
        if role == SessionRole.USER:
            return await _blind_user(transport, inputs, codec, session_id)
        raise ParameterError(f"role {role.value} does not take part in blind signing")
    except RetryLimitExceededError:
        raise
    except IbbsError as e:
        logger.error(f"Blind session {session_id} [{role.value}] failed: {e}")
        await _report_error(transport, e)
        raise


async def _ibid_prover(transport: FrameTransport, inputs: IbidSessionInputs, codec: WireCodec) -> bool:
    if inputs.usk is None:
        raise ParameterError("prover endpoint needs an identity key")
    message, session = ibid_prove_commit(inputs.backend, inputs.params, inputs.usk, inputs.rng)
    await transport.send_frame(codec.encode_id_commit(message))
    v = codec.decode_id_challenge(await transport.expect(MsgType.ID_CHALLENGE))
    z = ibid_respond(inputs.backend, session, inputs.usk, v)
    await transport.send_frame(codec.encode_id_response(z))
    status = decode_session_end(await transport.expect(MsgType.SESSION_END))
    return status == SessionStatus.ACCEPTED


async def _ibid_verifier(transport: FrameTransport, inputs: IbidSessionInputs, codec: WireCodec) -> bool:
    session = ibid_verifier_session()
    ibid_verifier_commit(session, codec.decode_id_commit(await transport.expect(MsgType.ID_COMMIT)))
    v = ibid_verifier_challenge(inputs.params, session, inputs.rng)
    await transport.send_frame(codec.encode_id_challenge(v))
    z = codec.decode_id_response(await transport.expect(MsgType.ID_RESPONSE))
    accepted = ibid_verifier_decide(inputs.backend, inputs.params, inputs.identity, session, z)
    await transport.send_frame(session_end_frame(SessionStatus.ACCEPTED if accepted else SessionStatus.ABORT))
    return accepted


async def run_ibid_session(transport: FrameTransport, role: SessionRole,
                           inputs: IbidSessionInputs) -> bool:
    """Commit -> challenge -> response, then the verifier's decision as SESSION_END.

    Returns:
        Whether the verifier accepted
    """
    codec = WireCodec(inputs.params.action, len(inputs.params.E))
    try:
        if role == SessionRole.PROVER:
            return await _ibid_prover(transport, inputs, codec)
        if role == SessionRole.VERIFIER:
            return await _ibid_verifier(transport, inputs, codec)
        raise ParameterError(f"role {role.value} does not take part in identification")
    except IbbsError as e:
        logger.error(f"Identification session [{role.value}] failed: {e}")
        await _report_error(transport, e)
        raise
