"""Identity-based identification: KGC setup, key extraction and the 3-move protocol.

Two challenge alphabets are supported. ``paper`` draws v from {-1, 0, 1}^n and
recomputes the v = -1 branch against the twisted key curve, which honest
provers pass only where s * c_i = 0 mod N. ``binary`` draws v from {0, 1}^n and
is complete.
"""

import random
from typing import Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict

from ..action.base_backend import ActionBackend
from ..hashing.hash_sets import (
    exceptional_set_for,
    identity_hash,
    sample_binary_vec,
    sample_ternary_vec,
)
from ..utils.config import config
from ..utils.errors import ExtractionError, LengthMismatchError, SessionStateError
from ..utils.models import (
    ActionParams,
    CurveVec,
    ExceptionalSet,
    ExponentVec,
    IbidMode,
    SessionPhase,
    SessionRole,
    SignVec,
    TernaryVec,
)


class IbidParams(BaseModel):
    """Public KGC parameters: master curves E_i = [g^(s c_i)] * E0."""
    model_config = ConfigDict(frozen=True)

    action: ActionParams
    exceptional_set: ExceptionalSet
    E: CurveVec
    mode: IbidMode = IbidMode.BINARY


class IbidUserKey(BaseModel):
    """Per-identity key: X_i = act(x_i, curve_power(E_i, u_i)) and u = H(id || X)."""
    model_config = ConfigDict(frozen=True)

    u: SignVec
    x: ExponentVec
    X: CurveVec


class IbidCommitMessage(BaseModel):
    model_config = ConfigDict(frozen=True)

    X: CurveVec
    K: CurveVec


class IbidTranscript(BaseModel):
    model_config = ConfigDict(frozen=True)

    message: IbidCommitMessage
    v: TernaryVec
    z: ExponentVec


class IbidSession(BaseModel):
    """Single-owner state machine: commit -> challenge -> response -> decision."""
    role: SessionRole
    X: CurveVec = ()
    K: CurveVec = ()
    k: ExponentVec = ()
    v: TernaryVec = ()
    z: ExponentVec = ()
    accepted: Optional[bool] = None
    phase: SessionPhase = SessionPhase.OPEN


def _mode(mode: Optional[str]) -> IbidMode:
    return IbidMode(mode or config.get("protocol.ibid_mode", "binary"))


def ibid_params_from_secret(backend: ActionBackend, s: int, exceptional_set: ExceptionalSet,
                            mode: Optional[str] = None) -> IbidParams:
    """Public parameters for a given master secret."""
    N = backend.N
    exponents = tuple(s * c % N for c in exceptional_set.values)
    E = backend.act_vec(exponents, backend.base_vec(len(exponents)))
    return IbidParams(action=backend.params, exceptional_set=exceptional_set, E=E, mode=_mode(mode))


def ibid_setup(backend: ActionBackend, rng: random.Random, mode: Optional[str] = None,
               require_nonzero: Optional[bool] = None,
               strict: Optional[bool] = None) -> Tuple[IbidParams, int]:
    """KGC setup: uniform s, super-exceptional c, E = [g^(s c)] * E0.

    Args:
        backend: Group action backend (its ``n`` is the vector length)
        rng: Randomness
        mode: "binary" or "paper"; defaults to ``protocol.ibid_mode``
        require_nonzero: Resample s = 0; defaults to ``protocol.require_nonzero_master``
        strict: Refuse unverified exceptional sets; defaults to ``protocol.strict_exceptional``

    Returns:
        (IbidParams, master secret s)

    Raises:
        ExceptionalSetError: If no super-exceptional set exists and ``strict`` is set
    """
    if require_nonzero is None:
        require_nonzero = config.get("protocol.require_nonzero_master", True)
    if strict is None:
        strict = config.get("protocol.strict_exceptional", True)

    c_set = exceptional_set_for(backend.n, backend.N, super_exceptional=True, strict=strict)
    s = backend.sample_exponent(rng)
    while require_nonzero and s == 0:
        s = backend.sample_exponent(rng)
    params = ibid_params_from_secret(backend, s, c_set, mode)
    logger.debug(f"IBID setup: n={backend.n}, N={backend.N}, mode={params.mode.value}")
    return params, s


def ibid_user_key_from(backend: ActionBackend, params: IbidParams, s: int,
                       r: Sequence[int], u: Sequence[int]) -> IbidUserKey:
    """x = r - s * c * u with R = [g^r] * E0 as the published key X."""
    N = backend.N
    c = params.exceptional_set.values
    if not len(r) == len(u) == len(c):
        raise LengthMismatchError(f"lengths r={len(r)}, u={len(u)}, c={len(c)}")
    R = backend.act_vec(r, backend.base_vec(len(r)))
    x = tuple((ri - s * ci * ui) % N for ri, ci, ui in zip(r, c, u))
    return IbidUserKey(u=tuple(u), x=x, X=R)


def ibid_extract(backend: ActionBackend, params: IbidParams, s: int, identity: bytes,
                 rng: random.Random) -> IbidUserKey:
    """Identity key: fresh r, R = [g^r] * E0, u = H(id || R), x = r - s c u."""
    r = backend.sample_exponent_vec(rng, len(params.E))
    R = backend.act_vec(r, backend.base_vec(len(r)))
    u = identity_hash(params.action, identity, R)
    return ibid_user_key_from(backend, params, s, r, u)


def ibid_prove_commit_with(backend: ActionBackend, params: IbidParams, usk: IbidUserKey,
                           k: Sequence[int]) -> Tuple[IbidCommitMessage, IbidSession]:
    K = backend.act_vec(k, backend.curve_power_vec(params.E, usk.u))
    session = IbidSession(role=SessionRole.PROVER, X=usk.X, K=K, k=tuple(k),
                          phase=SessionPhase.COMMITTED)
    return IbidCommitMessage(X=usk.X, K=K), session


def ibid_prove_commit(backend: ActionBackend, params: IbidParams, usk: IbidUserKey,
                      rng: random.Random) -> Tuple[IbidCommitMessage, IbidSession]:
    """K_i = act(k_i, curve_power(E_i, u_i)) for fresh k."""
    k = backend.sample_exponent_vec(rng, len(usk.x))
    return ibid_prove_commit_with(backend, params, usk, k)


def ibid_challenge(params: IbidParams, rng: random.Random) -> TernaryVec:
    """Uniform over {-1, 0, 1}^n (paper) or {0, 1}^n (binary)."""
    n = len(params.E)
    if params.mode == IbidMode.PAPER:
        return sample_ternary_vec(rng, n)
    return sample_binary_vec(rng, n)


def ibid_respond(backend: ActionBackend, session: IbidSession, usk: IbidUserKey,
                 v: Sequence[int]) -> ExponentVec:
    """z = k - v * x.

    Raises:
        SessionStateError: If the session is not a fresh prover session
    """
    if session.role != SessionRole.PROVER or session.phase != SessionPhase.COMMITTED:
        raise SessionStateError(f"prover session in phase {session.phase.value} cannot respond")
    if len(v) != len(session.k):
        raise LengthMismatchError(f"challenge length {len(v)} != {len(session.k)}")
    N = backend.N
    z = tuple((ki - vi * xi) % N for ki, vi, xi in zip(session.k, v, usk.x))
    session.v = tuple(v)
    session.z = z
    session.phase = SessionPhase.RESPONDED
    return z


def ibid_verify(backend: ActionBackend, params: IbidParams, identity: bytes,
                message: IbidCommitMessage, v: Sequence[int], z: Sequence[int]) -> bool:
    """Recompute u = H(id || X) and K' per branch; accept iff K' = K.

    Branch: v_i = 0 uses base curve_power(E_i, u_i); otherwise curve_power(X_i, v_i).
    """
    n = len(params.E)
    for vector in (message.X, message.K, v, z):
        if len(vector) != n:
            raise LengthMismatchError(f"identification vector of length {len(vector)}, expected {n}")
    allowed = (-1, 0, 1) if params.mode == IbidMode.PAPER else (0, 1)
    if any(vi not in allowed for vi in v):
        return False
    u = identity_hash(params.action, identity, message.X)
    K_prime = tuple(
        backend.act(zi, backend.curve_power(Ei, ui) if vi == 0 else backend.curve_power(Xi, vi))
        for zi, vi, Ei, ui, Xi in zip(z, v, params.E, u, message.X)
    )
    return K_prime == tuple(message.K)


def ibid_index_accepts(mode: IbidMode, v_i: int, s_c_i: int, N: int) -> bool:
    """Honest per-index acceptance: the v = -1 branch needs 2 s c_i = 0 mod N."""
    if v_i in (0, 1):
        return True
    return mode == IbidMode.PAPER and (2 * s_c_i) % N == 0


def ibid_verifier_session() -> IbidSession:
    return IbidSession(role=SessionRole.VERIFIER)


def ibid_verifier_commit(session: IbidSession, message: IbidCommitMessage) -> None:
    if session.role != SessionRole.VERIFIER or session.phase != SessionPhase.OPEN:
        raise SessionStateError(f"verifier in phase {session.phase.value} cannot take a commitment")
    session.X = tuple(message.X)
    session.K = tuple(message.K)
    session.phase = SessionPhase.COMMITTED


def ibid_verifier_challenge(params: IbidParams, session: IbidSession,
                            rng: random.Random) -> TernaryVec:
    if session.phase != SessionPhase.COMMITTED:
        raise SessionStateError(f"verifier in phase {session.phase.value} cannot issue a challenge")
    session.v = ibid_challenge(params, rng)
    session.phase = SessionPhase.CHALLENGED
    return session.v


def ibid_verifier_decide(backend: ActionBackend, params: IbidParams, identity: bytes,
                         session: IbidSession, z: Sequence[int]) -> bool:
    if session.phase != SessionPhase.CHALLENGED:
        raise SessionStateError(f"verifier in phase {session.phase.value} cannot decide")
    session.z = tuple(z)
    session.accepted = ibid_verify(backend, params, identity,
                                   IbidCommitMessage(X=session.X, K=session.K), session.v, z)
    session.phase = SessionPhase.DECIDED
    return session.accepted


def ibid_extract_witness(backend: ActionBackend, params: IbidParams, identity: bytes,
                         first: IbidTranscript, second: IbidTranscript) -> Tuple[int, int]:
    """x_i = (z'_i - z_i) / (v_i - v'_i) from two accepting transcripts with one commitment.

    Raises:
        ExtractionError: On differing commitments, equal challenges or a rejecting transcript
    """
    if first.message != second.message:
        raise ExtractionError("transcripts do not share a commitment")
    for t in (first, second):
        if not ibid_verify(backend, params, identity, t.message, t.v, t.z):
            raise ExtractionError("both transcripts must verify")
    N = backend.N
    for i, (vi, vj) in enumerate(zip(first.v, second.v)):
        if vi != vj:
            return i, (second.z[i] - first.z[i]) * pow(vi - vj, -1, N) % N
    raise ExtractionError("transcripts have identical challenges")

