"""Identity-based blind signatures built on the OR sigma protocol.

Message flow: S1 (Y0, Y1) -> U1 (c*) -> S2 (c*_0, c*_1, r*_0, r*_1) -> U2 signature.

Modes:
    paper: witness x_delta, commitment base (E_delta)^(u_delta), ternary challenges.
        Honest sessions succeed with probability (1/2)^n; see ``paper_index_predicate``.
    otter: witness r_delta, commitment base E0, sign-only challenges. Perfectly
        complete; identity binding rests on the KGC issuing pk.
"""

import random
from typing import List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..action.base_backend import ActionBackend
from ..hashing.hash_sets import (
    exceptional_set_for,
    hadamard,
    hash_pm1,
    hash_ternary,
    identity_hash,
    sample_sign_vec,
)
from ..utils.config import config
from ..utils.errors import (
    InvalidSignError,
    LengthMismatchError,
    ParameterError,
    RetryLimitExceededError,
    SessionStateError,
    ZeroChallengeError,
)
from ..utils.models import (
    ActionParams,
    CurveVec,
    ExceptionalSet,
    ExponentVec,
    IbbsMode,
    SessionPhase,
    SignVec,
    TernaryVec,
)
from ..wire.encoding import encode_curves

MismatchIndex = Tuple[int, int]


class IbbsParams(BaseModel):
    """Public parameters: master curves E_b,i = [g^(s_b c_i)] * E0."""
    model_config = ConfigDict(frozen=True)

    action: ActionParams
    exceptional_set: ExceptionalSet
    E0: CurveVec
    E1: CurveVec
    mode: IbbsMode = IbbsMode.OTTER
    retry_limit: int = Field(default=1, ge=1)

    @property
    def n(self) -> int:
        return len(self.E0)

    @property
    def exceptional_verified(self) -> bool:
        return self.exceptional_set.verified

    def master_curves(self, b: int) -> CurveVec:
        return self.E0 if b == 0 else self.E1


class IbbsMasterSecret(BaseModel):
    model_config = ConfigDict(frozen=True)

    s0: int
    s1: int

    def share(self, b: int) -> int:
        return self.s0 if b == 0 else self.s1


class IbbsPublicKey(BaseModel):
    """Per-identity public key (X0, X1)."""
    model_config = ConfigDict(frozen=True)

    X0: CurveVec
    X1: CurveVec

    def side(self, b: int) -> CurveVec:
        return self.X0 if b == 0 else self.X1


class IbbsUserKeys(BaseModel):
    """Signer key material for one identity.

    Exactly one witness form is present: ``x_delta`` in paper mode,
    ``r_delta`` in otter mode. Together they reveal s_delta.
    """
    model_config = ConfigDict(frozen=True)

    delta: int = Field(ge=0, le=1)
    x_delta: Optional[ExponentVec] = None
    r_delta: Optional[ExponentVec] = None
    u0: SignVec
    u1: SignVec
    X0: CurveVec
    X1: CurveVec

    @model_validator(mode="after")
    def _one_witness(self) -> "IbbsUserKeys":
        if (self.x_delta is None) == (self.r_delta is None):
            raise ValueError("user keys must carry exactly one of x_delta and r_delta")
        return self

    @property
    def pk(self) -> IbbsPublicKey:
        return IbbsPublicKey(X0=self.X0, X1=self.X1)

    def u(self, b: int) -> SignVec:
        return self.u0 if b == 0 else self.u1

    def witness(self, mode: IbbsMode) -> ExponentVec:
        """Witness for the mode's response equation."""
        value = self.x_delta if mode == IbbsMode.PAPER else self.r_delta
        if value is None:
            raise ParameterError(f"user keys do not hold the {mode.value}-mode witness")
        return value


class RhoS1(BaseModel):
    model_config = ConfigDict(frozen=True)

    Y0: CurveVec
    Y1: CurveVec

    def side(self, b: int) -> CurveVec:
        return self.Y0 if b == 0 else self.Y1


class RhoU(BaseModel):
    model_config = ConfigDict(frozen=True)

    c_star: TernaryVec


class RhoS2(BaseModel):
    model_config = ConfigDict(frozen=True)

    c_star_0: TernaryVec
    c_star_1: TernaryVec
    r_star_0: ExponentVec
    r_star_1: ExponentVec

    def c_star(self, b: int) -> TernaryVec:
        return self.c_star_0 if b == 0 else self.c_star_1

    def r_star(self, b: int) -> ExponentVec:
        return self.r_star_0 if b == 0 else self.r_star_1


class BlindSignature(BaseModel):
    model_config = ConfigDict(frozen=True)

    tilde_c_0: TernaryVec
    tilde_c_1: TernaryVec
    tilde_r_0: ExponentVec
    tilde_r_1: ExponentVec

    def tilde_c(self, b: int) -> TernaryVec:
        return self.tilde_c_0 if b == 0 else self.tilde_c_1

    def tilde_r(self, b: int) -> ExponentVec:
        return self.tilde_r_0 if b == 0 else self.tilde_r_1


class SignerSession(BaseModel):
    """One-shot signer state; S2 consumes it."""
    delta: int
    y_delta: ExponentVec
    tilde_c_other: SignVec
    c_star_other: SignVec
    r_star_other: ExponentVec
    u0: SignVec
    u1: SignVec
    Y0: CurveVec
    Y1: CurveVec
    phase: SessionPhase = SessionPhase.COMMITTED


class UserSession(BaseModel):
    """One-shot user state; U2 consumes it."""
    v0: SignVec
    v1: SignVec
    w0: ExponentVec
    w1: ExponentVec
    Z0: CurveVec
    Z1: CurveVec
    c: TernaryVec
    c_star: TernaryVec
    message: bytes
    phase: SessionPhase = SessionPhase.COMMITTED


class BlindingState(BaseModel):
    model_config = ConfigDict(frozen=True)

    v0: SignVec
    v1: SignVec
    w0: ExponentVec
    w1: ExponentVec


class U2Outcome(BaseModel):
    """Signature, or None with the (side, index) pairs whose recomputed curve differs."""
    model_config = ConfigDict(frozen=True)

    signature: Optional[BlindSignature] = None
    mismatched_indices: Tuple[MismatchIndex, ...] = ()

    @property
    def accepted(self) -> bool:
        return self.signature is not None


def _mode(mode: Optional[str]) -> IbbsMode:
    return IbbsMode(mode or config.get("protocol.ibbs_mode", "otter"))


def default_retry_limit(mode: IbbsMode, n: int) -> int:
    """factor * 2^n in paper mode, 1 in otter mode."""
    if mode == IbbsMode.PAPER:
        return int(config.get("protocol.paper_retry_factor", 4)) * 2 ** n
    return 1


def challenge_hash(params: IbbsParams, Z0: Sequence[int], Z1: Sequence[int], m: bytes) -> TernaryVec:
    """H(Z0 || Z1 || m): ternary in paper mode, +-1 in otter mode."""
    data = encode_curves(params.action, Z0) + encode_curves(params.action, Z1) + m
    if params.mode == IbbsMode.PAPER:
        return hash_ternary(data, params.n)
    return hash_pm1(data, params.n)


def _alphabet(mode: IbbsMode) -> Tuple[int, ...]:
    return (-1, 0, 1) if mode == IbbsMode.PAPER else (-1, 1)


def ibbs_params_from_secret(backend: ActionBackend, msk: IbbsMasterSecret,
                            exceptional_set: ExceptionalSet, mode: Optional[str] = None,
                            retry_limit: Optional[int] = None) -> IbbsParams:
    """Public parameters for a given master secret."""
    mode = _mode(mode)
    N = backend.N
    c = exceptional_set.values
    base = backend.base_vec(len(c))
    E0 = backend.act_vec(tuple(msk.s0 * ci % N for ci in c), base)
    E1 = backend.act_vec(tuple(msk.s1 * ci % N for ci in c), base)
    return IbbsParams(
        action=backend.params,
        exceptional_set=exceptional_set,
        E0=E0,
        E1=E1,
        mode=mode,
        retry_limit=retry_limit or default_retry_limit(mode, len(c)),
    )


def ibbs_setup(backend: ActionBackend, rng: random.Random, mode: Optional[str] = None,
               require_nonzero: Optional[bool] = None,
               strict: Optional[bool] = None) -> Tuple[IbbsParams, IbbsMasterSecret]:
    """KGC setup: uniform (s0, s1), super-exceptional c, E_b = [g^(s_b c)] * E0.

    Args:
        backend: Group action backend; its ``n`` is the vector length
        rng: Randomness
        mode: "paper" or "otter"; defaults to ``protocol.ibbs_mode``
        require_nonzero: Resample zero master shares
        strict: Refuse unverified exceptional sets

    Returns:
        (IbbsParams, IbbsMasterSecret)
    """
    if require_nonzero is None:
        require_nonzero = config.get("protocol.require_nonzero_master", True)
    if strict is None:
        strict = config.get("protocol.strict_exceptional", True)

    c_set = exceptional_set_for(backend.n, backend.N, super_exceptional=True, strict=strict)
    shares = []
    for _ in range(2):
        s = backend.sample_exponent(rng)
        while require_nonzero and s == 0:
            s = backend.sample_exponent(rng)
        shares.append(s)
    msk = IbbsMasterSecret(s0=shares[0], s1=shares[1])
    params = ibbs_params_from_secret(backend, msk, c_set, mode)
    logger.info(
        f"IBBS setup: backend={backend.kind.value}, n={params.n}, N={backend.N}, "
        f"mode={params.mode.value}, retry_limit={params.retry_limit}, "
        f"exceptional_verified={params.exceptional_verified}"
    )
    return params, msk


def ibbs_user_keys_from(backend: ActionBackend, params: IbbsParams, msk: IbbsMasterSecret,
                        identity: bytes, r0: Sequence[int], r1: Sequence[int],
                        delta: int) -> IbbsUserKeys:
    """Key derivation from explicit randomness; only the mode's witness is kept."""
    N = backend.N
    c = params.exceptional_set.values
    X, u, x = [], [], []
    for b, r in enumerate((r0, r1)):
        if len(r) != len(c):
            raise LengthMismatchError(f"r_{b} has length {len(r)}, expected {len(c)}")
        X_b = backend.act_vec(r, backend.base_vec(len(r)))
        u_b = identity_hash(params.action, identity, X_b)
        s_b = msk.share(b)
        X.append(X_b)
        u.append(u_b)
        x.append(tuple((ri - s_b * ui * ci) % N for ri, ui, ci in zip(r, u_b, c)))

    r_delta = tuple(ri % N for ri in (r0, r1)[delta])
    witness = {"x_delta": x[delta]} if params.mode == IbbsMode.PAPER else {"r_delta": r_delta}
    return IbbsUserKeys(delta=delta, u0=u[0], u1=u[1], X0=X[0], X1=X[1], **witness)


def ibbs_extract(backend: ActionBackend, params: IbbsParams, msk: IbbsMasterSecret,
                 identity: bytes, rng: random.Random) -> IbbsUserKeys:
    """Per-identity keys: X_b = [g^r_b] * E0, u_b = H(id || X_b), uniform delta."""
    r0 = backend.sample_exponent_vec(rng, params.n)
    r1 = backend.sample_exponent_vec(rng, params.n)
    delta = rng.getrandbits(1)
    return ibbs_user_keys_from(backend, params, msk, identity, r0, r1, delta)


def ibbs_s1_with(backend: ActionBackend, params: IbbsParams, keys: IbbsUserKeys,
                 y_delta: Sequence[int], tilde_c_other: Sequence[int],
                 r_star_other: Sequence[int]) -> Tuple[RhoS1, SignerSession]:
    """S1 from explicit randomness."""
    keys.witness(params.mode)
    delta = keys.delta
    other = 1 - delta
    if params.mode == IbbsMode.PAPER:
        base = backend.curve_power_vec(params.master_curves(delta), keys.u(delta))
    else:
        base = backend.base_vec(params.n)
    Y_delta = backend.act_vec(y_delta, base)

    c_star_other = hadamard(tilde_c_other, keys.u(other))
    Y_other = backend.act_vec(r_star_other, backend.curve_power_vec(keys.pk.side(other), c_star_other))
    Y0, Y1 = (Y_delta, Y_other) if delta == 0 else (Y_other, Y_delta)
    session = SignerSession(
        delta=delta,
        y_delta=tuple(y_delta),
        tilde_c_other=tuple(tilde_c_other),
        c_star_other=c_star_other,
        r_star_other=tuple(r_star_other),
        u0=keys.u0,
        u1=keys.u1,
        Y0=Y0,
        Y1=Y1,
    )
    return RhoS1(Y0=Y0, Y1=Y1), session


def ibbs_s1(backend: ActionBackend, params: IbbsParams, keys: IbbsUserKeys,
            rng: random.Random) -> Tuple[RhoS1, SignerSession]:
    """Signer's first message: real commitment on side delta, simulated on 1 - delta."""
    n = params.n
    y_delta = backend.sample_exponent_vec(rng, n)
    tilde_c_other = sample_sign_vec(rng, n)
    r_star_other = backend.sample_exponent_vec(rng, n)
    return ibbs_s1_with(backend, params, keys, y_delta, tilde_c_other, r_star_other)


def ibbs_u1_with(backend: ActionBackend, params: IbbsParams, rho_s1: RhoS1, m: bytes,
                 v0: Sequence[int], w0: Sequence[int], v1: Sequence[int],
                 w1: Sequence[int]) -> Tuple[RhoU, UserSession]:
    """U1 from explicit blinding (v_b, w_b)."""
    n = params.n
    for vector in (rho_s1.Y0, rho_s1.Y1, v0, w0, v1, w1):
        if len(vector) != n:
            raise LengthMismatchError(f"U1 vector of length {len(vector)}, expected {n}")
    Z0 = backend.act_vec(w0, backend.curve_power_vec(rho_s1.Y0, v0))
    Z1 = backend.act_vec(w1, backend.curve_power_vec(rho_s1.Y1, v1))
    c = challenge_hash(params, Z0, Z1, m)
    c_star = hadamard(c, v0, v1)
    session = UserSession(
        v0=tuple(v0), v1=tuple(v1),
        w0=tuple(w0), w1=tuple(w1),
        Z0=Z0, Z1=Z1,
        c=c, c_star=c_star,
        message=m,
    )
    return RhoU(c_star=c_star), session


def ibbs_u1(backend: ActionBackend, params: IbbsParams, rho_s1: RhoS1, m: bytes,
            rng: random.Random) -> Tuple[RhoU, UserSession]:
    """Blind the commitment: Z_b = [g^w_b] * (Y_b)^(v_b), c = H(Z0 || Z1 || m), c* = c v0 v1."""
    n = params.n
    v0 = sample_sign_vec(rng, n)
    w0 = backend.sample_exponent_vec(rng, n)
    v1 = sample_sign_vec(rng, n)
    w1 = backend.sample_exponent_vec(rng, n)
    return ibbs_u1_with(backend, params, rho_s1, m, v0, w0, v1, w1)


def ibbs_s2(backend: ActionBackend, params: IbbsParams, session: SignerSession,
            keys: IbbsUserKeys, rho_u: RhoU) -> RhoS2:
    """c*_delta = c* c*_(1-delta), r*_delta = y_delta - witness c*_delta.

    Raises:
        SessionStateError: If the session already answered
        LengthMismatchError: If c* has the wrong length
        InvalidSignError: If c* has an entry outside the mode's alphabet
    """
    if session.phase != SessionPhase.COMMITTED:
        raise SessionStateError("signer session already answered; replayed challenges are refused")
    c_star = tuple(rho_u.c_star)
    if len(c_star) != len(session.y_delta):
        raise LengthMismatchError(f"c* has length {len(c_star)}, expected {len(session.y_delta)}")
    if any(ci not in _alphabet(params.mode) for ci in c_star):
        raise InvalidSignError(f"c* entries outside {_alphabet(params.mode)} for {params.mode.value} mode")
    session.phase = SessionPhase.CONSUMED

    N = backend.N
    witness = keys.witness(params.mode)
    c_star_delta = hadamard(c_star, session.c_star_other)
    r_star_delta = tuple((y - w * c) % N for y, w, c in zip(session.y_delta, witness, c_star_delta))
    if session.delta == 0:
        return RhoS2(c_star_0=c_star_delta, c_star_1=session.c_star_other,
                     r_star_0=r_star_delta, r_star_1=session.r_star_other)
    return RhoS2(c_star_0=session.c_star_other, c_star_1=c_star_delta,
                 r_star_0=session.r_star_other, r_star_1=r_star_delta)


def recompute_curves(backend: ActionBackend, params: IbbsParams, pk: IbbsPublicKey,
                     identity: bytes, sig: BlindSignature) -> Tuple[CurveVec, CurveVec]:
    """Verification branch rule shared by U2 and Verify.

    Z~_b,i = [g^r~] * (E_b,i)^(u~_b,i) where c~_b,i = 0, else [g^r~] * (X_b,i)^(c~_b,i).
    """
    out = []
    for b in (0, 1):
        X_b = pk.side(b)
        u_b = identity_hash(params.action, identity, X_b)
        E_b = params.master_curves(b)
        out.append(tuple(
            backend.act(r, backend.curve_power(E, u) if c == 0 else backend.curve_power(X, c))
            for r, c, E, u, X in zip(sig.tilde_r(b), sig.tilde_c(b), E_b, u_b, X_b)
        ))
    return out[0], out[1]


def _check_signature_shape(params: IbbsParams, pk: IbbsPublicKey, sig: BlindSignature) -> None:
    n = params.n
    for vector in (pk.X0, pk.X1, sig.tilde_c_0, sig.tilde_c_1, sig.tilde_r_0, sig.tilde_r_1):
        if len(vector) != n:
            raise LengthMismatchError(f"signature vector of length {len(vector)}, expected {n}")


def ibbs_u2(backend: ActionBackend, params: IbbsParams, pk: IbbsPublicKey, identity: bytes,
            session: UserSession, rho_s2: RhoS2) -> U2Outcome:
    """Unblind: c~_b = c*_b v_b, r~_b = w_b + r*_b v_b; keep sigma iff it verifies.

    Rejection is returned as ``U2Outcome(signature=None)``.

    Raises:
        SessionStateError: If the session was already finished
        LengthMismatchError: On a malformed second signer message
    """
    if session.phase != SessionPhase.COMMITTED:
        raise SessionStateError("user session already finished")
    n = params.n
    for vector in (rho_s2.c_star_0, rho_s2.c_star_1, rho_s2.r_star_0, rho_s2.r_star_1):
        if len(vector) != n:
            raise LengthMismatchError(f"second signer message vector of length {len(vector)}, expected {n}")
    session.phase = SessionPhase.CONSUMED

    N = backend.N
    v = (session.v0, session.v1)
    w = (session.w0, session.w1)
    tilde_c = [hadamard(rho_s2.c_star(b), v[b]) for b in (0, 1)]
    tilde_r = [tuple((wi + ri * vi) % N for wi, ri, vi in zip(w[b], rho_s2.r_star(b), v[b]))
               for b in (0, 1)]
    sig = BlindSignature(tilde_c_0=tilde_c[0], tilde_c_1=tilde_c[1],
                         tilde_r_0=tilde_r[0], tilde_r_1=tilde_r[1])

    Z_tilde = recompute_curves(backend, params, pk, identity, sig)
    Z = (session.Z0, session.Z1)
    mismatched = tuple((b, i) for b in (0, 1) for i in range(n) if Z_tilde[b][i] != Z[b][i])
    accepted = (
        all(ci in _alphabet(params.mode) for ci in tilde_c[0] + tilde_c[1])
        and challenge_hash(params, Z_tilde[0], Z_tilde[1], session.message) == hadamard(*tilde_c)
    )
    if not accepted:
        logger.debug(f"U2 rejected: {len(mismatched)} mismatched index(es)")
        return U2Outcome(signature=None, mismatched_indices=mismatched)
    return U2Outcome(signature=sig, mismatched_indices=mismatched)


def ibbs_verify(backend: ActionBackend, params: IbbsParams, pk: IbbsPublicKey, identity: bytes,
                sig: BlindSignature, m: bytes) -> bool:
    """Accept iff H(Z~0 || Z~1 || m) = c~0 c~1.

    Raises:
        LengthMismatchError: On malformed vectors
    """
    _check_signature_shape(params, pk, sig)
    alphabet = _alphabet(params.mode)
    if any(ci not in alphabet for ci in sig.tilde_c_0 + sig.tilde_c_1):
        return False
    if any(not 0 <= r < backend.N for r in sig.tilde_r_0 + sig.tilde_r_1):
        return False
    Z0, Z1 = recompute_curves(backend, params, pk, identity, sig)
    return challenge_hash(params, Z0, Z1, m) == hadamard(sig.tilde_c_0, sig.tilde_c_1)


def ibbs_sign_once(backend: ActionBackend, params: IbbsParams, keys: IbbsUserKeys,
                   identity: bytes, m: bytes, rng: random.Random) -> U2Outcome:
    """One fresh S1 -> U1 -> S2 -> U2 session."""
    rho_s1, signer = ibbs_s1(backend, params, keys, rng)
    rho_u, user = ibbs_u1(backend, params, rho_s1, m, rng)
    rho_s2 = ibbs_s2(backend, params, signer, keys, rho_u)
    return ibbs_u2(backend, params, keys.pk, identity, user, rho_s2)


def ibbs_sign_with_retry(backend: ActionBackend, params: IbbsParams, keys: IbbsUserKeys,
                         identity: bytes, m: bytes, rng: random.Random,
                         limit: Optional[int] = None) -> Tuple[BlindSignature, int]:
    """Restart with fresh randomness until U2 yields a signature.

    Returns:
        (signature, number of attempts)

    Raises:
        RetryLimitExceededError: After ``limit`` rejected sessions
    """
    limit = limit if limit is not None else params.retry_limit
    if limit < 1:
        raise ParameterError(f"retry limit must be at least 1, got {limit}")
    failures: List[Tuple[MismatchIndex, ...]] = []
    for attempt in range(1, limit + 1):
        outcome = ibbs_sign_once(backend, params, keys, identity, m, rng)
        if outcome.signature is not None:
            logger.debug(f"Blind signature after {attempt} attempt(s)")
            return outcome.signature, attempt
        failures.append(outcome.mismatched_indices)
    logger.warning(f"Blind signing gave up after {limit} attempt(s)")
    raise RetryLimitExceededError(limit, failures)


def paper_index_predicate(c_star_delta: Sequence[int], v_delta: Sequence[int]) -> Tuple[bool, ...]:
    """Per-index honest acceptance in paper mode: c*_delta = 1, or c*_delta = 0 and v_delta = 1."""
    if len(c_star_delta) != len(v_delta):
        raise LengthMismatchError(f"lengths {len(c_star_delta)} and {len(v_delta)}")
    return tuple(c == 1 or (c == 0 and v == 1) for c, v in zip(c_star_delta, v_delta))


def reconstruct_blinding(backend: ActionBackend, rho_s1: RhoS1, rho_s2: RhoS2,
                         sig: BlindSignature) -> BlindingState:
    """The unique user state linking (rho_S1, rho_S2) to sigma: v_b = c~_b c*_b, w_b = r~_b - r*_b v_b.

    Raises:
        ZeroChallengeError: If some c*_b,i = 0, which leaves v_b,i undetermined
    """
    n = len(rho_s1.Y0)
    for vector in (rho_s1.Y1, rho_s2.c_star_0, rho_s2.c_star_1, rho_s2.r_star_0,
                   rho_s2.r_star_1, sig.tilde_c_0, sig.tilde_c_1, sig.tilde_r_0, sig.tilde_r_1):
        if len(vector) != n:
            raise LengthMismatchError(f"vector of length {len(vector)}, expected {n}")
    N = backend.N
    v, w = [], []
    for b in (0, 1):
        c_star = rho_s2.c_star(b)
        zeros = [i for i, ci in enumerate(c_star) if ci == 0]
        if zeros:
            raise ZeroChallengeError(f"c*_{b} is zero at indices {zeros}")
        v_b = hadamard(sig.tilde_c(b), c_star)
        v.append(v_b)
        w.append(tuple((r - rs * vi) % N for r, rs, vi in zip(sig.tilde_r(b), rho_s2.r_star(b), v_b)))
    return BlindingState(v0=v[0], v1=v[1], w0=w[0], w1=w[1])


def rederive_session(backend: ActionBackend, params: IbbsParams, rho_s1: RhoS1,
                     state: BlindingState, m: bytes) -> Tuple[CurveVec, CurveVec, TernaryVec, TernaryVec]:
    """Replay U1 from a blinding state: (Z0, Z1, c, c*)."""
    rho_u, session = ibbs_u1_with(backend, params, rho_s1, m, state.v0, state.w0, state.v1, state.w1)
    return session.Z0, session.Z1, session.c, rho_u.c_star


def leaked_master_share(N: int, x_delta: Sequence[int], r_delta: Sequence[int],
                        u_delta: Sequence[int], c: Sequence[int]) -> int:
    """s_delta = (r_i - x_i) u_i / c_i, recoverable when both witness forms are known."""
    for x, r, u, ci in zip(x_delta, r_delta, u_delta, c):
        try:
            return (r - x) * u * pow(ci, -1, N) % N
        except ValueError:
            continue
    raise ParameterError("no invertible exceptional value")
