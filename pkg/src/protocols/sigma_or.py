"""OR sigma protocol: knowledge of one of two action preimages."""

import random
from typing import List, NamedTuple, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict

from ..action.base_backend import ActionBackend
from ..hashing.hash_sets import hadamard, sample_sign_vec
from ..utils.errors import ExtractionError, LengthMismatchError, ParameterError, SessionStateError
from ..utils.models import CurveVec, ExponentVec, SessionPhase, SignVec, TernaryVec

SUPPORT_HONEST = "honest"
SUPPORT_UNIFORM = "uniform"

_ZERO_PAIRS = ((0, 1), (0, -1), (1, 0), (-1, 0), (0, 0))


class OrKeypair(BaseModel):
    """Statement (X0, X1) with the witness for side ``delta``."""
    model_config = ConfigDict(frozen=True)

    delta: int
    x_delta: ExponentVec
    X0: CurveVec
    X1: CurveVec

    def statement(self) -> Tuple[CurveVec, CurveVec]:
        return self.X0, self.X1

    def side(self, b: int) -> CurveVec:
        return self.X0 if b == 0 else self.X1


class OrCommitment(BaseModel):
    model_config = ConfigDict(frozen=True)

    Y0: CurveVec
    Y1: CurveVec


class OrProverState(BaseModel):
    """One-shot prover state; ``respond`` consumes it."""
    delta: int
    y_delta: ExponentVec
    c_other: SignVec
    r_other: ExponentVec
    Y0: CurveVec
    Y1: CurveVec
    phase: SessionPhase = SessionPhase.COMMITTED


class OrResponse(BaseModel):
    model_config = ConfigDict(frozen=True)

    r0: ExponentVec
    r1: ExponentVec
    c0: TernaryVec
    c1: TernaryVec


class OrTranscript(BaseModel):
    model_config = ConfigDict(frozen=True)

    commitment: OrCommitment
    challenge: TernaryVec
    response: OrResponse


class ExtractedWitness(NamedTuple):
    side: int
    index: int
    exponent: int


def recompute_commitment(backend: ActionBackend, X: Sequence[int], r: Sequence[int],
                         c: Sequence[int]) -> CurveVec:
    """Branch rule: base E0 where c_i = 0, else curve_power(X_i, c_i); shifted by r_i."""
    if not len(X) == len(r) == len(c):
        raise LengthMismatchError(f"lengths X={len(X)}, r={len(r)}, c={len(c)}")
    return tuple(
        backend.act(ri, backend.base_curve if ci == 0 else backend.curve_power(Xi, ci))
        for Xi, ri, ci in zip(X, r, c)
    )


def or_keypair_from_witness(backend: ActionBackend, delta: int, x_delta: Sequence[int],
                            X_other: Sequence[int]) -> OrKeypair:
    """Keypair with X_delta derived from the witness and a given opposite statement."""
    if delta not in (0, 1):
        raise ParameterError(f"delta must be 0 or 1, got {delta}")
    X_delta = backend.act_vec(x_delta, backend.base_vec(len(x_delta)))
    X0, X1 = (X_delta, tuple(X_other)) if delta == 0 else (tuple(X_other), X_delta)
    return OrKeypair(delta=delta, x_delta=tuple(x % backend.N for x in x_delta), X0=X0, X1=X1)


def or_keygen(backend: ActionBackend, rng: random.Random) -> OrKeypair:
    """Uniform delta and witnesses; the witness of side 1 - delta is discarded."""
    n = backend.n
    delta = rng.getrandbits(1)
    x_delta = backend.sample_exponent_vec(rng, n)
    x_other = backend.sample_exponent_vec(rng, n)
    X_other = backend.act_vec(x_other, backend.base_vec(n))
    return or_keypair_from_witness(backend, delta, x_delta, X_other)


def or_commit_with(backend: ActionBackend, key: OrKeypair, y_delta: Sequence[int],
                   c_other: Sequence[int], r_other: Sequence[int]) -> Tuple[OrCommitment, OrProverState]:
    """Commitment from explicit randomness."""
    n = len(key.x_delta)
    Y_delta = backend.act_vec(y_delta, backend.base_vec(n))
    Y_other = backend.act_vec(r_other, backend.curve_power_vec(key.side(1 - key.delta), c_other))
    Y0, Y1 = (Y_delta, Y_other) if key.delta == 0 else (Y_other, Y_delta)
    state = OrProverState(
        delta=key.delta,
        y_delta=tuple(y_delta),
        c_other=tuple(c_other),
        r_other=tuple(r_other),
        Y0=Y0,
        Y1=Y1,
    )
    return OrCommitment(Y0=Y0, Y1=Y1), state


def or_commit(backend: ActionBackend, key: OrKeypair,
              rng: random.Random) -> Tuple[OrCommitment, OrProverState]:
    """Prover's first move: real commitment on side delta, simulated on the other."""
    n = len(key.x_delta)
    y_delta = backend.sample_exponent_vec(rng, n)
    c_other = sample_sign_vec(rng, n)
    r_other = backend.sample_exponent_vec(rng, n)
    return or_commit_with(backend, key, y_delta, c_other, r_other)


def or_respond(backend: ActionBackend, state: OrProverState, key: OrKeypair,
               c: Sequence[int]) -> OrResponse:
    """c_delta = c * c_other, r_delta = y_delta - x_delta * c_delta.

    Raises:
        SessionStateError: If the state already answered a challenge
        LengthMismatchError: If the challenge has the wrong length
    """
    if state.phase != SessionPhase.COMMITTED:
        raise SessionStateError("prover state already responded; a second response leaks the witness")
    if len(c) != len(state.y_delta):
        raise LengthMismatchError(f"challenge length {len(c)} != {len(state.y_delta)}")
    state.phase = SessionPhase.RESPONDED

    N = backend.N
    c_delta = hadamard(c, state.c_other)
    r_delta = tuple((y - x * cd) % N for y, x, cd in zip(state.y_delta, key.x_delta, c_delta))
    if state.delta == 0:
        return OrResponse(r0=r_delta, r1=state.r_other, c0=c_delta, c1=state.c_other)
    return OrResponse(r0=state.r_other, r1=r_delta, c0=state.c_other, c1=c_delta)


def or_verify(backend: ActionBackend, X: Tuple[Sequence[int], Sequence[int]],
              transcript: OrTranscript) -> bool:
    """Accept iff c = c0 * c1 and every commitment entry recomputes.

    Raises:
        LengthMismatchError: On malformed lengths
    """
    rsp = transcript.response
    com = transcript.commitment
    n = len(transcript.challenge)
    for vector in (X[0], X[1], com.Y0, com.Y1, rsp.r0, rsp.r1, rsp.c0, rsp.c1):
        if len(vector) != n:
            raise LengthMismatchError(f"transcript vector of length {len(vector)}, expected {n}")
    if any(v not in (-1, 0, 1) for v in rsp.c0 + rsp.c1):
        return False
    if hadamard(rsp.c0, rsp.c1) != tuple(transcript.challenge):
        return False
    return (recompute_commitment(backend, X[0], rsp.r0, rsp.c0) == tuple(com.Y0)
            and recompute_commitment(backend, X[1], rsp.r1, rsp.c1) == tuple(com.Y1))


def _split_challenge(c: Sequence[int], rng: random.Random, support: str) -> Tuple[List[int], List[int]]:
    c0: List[int] = []
    c1: List[int] = []
    if support == SUPPORT_HONEST:
        # an honest prover puts every zero on its own side delta
        zero_side = rng.getrandbits(1)
        for ci in c:
            s = -1 if rng.getrandbits(1) else 1
            if ci == 0:
                pair = (0, s) if zero_side == 0 else (s, 0)
            else:
                pair = (s, ci * s)
            c0.append(pair[0])
            c1.append(pair[1])
    elif support == SUPPORT_UNIFORM:
        for ci in c:
            if ci == 0:
                pair = _ZERO_PAIRS[rng.randrange(len(_ZERO_PAIRS))]
            else:
                s = -1 if rng.getrandbits(1) else 1
                pair = (s, ci * s)
            c0.append(pair[0])
            c1.append(pair[1])
    else:
        raise ParameterError(f"unknown simulator support '{support}'")
    return c0, c1


def or_simulate(backend: ActionBackend, X: Tuple[Sequence[int], Sequence[int]],
                c: Sequence[int], rng: random.Random,
                support: str = SUPPORT_HONEST) -> OrTranscript:
    """Transcript for challenge c without a witness.

    Args:
        backend: Group action backend
        X: Statement (X0, X1)
        c: Challenge in {-1, 0, 1}^n
        rng: Randomness
        support: "honest" samples (c0, c1) as an honest prover with uniform delta;
            "uniform" samples uniformly over all pairs with c0 * c1 = c, including (0, 0)

    Returns:
        Accepting transcript
    """
    n = len(c)
    c0, c1 = _split_challenge(c, rng, support)
    r0 = backend.sample_exponent_vec(rng, n)
    r1 = backend.sample_exponent_vec(rng, n)
    commitment = OrCommitment(
        Y0=recompute_commitment(backend, X[0], r0, c0),
        Y1=recompute_commitment(backend, X[1], r1, c1),
    )
    return OrTranscript(
        commitment=commitment,
        challenge=tuple(c),
        response=OrResponse(r0=r0, r1=r1, c0=tuple(c0), c1=tuple(c1)),
    )


def or_extract(backend: ActionBackend, X: Tuple[Sequence[int], Sequence[int]],
               t1: OrTranscript, t2: OrTranscript) -> ExtractedWitness:
    """Witness from two accepting transcripts sharing a commitment.

    From r = y - x c: x = (r' - r) / (c - c') at an index and side where the
    split challenges differ; c - c' is in {+-1, +-2}, a unit for odd N.

    Raises:
        ExtractionError: On identical challenges, differing commitments, or
            a transcript that does not verify
    """
    if t1.commitment != t2.commitment:
        raise ExtractionError("transcripts do not share a commitment")
    if tuple(t1.challenge) == tuple(t2.challenge):
        raise ExtractionError("transcripts have identical challenges")
    if not (or_verify(backend, X, t1) and or_verify(backend, X, t2)):
        raise ExtractionError("both transcripts must verify")

    N = backend.N
    sides = ((t1.response.c0, t1.response.r0, t2.response.c0, t2.response.r0),
             (t1.response.c1, t1.response.r1, t2.response.c1, t2.response.r1))
    for i in range(len(t1.challenge)):
        for b, (c, r, c_prime, r_prime) in enumerate(sides):
            if c[i] != c_prime[i]:
                x = (r_prime[i] - r[i]) * pow(c[i] - c_prime[i], -1, N) % N
                logger.debug(f"Extracted witness for side {b} at index {i}")
                return ExtractedWitness(side=b, index=i, exponent=x)
    raise ExtractionError("no differing split challenge")
