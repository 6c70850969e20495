"""Hashes into {-1,1}^n and {-1,0,1}^n, samplers, and (super-)exceptional sets."""

import hashlib
import random
from math import gcd
from typing import Sequence, Tuple

from loguru import logger

from ..utils.errors import ExceptionalSetError, LengthMismatchError
from ..utils.models import ActionParams, ExceptionalSet, SignVec, TernaryVec
from ..wire.encoding import encode_curves

TAG_PM1 = b"H1"
TAG_TERNARY = b"H2"

# 2-bit chunk -> ternary entry; 0b11 is rejected
_TERNARY_CHUNKS = {0: 0, 1: 1, 2: -1}


def _xof(tag: bytes, data: bytes, length: int) -> bytes:
    return hashlib.shake_256(tag + data).digest(length)


def hash_pm1(data: bytes, n: int) -> SignVec:
    """One XOF bit per entry, MSB first: bit 0 -> +1, bit 1 -> -1."""
    stream = _xof(TAG_PM1, data, (n + 7) // 8)
    return tuple(-1 if (stream[j >> 3] >> (7 - (j & 7))) & 1 else 1 for j in range(n))


def hash_ternary(data: bytes, n: int) -> TernaryVec:
    """2-bit chunks, MSB first: 00 -> 0, 01 -> 1, 10 -> -1, 11 skipped.

    SHAKE output of a longer length extends the shorter one, so growing the
    stream until n entries are accepted is deterministic.
    """
    if n == 0:
        return ()
    length = max(8, (8 * n + 7) // 8)
    while True:
        out = []
        for byte in _xof(TAG_TERNARY, data, length):
            for shift in (6, 4, 2, 0):
                chunk = (byte >> shift) & 3
                if chunk == 3:
                    continue
                out.append(_TERNARY_CHUNKS[chunk])
                if len(out) == n:
                    return tuple(out)
        length *= 2


def hadamard(*vectors: Sequence[int]) -> Tuple[int, ...]:
    """Componentwise product."""
    lengths = {len(v) for v in vectors}
    if len(lengths) > 1:
        raise LengthMismatchError(f"componentwise product of lengths {sorted(lengths)}")
    result = [1] * (lengths.pop() if lengths else 0)
    for vector in vectors:
        for i, entry in enumerate(vector):
            result[i] *= entry
    return tuple(result)


def sample_sign_vec(rng: random.Random, n: int) -> SignVec:
    return tuple(-1 if rng.getrandbits(1) else 1 for _ in range(n))


def sample_binary_vec(rng: random.Random, n: int) -> Tuple[int, ...]:
    return tuple(rng.getrandbits(1) for _ in range(n))


def sample_ternary_vec(rng: random.Random, n: int) -> TernaryVec:
    out = []
    while len(out) < n:
        chunk = rng.getrandbits(2)
        if chunk != 3:
            out.append(_TERNARY_CHUNKS[chunk])
    return tuple(out)


def _smallest_prime_factor(N: int) -> int:
    d = 3
    while d * d <= N:
        if N % d == 0:
            return d
        d += 2
    return N


def check_exceptional_set(values: Sequence[int], N: int, super_exceptional: bool = False) -> bool:
    """True iff c_1 = 1, differences are units mod N and, if super, so are all sums."""
    if not values or N < 2 or values[0] % N != 1:
        return False
    residues = [v % N for v in values]
    for i in range(len(residues)):
        for j in range(i + 1, len(residues)):
            if gcd(residues[i] - residues[j], N) != 1:
                return False
    if super_exceptional:
        for i in range(len(residues)):
            for j in range(i, len(residues)):
                if gcd(residues[i] + residues[j], N) != 1:
                    return False
    return True


def gen_exceptional_set(n: int, N: int, super_exceptional: bool = True) -> ExceptionalSet:
    """The canonical set (1, 2, ..., n), or an error when no set of size n exists.

    Residues mod the smallest prime factor q of N must be distinct (and, for a
    super-exceptional set, nonzero with no two summing to zero), so any set has
    n <= q, or n <= (q - 1) / 2. Within that bound the canonical set already
    validates, so there is nothing to search for.

    Raises:
        ExceptionalSetError: If N is even or n exceeds the bound
    """
    if n < 1:
        raise ExceptionalSetError(f"set size must be positive, got {n}")
    if N % 2 == 0:
        raise ExceptionalSetError(f"modulus {N} is even; 2 is never invertible")

    canonical = tuple(range(1, n + 1))
    if check_exceptional_set(canonical, N, super_exceptional):
        return ExceptionalSet(values=canonical, modulus=N, super_exceptional=super_exceptional)

    q = _smallest_prime_factor(N)
    bound = (q - 1) // 2 if super_exceptional else q
    kind = "super-exceptional" if super_exceptional else "exceptional"
    raise ExceptionalSetError(f"no {kind} set of size {n} modulo {N}: at most {bound}")


def exceptional_set_for(n: int, N: int, super_exceptional: bool, strict: bool) -> ExceptionalSet:
    """Generated set, or in relaxed mode the unchecked canonical set when generation fails."""
    try:
        return gen_exceptional_set(n, N, super_exceptional)
    except ExceptionalSetError as e:
        if strict:
            raise
        logger.warning(f"{e}; using unverified canonical set (1..{n}) mod {N}")
        return ExceptionalSet(
            values=tuple(i % N for i in range(1, n + 1)),
            modulus=N,
            super_exceptional=super_exceptional,
            verified=False,
        )


def identity_hash(params: ActionParams, identity: bytes, curves: Sequence[int]) -> SignVec:
    """u = H(id || X) over the fixed-width curve encoding."""
    return hash_pm1(identity + encode_curves(params, curves), len(curves))
