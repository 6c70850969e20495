"""Fixed-width big-endian field encodings shared by hashes, frames and files."""

from typing import Sequence, Tuple

from ..utils.errors import WireDecodeError
from ..utils.models import ActionParams, BackendKind

# ternary entry <-> 2-bit code; 0b11 is invalid
TERNARY_TO_CODE = {0: 0b00, 1: 0b01, -1: 0b10}
CODE_TO_TERNARY = {0b00: 0, 0b01: 1, 0b10: -1}


def encode_uints(values: Sequence[int], width: int) -> bytes:
    return b"".join(int(v).to_bytes(width, "big") for v in values)


def decode_uints(data: bytes, count: int, width: int, bound: int) -> Tuple[int, ...]:
    """Decode ``count`` integers of ``width`` bytes, each below ``bound``."""
    if len(data) != count * width:
        raise WireDecodeError(f"expected {count * width} bytes for {count} values, got {len(data)}")
    values = tuple(int.from_bytes(data[i * width:(i + 1) * width], "big") for i in range(count))
    for v in values:
        if v >= bound:
            raise WireDecodeError(f"value {v} out of range [0, {bound})")
    return values


def curve_bound(params: ActionParams) -> int:
    return params.p if params.backend_kind == BackendKind.CSIDH else params.modulus


def encode_curves(params: ActionParams, curves: Sequence[int]) -> bytes:
    """Curves in index order, each ceil(log2 p) bits rounded up to whole bytes."""
    return encode_uints(curves, params.curve_bytes)


def decode_curves(params: ActionParams, data: bytes, count: int) -> Tuple[int, ...]:
    return decode_uints(data, count, params.curve_bytes, curve_bound(params))


def encode_exponents(params: ActionParams, values: Sequence[int]) -> bytes:
    return encode_uints(values, params.exponent_bytes)


def decode_exponents(params: ActionParams, data: bytes, count: int) -> Tuple[int, ...]:
    return decode_uints(data, count, params.exponent_bytes, params.modulus)


def ternary_bytes(n: int) -> int:
    return (2 * n + 7) // 8


def pack_ternary(values: Sequence[int]) -> bytes:
    """Four entries per byte, first entry in the top two bits, zero padding."""
    out = bytearray(ternary_bytes(len(values)))
    for j, v in enumerate(values):
        try:
            code = TERNARY_TO_CODE[v]
        except KeyError:
            raise WireDecodeError(f"entry {v} is not ternary") from None
        out[j >> 2] |= code << (6 - 2 * (j & 3))
    return bytes(out)


def unpack_ternary(data: bytes, n: int) -> Tuple[int, ...]:
    """Inverse of pack_ternary.

    Raises:
        WireDecodeError: On wrong length, code 11, or nonzero padding
    """
    if len(data) != ternary_bytes(n):
        raise WireDecodeError(f"expected {ternary_bytes(n)} bytes for {n} ternary entries, got {len(data)}")
    values = []
    for j in range(4 * len(data)):
        code = (data[j >> 2] >> (6 - 2 * (j & 3))) & 3
        if code == 0b11:
            raise WireDecodeError(f"invalid ternary code 11 at entry {j}")
        if j < n:
            values.append(CODE_TO_TERNARY[code])
        elif code:
            raise WireDecodeError("nonzero ternary padding")
    return tuple(values)


def centered(e: int, N: int) -> int:
    """Representative of e mod N in [-N/2, N/2)."""
    e %= N
    return e - N if e >= (N + 1) // 2 else e
