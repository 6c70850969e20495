"""Frame envelope and fixed-width payload codecs.

Frame: magic "CIBS" | version (1 byte) | msg_type (1 byte) | length (4 bytes, big-endian) | payload.
Protocol messages are fixed-width binary; PARAMS, UPK, MSK and USK carry JSON.
"""

import struct
from enum import IntEnum
from typing import Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, ValidationError

from ..protocols.ibbs import BlindSignature, RhoS1, RhoS2, RhoU
from ..protocols.ibid import IbidCommitMessage
from ..utils.errors import WireDecodeError
from ..utils.models import ActionParams, IbbsMode
from .encoding import (
    decode_curves,
    decode_exponents,
    encode_curves,
    encode_exponents,
    pack_ternary,
    ternary_bytes,
    unpack_ternary,
)

MAGIC = b"CIBS"
VERSION = 1
HEADER = struct.Struct(">4sBBI")
MAX_PAYLOAD = 16 * 1024 * 1024

SIG_MAGIC = b"IBBS"
SIG_HEADER = struct.Struct(">4sBBH")
_MODE_BYTES = {IbbsMode.PAPER: 0, IbbsMode.OTTER: 1}
_BYTE_MODES = {v: k for k, v in _MODE_BYTES.items()}

ModelT = TypeVar("ModelT", bound=BaseModel)


class MsgType(IntEnum):
    PARAMS = 0x01
    UPK = 0x02
    RHO_S1 = 0x03
    RHO_U = 0x04
    RHO_S2 = 0x05
    SIG = 0x06
    ID_COMMIT = 0x07
    ID_CHALLENGE = 0x08
    ID_RESPONSE = 0x09
    ERROR = 0x0A
    MSK = 0x0B
    USK = 0x0C
    SESSION_END = 0x0D


class SessionStatus(IntEnum):
    """SESSION_END status byte."""
    ACCEPTED = 0
    RETRY = 1
    ABORT = 2


# frames whose payload is secret key material
SECRET_TYPES = frozenset({MsgType.MSK, MsgType.USK})


class Frame(BaseModel):
    model_config = ConfigDict(frozen=True)

    msg_type: MsgType
    payload: bytes = b""
    version: int = VERSION


def encode_frame(frame: Frame) -> bytes:
    if len(frame.payload) > MAX_PAYLOAD:
        raise WireDecodeError(f"payload of {len(frame.payload)} bytes exceeds {MAX_PAYLOAD}")
    return HEADER.pack(MAGIC, frame.version, int(frame.msg_type), len(frame.payload)) + frame.payload


def decode_header(header: bytes) -> Tuple[MsgType, int]:
    """Validate a frame header and return (msg_type, payload length).

    Raises:
        WireDecodeError: On bad magic, unsupported version, unknown type or oversize length
    """
    if len(header) != HEADER.size:
        raise WireDecodeError(f"frame header needs {HEADER.size} bytes, got {len(header)}")
    magic, version, raw_type, length = HEADER.unpack(header)
    if magic != MAGIC:
        raise WireDecodeError(f"bad magic {magic!r}")
    if version != VERSION:
        raise WireDecodeError(f"unsupported wire version {version}")
    try:
        msg_type = MsgType(raw_type)
    except ValueError:
        raise WireDecodeError(f"unknown message type 0x{raw_type:02x}") from None
    if length > MAX_PAYLOAD:
        raise WireDecodeError(f"declared payload of {length} bytes exceeds {MAX_PAYLOAD}")
    return msg_type, length


def decode_frame(data: bytes) -> Frame:
    """Inverse of ``encode_frame``; the buffer must hold exactly one frame."""
    msg_type, length = decode_header(bytes(data[:HEADER.size]))
    payload = bytes(data[HEADER.size:])
    if len(payload) != length:
        raise WireDecodeError(f"header declares {length} payload bytes, frame carries {len(payload)}")
    return Frame(msg_type=msg_type, payload=payload)


def json_frame(msg_type: MsgType, model: BaseModel) -> Frame:
    return Frame(msg_type=msg_type, payload=model.model_dump_json().encode("utf-8"))


def decode_json(frame: Frame, model_cls: Type[ModelT]) -> ModelT:
    try:
        return model_cls.model_validate_json(frame.payload)
    except ValidationError as e:
        raise WireDecodeError(f"invalid {frame.msg_type.name} payload: {e.error_count()} error(s)") from e


def error_frame(code: int, text: str) -> Frame:
    return Frame(msg_type=MsgType.ERROR, payload=struct.pack(">H", code) + text.encode("utf-8"))


def decode_error(frame: Frame) -> Tuple[int, str]:
    if len(frame.payload) < 2:
        raise WireDecodeError("error frame without code")
    (code,) = struct.unpack(">H", frame.payload[:2])
    return code, frame.payload[2:].decode("utf-8", errors="replace")


def session_end_frame(status: SessionStatus) -> Frame:
    return Frame(msg_type=MsgType.SESSION_END, payload=bytes([int(status)]))


def decode_session_end(frame: Frame) -> SessionStatus:
    if len(frame.payload) != 1:
        raise WireDecodeError(f"session end carries {len(frame.payload)} bytes, expected 1")
    try:
        return SessionStatus(frame.payload[0])
    except ValueError:
        raise WireDecodeError(f"unknown session status {frame.payload[0]}") from None


class WireCodec:
    """Stateless payload codecs for one parameter set and vector length n."""

    def __init__(self, params: ActionParams, n: int):
        self.params = params
        self.n = n
        self.curve_width = params.curve_bytes
        self.exponent_width = params.exponent_bytes
        self.ternary_width = ternary_bytes(n)

    def _split(self, payload: bytes, widths: Tuple[int, ...], label: str) -> Tuple[bytes, ...]:
        if len(payload) != sum(widths):
            raise WireDecodeError(f"{label} payload has {len(payload)} bytes, expected {sum(widths)}")
        parts, offset = [], 0
        for width in widths:
            parts.append(payload[offset:offset + width])
            offset += width
        return tuple(parts)

    def _curves(self, data: bytes) -> Tuple[int, ...]:
        return decode_curves(self.params, data, self.n)

    def _exponents(self, data: bytes) -> Tuple[int, ...]:
        return decode_exponents(self.params, data, self.n)

    @property
    def _curve_block(self) -> int:
        return self.n * self.curve_width

    @property
    def _exponent_block(self) -> int:
        return self.n * self.exponent_width

    def encode_rho_s1(self, rho: RhoS1) -> Frame:
        payload = encode_curves(self.params, rho.Y0) + encode_curves(self.params, rho.Y1)
        return Frame(msg_type=MsgType.RHO_S1, payload=payload)

    def decode_rho_s1(self, frame: Frame) -> RhoS1:
        y0, y1 = self._split(frame.payload, (self._curve_block,) * 2, "RHO_S1")
        return RhoS1(Y0=self._curves(y0), Y1=self._curves(y1))

    def encode_rho_u(self, rho: RhoU) -> Frame:
        return Frame(msg_type=MsgType.RHO_U, payload=pack_ternary(rho.c_star))

    def decode_rho_u(self, frame: Frame) -> RhoU:
        return RhoU(c_star=unpack_ternary(frame.payload, self.n))

    def encode_rho_s2(self, rho: RhoS2) -> Frame:
        payload = (pack_ternary(rho.c_star_0) + pack_ternary(rho.c_star_1)
                   + encode_exponents(self.params, rho.r_star_0)
                   + encode_exponents(self.params, rho.r_star_1))
        return Frame(msg_type=MsgType.RHO_S2, payload=payload)

    def decode_rho_s2(self, frame: Frame) -> RhoS2:
        c0, c1, r0, r1 = self._split(
            frame.payload,
            (self.ternary_width, self.ternary_width, self._exponent_block, self._exponent_block),
            "RHO_S2",
        )
        return RhoS2(
            c_star_0=unpack_ternary(c0, self.n),
            c_star_1=unpack_ternary(c1, self.n),
            r_star_0=self._exponents(r0),
            r_star_1=self._exponents(r1),
        )

    def signature_payload(self, sig: BlindSignature) -> bytes:
        """c~0 || c~1 as one packed ternary block of 2n entries, then r~0, r~1 fixed width.

        The joint block costs 4n bits rounded up to whole bytes, so the payload is
        exactly 4n + 2n * 8 * exponent_bytes bits whenever n is even.
        """
        return (pack_ternary(tuple(sig.tilde_c_0) + tuple(sig.tilde_c_1))
                + encode_exponents(self.params, sig.tilde_r_0)
                + encode_exponents(self.params, sig.tilde_r_1))

    @property
    def signature_width(self) -> int:
        return ternary_bytes(2 * self.n) + 2 * self._exponent_block

    def parse_signature_payload(self, payload: bytes) -> BlindSignature:
        c, r0, r1 = self._split(
            payload,
            (ternary_bytes(2 * self.n), self._exponent_block, self._exponent_block),
            "signature",
        )
        challenges = unpack_ternary(c, 2 * self.n)
        return BlindSignature(
            tilde_c_0=challenges[:self.n],
            tilde_c_1=challenges[self.n:],
            tilde_r_0=self._exponents(r0),
            tilde_r_1=self._exponents(r1),
        )

    def encode_signature(self, sig: BlindSignature) -> Frame:
        return Frame(msg_type=MsgType.SIG, payload=self.signature_payload(sig))

    def decode_signature(self, frame: Frame) -> BlindSignature:
        return self.parse_signature_payload(frame.payload)

    def encode_signature_file(self, sig: BlindSignature, mode: IbbsMode) -> bytes:
        header = SIG_HEADER.pack(SIG_MAGIC, VERSION, _MODE_BYTES[mode], self.n)
        return header + self.signature_payload(sig)

    def split_signature_file(self, data: bytes) -> Tuple[IbbsMode, bytes]:
        """Check the header and the payload length; return the mode and raw payload.

        Raises:
            WireDecodeError: On bad magic, version, mode, n or payload length
        """
        if len(data) < SIG_HEADER.size:
            raise WireDecodeError("signature file shorter than its header")
        magic, version, mode_byte, n = SIG_HEADER.unpack(data[:SIG_HEADER.size])
        if magic != SIG_MAGIC:
            raise WireDecodeError(f"bad signature magic {magic!r}")
        if version != VERSION:
            raise WireDecodeError(f"unsupported signature version {version}")
        if mode_byte not in _BYTE_MODES:
            raise WireDecodeError(f"unknown signature mode byte {mode_byte}")
        if n != self.n:
            raise WireDecodeError(f"signature for n={n}, parameters have n={self.n}")
        payload = data[SIG_HEADER.size:]
        if len(payload) != self.signature_width:
            raise WireDecodeError(f"signature payload has {len(payload)} bytes, expected {self.signature_width}")
        return _BYTE_MODES[mode_byte], payload

    def decode_signature_file(self, data: bytes) -> Tuple[IbbsMode, BlindSignature]:
        """Signature file: "IBBS" | version | mode | n (2 bytes) | payload.

        Raises:
            WireDecodeError: On a bad header or payload
        """
        mode, payload = self.split_signature_file(data)
        return mode, self.parse_signature_payload(payload)

    def encode_id_commit(self, message: IbidCommitMessage) -> Frame:
        payload = encode_curves(self.params, message.X) + encode_curves(self.params, message.K)
        return Frame(msg_type=MsgType.ID_COMMIT, payload=payload)

    def decode_id_commit(self, frame: Frame) -> IbidCommitMessage:
        x, k = self._split(frame.payload, (self._curve_block,) * 2, "ID_COMMIT")
        return IbidCommitMessage(X=self._curves(x), K=self._curves(k))

    def encode_id_challenge(self, v: Tuple[int, ...]) -> Frame:
        return Frame(msg_type=MsgType.ID_CHALLENGE, payload=pack_ternary(v))

    def decode_id_challenge(self, frame: Frame) -> Tuple[int, ...]:
        return unpack_ternary(frame.payload, self.n)

    def encode_id_response(self, z: Tuple[int, ...]) -> Frame:
        return Frame(msg_type=MsgType.ID_RESPONSE, payload=encode_exponents(self.params, z))

    def decode_id_response(self, frame: Frame) -> Tuple[int, ...]:
        self._split(frame.payload, (self._exponent_block,), "ID_RESPONSE")
        return self._exponents(frame.payload)
