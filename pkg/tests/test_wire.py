"""Tests for field encodings, frames, payload codecs and transcripts."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from src.protocols.ibbs import BlindSignature, IbbsMasterSecret, RhoS1, RhoS2, RhoU
from src.protocols.ibid import IbidCommitMessage
from src.utils.errors import WireDecodeError
from src.utils.models import ActionParams, BackendKind, IbbsMode
from src.wire.codec import (
    HEADER,
    MAGIC,
    SECRET_TYPES,
    Frame,
    MsgType,
    SessionStatus,
    WireCodec,
    decode_error,
    decode_frame,
    decode_header,
    decode_json,
    decode_session_end,
    encode_frame,
    error_frame,
    json_frame,
    session_end_frame,
)
from src.wire.encoding import (
    centered,
    decode_curves,
    encode_curves,
    pack_ternary,
    ternary_bytes,
    unpack_ternary,
)
from src.wire.transcript import RECEIVED, SENT, TranscriptLog

TOY_251 = ActionParams(backend_kind=BackendKind.TOY, N=251, n=4)
CSIDH_419 = ActionParams(backend_kind=BackendKind.CSIDH, p=419, ell_list=(3, 5, 7), N=27, n=4,
                         generator="ell3-plus")


class TestFieldEncodings:
    def test_widths(self):
        assert TOY_251.curve_bytes == 1 and TOY_251.exponent_bytes == 1
        assert CSIDH_419.curve_bits == 9 and CSIDH_419.curve_bytes == 2
        assert CSIDH_419.exponent_bits == 5
        assert encode_curves(CSIDH_419, (0, 418)) == b"\x00\x00\x01\xa2"

    def test_curve_range(self):
        assert decode_curves(CSIDH_419, b"\x01\xa2", 1) == (418,)
        with pytest.raises(WireDecodeError):
            decode_curves(CSIDH_419, b"\x01\xa3", 1)
        with pytest.raises(WireDecodeError):
            decode_curves(TOY_251, b"\x05", 2)

    def test_ternary_packing(self):
        assert pack_ternary((1, -1, 0, 1)) == b"\x61"
        assert pack_ternary((1, -1, 0, 1, -1)) == b"\x61\x80"
        assert ternary_bytes(5) == 2
        assert unpack_ternary(b"\x61\x80", 5) == (1, -1, 0, 1, -1)

    def test_ternary_decode_errors(self):
        with pytest.raises(WireDecodeError):
            unpack_ternary(b"\xc0", 1)
        with pytest.raises(WireDecodeError):
            unpack_ternary(b"\x41", 1)
        with pytest.raises(WireDecodeError):
            unpack_ternary(b"\x40\x00", 1)
        with pytest.raises(WireDecodeError):
            pack_ternary((2,))

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.sampled_from((-1, 0, 1)), max_size=40))
    def test_ternary_inverse(self, values):
        assert unpack_ternary(pack_ternary(values), len(values)) == tuple(values)

    def test_centered(self):
        assert centered(100, 101) == -1
        assert centered(50, 101) == 50
        assert centered(51, 101) == -50
        assert centered(-3, 27) == -3


class TestFrames:
    """Envelope: magic, version, type, length."""

    @settings(max_examples=10_000, deadline=None)
    @given(msg_type=st.sampled_from(list(MsgType)), payload=st.binary(max_size=300))
    def test_round_trip(self, msg_type, payload):
        frame = Frame(msg_type=msg_type, payload=payload)
        data = encode_frame(frame)
        assert len(data) == HEADER.size + len(payload)
        assert decode_frame(data) == frame

    @pytest.mark.slow
    def test_randomized_round_trips(self):
        """Ten thousand seeded messages of every type through codec and envelope."""
        rng = random.Random(11)
        for case in range(10_000):
            params = (TOY_251, CSIDH_419)[case % 2]
            n = rng.randint(1, 20)
            codec = WireCodec(params.with_n(n), n)
            curve_bound = params.p if params.p else params.N
            curves = lambda: tuple(rng.randrange(curve_bound) for _ in range(n))
            exponents = lambda: tuple(rng.randrange(params.N) for _ in range(n))
            ternary = lambda: tuple(rng.choice((-1, 0, 1)) for _ in range(n))

            msg_type = list(MsgType)[case % len(MsgType)]
            if msg_type == MsgType.RHO_S1:
                value, encode, decode = RhoS1(Y0=curves(), Y1=curves()), codec.encode_rho_s1, codec.decode_rho_s1
            elif msg_type == MsgType.RHO_U:
                value, encode, decode = RhoU(c_star=ternary()), codec.encode_rho_u, codec.decode_rho_u
            elif msg_type == MsgType.RHO_S2:
                value = RhoS2(c_star_0=ternary(), c_star_1=ternary(),
                              r_star_0=exponents(), r_star_1=exponents())
                encode, decode = codec.encode_rho_s2, codec.decode_rho_s2
            elif msg_type == MsgType.SIG:
                value = BlindSignature(tilde_c_0=ternary(), tilde_c_1=ternary(),
                                       tilde_r_0=exponents(), tilde_r_1=exponents())
                encode, decode = codec.encode_signature, codec.decode_signature
            elif msg_type == MsgType.ID_COMMIT:
                value = IbidCommitMessage(X=curves(), K=curves())
                encode, decode = codec.encode_id_commit, codec.decode_id_commit
            elif msg_type == MsgType.ID_CHALLENGE:
                value, encode, decode = ternary(), codec.encode_id_challenge, codec.decode_id_challenge
            elif msg_type == MsgType.ID_RESPONSE:
                value, encode, decode = exponents(), codec.encode_id_response, codec.decode_id_response
            elif msg_type == MsgType.SESSION_END:
                value, encode, decode = rng.choice(list(SessionStatus)), session_end_frame, decode_session_end
            elif msg_type == MsgType.ERROR:
                value = (rng.randrange(1, 9), f"failure {rng.getrandbits(32):08x}")
                encode, decode = (lambda v: error_frame(*v)), decode_error
            else:
                value = IbbsMasterSecret(s0=rng.randrange(1, params.N), s1=rng.randrange(1, params.N))
                encode = lambda v, t=msg_type: json_frame(t, v)
                decode = lambda f: decode_json(f, IbbsMasterSecret)

            frame = encode(value)
            assert decode(decode_frame(encode_frame(frame))) == value


    def test_rho_u_bytes(self):
        codec = WireCodec(TOY_251, 4)
        data = encode_frame(codec.encode_rho_u(RhoU(c_star=(1, -1, 0, 1))))
        assert data == MAGIC + bytes([1, 0x04, 0, 0, 0, 1, 0x61])

    def test_header_errors(self):
        good = encode_frame(Frame(msg_type=MsgType.RHO_U, payload=b"\x00"))
        with pytest.raises(WireDecodeError):
            decode_frame(b"XXXX" + good[4:])
        with pytest.raises(WireDecodeError):
            decode_frame(good[:4] + b"\x02" + good[5:])
        with pytest.raises(WireDecodeError):
            decode_frame(good[:5] + b"\x0e" + good[6:])
        with pytest.raises(WireDecodeError):
            decode_frame(good[:-1])
        with pytest.raises(WireDecodeError):
            decode_header(good[:5])
        with pytest.raises(WireDecodeError):
            decode_header(MAGIC + bytes([1, 4]) + (2**31).to_bytes(4, "big"))

    def test_json_frames(self):
        frame = json_frame(MsgType.MSK, IbbsMasterSecret(s0=5, s1=9))
        assert decode_json(decode_frame(encode_frame(frame)), IbbsMasterSecret) == IbbsMasterSecret(s0=5, s1=9)
        with pytest.raises(WireDecodeError):
            decode_json(Frame(msg_type=MsgType.MSK, payload=b'{"s0": "x"}'), IbbsMasterSecret)

    def test_error_and_session_end(self):
        assert decode_error(error_frame(7, "bad frame")) == (7, "bad frame")
        with pytest.raises(WireDecodeError):
            decode_error(Frame(msg_type=MsgType.ERROR, payload=b"\x00"))
        for status in SessionStatus:
            assert decode_session_end(session_end_frame(status)) == status
        with pytest.raises(WireDecodeError):
            decode_session_end(Frame(msg_type=MsgType.SESSION_END, payload=b"\x09"))
        with pytest.raises(WireDecodeError):
            decode_session_end(Frame(msg_type=MsgType.SESSION_END, payload=b""))


class TestPayloadCodecs:
    def setup_method(self):
        self.codec = WireCodec(CSIDH_419, 4)
        self.sig = BlindSignature(tilde_c_0=(1, 0, -1, 1), tilde_c_1=(-1, -1, 0, 1),
                                  tilde_r_0=(0, 5, 26, 13), tilde_r_1=(1, 2, 3, 4))

    def test_protocol_messages(self):
        rho_s1 = RhoS1(Y0=(0, 418, 3, 7), Y1=(1, 2, 3, 4))
        assert self.codec.decode_rho_s1(self.codec.encode_rho_s1(rho_s1)) == rho_s1
        rho_s2 = RhoS2(c_star_0=(1, 0, -1, 1), c_star_1=(1, 1, 1, -1),
                       r_star_0=(0, 1, 2, 26), r_star_1=(3, 4, 5, 6))
        frame = self.codec.encode_rho_s2(rho_s2)
        assert len(frame.payload) == 1 + 1 + 4 + 4
        assert self.codec.decode_rho_s2(frame) == rho_s2

    def test_exponent_range(self):
        frame = self.codec.encode_rho_s2(RhoS2(c_star_0=(1,) * 4, c_star_1=(1,) * 4,
                                               r_star_0=(0,) * 4, r_star_1=(0,) * 4))
        payload = frame.payload[:-1] + bytes([27])
        with pytest.raises(WireDecodeError):
            self.codec.decode_rho_s2(Frame(msg_type=MsgType.RHO_S2, payload=payload))
        with pytest.raises(WireDecodeError):
            self.codec.decode_rho_s2(Frame(msg_type=MsgType.RHO_S2, payload=frame.payload[:-1]))

    def test_identification_messages(self):
        message = IbidCommitMessage(X=(0, 1, 2, 3), K=(4, 5, 6, 7))
        assert self.codec.decode_id_commit(self.codec.encode_id_commit(message)) == message
        assert self.codec.decode_id_challenge(self.codec.encode_id_challenge((0, 1, 1, 0))) == (0, 1, 1, 0)
        assert self.codec.decode_id_response(self.codec.encode_id_response((9, 8, 7, 6))) == (9, 8, 7, 6)
        with pytest.raises(WireDecodeError):
            self.codec.decode_id_response(Frame(msg_type=MsgType.ID_RESPONSE, payload=b"\x01"))

    def test_signature_file(self):
        data = self.codec.encode_signature_file(self.sig, IbbsMode.PAPER)
        assert data[:4] == b"IBBS"
        assert data[4:8] == bytes([1, 0, 0, 4])
        assert self.codec.decode_signature_file(data) == (IbbsMode.PAPER, self.sig)

        otter = self.codec.encode_signature_file(self.sig, IbbsMode.OTTER)
        assert otter[5] == 1

    def test_signature_file_errors(self):
        data = self.codec.encode_signature_file(self.sig, IbbsMode.PAPER)
        for bad in (b"XBBS" + data[4:], data[:4] + b"\x02" + data[5:], data[:5] + b"\x05" + data[6:],
                    data[:6] + b"\x00\x05" + data[8:], data[:-1], data[:3]):
            with pytest.raises(WireDecodeError):
                self.codec.decode_signature_file(bad)

    def test_signature_bytes(self):
        # c~0 || c~1 share one ternary block: 01 00 10 01 | 10 10 00 01
        payload = self.codec.signature_payload(self.sig)
        assert payload == bytes([0x49, 0xA1, 0, 5, 26, 13, 1, 2, 3, 4])
        assert self.codec.signature_width == len(payload)

    def test_signature_size_law(self):
        # log2 N = 8 is a byte multiple; only the joint ternary block rounds up
        for n in (1, 2, 3, 4, 5, 6, 8, 16, 30):
            codec = WireCodec(TOY_251.with_n(n), n)
            sig = BlindSignature(tilde_c_0=(1,) * n, tilde_c_1=(-1,) * n,
                                 tilde_r_0=(250,) * n, tilde_r_1=(0,) * n)
            bits = 8 * len(codec.signature_payload(sig))
            assert bits == 8 * ((4 * n + 7) // 8) + 2 * n * 8
            if n % 2 == 0:
                assert bits == 4 * n + 2 * n * 8
            assert codec.decode_signature(codec.encode_signature(sig)) == sig

    def test_signature_payload_values_checked_after_header(self):
        data = self.codec.encode_signature_file(self.sig, IbbsMode.OTTER)
        tampered = data[:-1] + bytes([27])
        mode, payload = self.codec.split_signature_file(tampered)
        assert mode == IbbsMode.OTTER
        with pytest.raises(WireDecodeError):
            self.codec.parse_signature_payload(payload)
        with pytest.raises(WireDecodeError):
            self.codec.split_signature_file(data + b"\x00")


class TestTranscript:
    def test_records_digests(self):
        log = TranscriptLog("user", include_payloads=True, sink=False)
        log.record(SENT, Frame(msg_type=MsgType.RHO_U, payload=b"\x61"))
        log.record(RECEIVED, Frame(msg_type=MsgType.RHO_S2, payload=b"\x01\x02"))
        assert len(log) == 2
        assert log.msg_types() == ["RHO_U", "RHO_S2"]
        assert log.msg_types(RECEIVED) == ["RHO_S2"]
        assert log.count(MsgType.RHO_U) == 1
        assert log.entries[0].payload == "61"
        assert log.entries[1].length == 2

    def test_key_material_never_stored(self):
        log = TranscriptLog("kgc", include_payloads=True, sink=False)
        for msg_type in SECRET_TYPES:
            entry = log.record(SENT, Frame(msg_type=msg_type, payload=b"secret"))
            assert entry.payload is None
            assert len(entry.digest) == 64

    def test_payloads_off_by_default(self):
        entry = TranscriptLog("signer", sink=False).record(SENT, Frame(msg_type=MsgType.RHO_S1))
        assert entry.payload is None
