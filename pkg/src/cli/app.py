"""Command-line interface: key files, blind signing, verification, bench and demos."""

import argparse
import asyncio
import json
import random
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Type, TypeVar

from pydantic import BaseModel

from ..action.backend_factory import BackendFactory, create_backend
from ..action.base_backend import ActionBackend
from ..monitoring.logger import ibbs_logger
from ..protocols.ibbs import (
    IbbsMasterSecret,
    IbbsParams,
    IbbsPublicKey,
    IbbsUserKeys,
    ibbs_extract,
    ibbs_setup,
    ibbs_verify,
)
from ..protocols.ibid import ibid_extract, ibid_setup
from ..reporting.report_generator import CONVENTION_SQRT, CONVENTION_TABLE, ReportGenerator
from ..utils.config import config
from ..utils.errors import (
    ExitCode,
    IbbsError,
    ParameterError,
    UsageError,
    VerificationFailedError,
    WireDecodeError,
)
from ..utils.models import IbbsMode, IbidMode, SessionRole
from ..wire.codec import Frame, MsgType, WireCodec, decode_frame, encode_frame, json_frame, decode_json
from ..wire.session_runner import (
    BlindSessionInputs,
    BlindSessionOutcome,
    IbidSessionInputs,
    run_blind_session,
    run_ibid_session,
)
from ..wire.transcript import TranscriptLog
from ..wire.transport import FrameTransport, open_tcp, pipe_pair, serve_tcp, socketpair_transports

ModelT = TypeVar("ModelT", bound=BaseModel)

log = ibbs_logger.get_logger("cli")


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting."""

    def error(self, message: str) -> None:
        raise UsageError(message)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ibbs", description="Isogeny-based identity blind signatures")
    parser.add_argument("--log-level", default=None, help="override monitoring.log_level")
    sub = parser.add_subparsers(dest="command", required=True)

    setup = sub.add_parser("setup", help="generate public parameters and the master secret")
    setup.add_argument("--backend", choices=BackendFactory.get_available_backends(), default=None)
    setup.add_argument("--n", type=int, default=None)
    setup.add_argument("--mode", choices=[m.value for m in IbbsMode], default=None)
    setup.add_argument("--out-dir", default="keys")
    setup.add_argument("--relaxed", action="store_true", help="accept an unverified exceptional set")
    setup.add_argument("--seed", type=int, default=None)

    extract = sub.add_parser("extract", help="derive the key pair of an identity")
    extract.add_argument("--id", required=True, dest="identity")
    extract.add_argument("--params", default="keys/params.bin")
    extract.add_argument("--msk", default="keys/msk.bin")
    extract.add_argument("--out-dir", default="keys")
    extract.add_argument("--seed", type=int, default=None)

    sign = sub.add_parser("sign", help="run the blind signing protocol")
    sign.add_argument("--role", choices=[SessionRole.SIGNER.value, SessionRole.USER.value], required=True)
    sign.add_argument("--transport", choices=["pipe", "tcp"], default=None)
    sign.add_argument("--address", default=None)
    sign.add_argument("--params", default="keys/params.bin")
    sign.add_argument("--usk", default="keys/usk.bin")
    sign.add_argument("--upk", default="keys/upk.bin")
    sign.add_argument("--id", dest="identity", default=None)
    sign.add_argument("--message-file", default=None)
    sign.add_argument("--out", default="signature.bin")
    sign.add_argument("--seed", type=int, default=None)

    verify = sub.add_parser("verify", help="verify a signature file")
    verify.add_argument("--sig", required=True)
    verify.add_argument("--message-file", required=True)
    verify.add_argument("--id", dest="identity", required=True)
    verify.add_argument("--params", default="keys/params.bin")
    verify.add_argument("--upk", default="keys/upk.bin")

    bench = sub.add_parser("bench", help="size table, action counts and timings")
    bench.add_argument("--levels", type=_int_list, default=None)
    bench.add_argument("--n", type=_int_list, default=None, dest="n_values")
    bench.add_argument("--backend", choices=BackendFactory.get_available_backends(), default=None)
    bench.add_argument("--repeats", type=int, default=None)
    bench.add_argument("--convention", choices=[CONVENTION_TABLE, CONVENTION_SQRT], default=CONVENTION_TABLE)
    bench.add_argument("--format", choices=["text", "json", "csv"], default="text")

    demo = sub.add_parser("demo", help="setup, extract, blind signing and verification in one process")
    demo.add_argument("--mode", choices=[m.value for m in IbbsMode], default=None)
    demo.add_argument("--n", type=int, default=None)
    demo.add_argument("--backend", choices=BackendFactory.get_available_backends(), default=None)
    demo.add_argument("--transcript", default=None, help="write the signer and user transcripts here")
    demo.add_argument("--relaxed", action="store_true")
    demo.add_argument("--message", default="hello, blind world")
    demo.add_argument("--id", dest="identity", default="alice@example.org")
    demo.add_argument("--seed", type=int, default=None)

    id_demo = sub.add_parser("id-demo", help="identification session in one process")
    id_demo.add_argument("--mode", choices=[m.value for m in IbidMode], default=None)
    id_demo.add_argument("--n", type=int, default=None)
    id_demo.add_argument("--backend", choices=BackendFactory.get_available_backends(), default=None)
    id_demo.add_argument("--socketpair", action="store_true")
    id_demo.add_argument("--relaxed", action="store_true")
    id_demo.add_argument("--id", dest="identity", default="alice@example.org")
    id_demo.add_argument("--seed", type=int, default=None)
    return parser


def _rng(seed: Optional[int]) -> random.Random:
    return random.Random(seed) if seed is not None else random.SystemRandom()


def write_frame_file(path: Path, frame: Frame) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_frame(frame))


def read_model_file(path: str, msg_type: MsgType, model_cls: Type[ModelT]) -> ModelT:
    frame = decode_frame(Path(path).read_bytes())
    if frame.msg_type != msg_type:
        raise ParameterError(f"{path} holds a {frame.msg_type.name} frame, expected {msg_type.name}")
    return decode_json(frame, model_cls)


def _backend_for(params: IbbsParams) -> ActionBackend:
    return create_backend(params.action)


def _read_message(path: Optional[str]) -> bytes:
    if path is None:
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def cmd_setup(args: argparse.Namespace) -> int:
    backend = BackendFactory.from_config(args.backend, args.n)
    strict = False if args.relaxed else None
    params, msk = ibbs_setup(backend, _rng(args.seed), mode=args.mode, strict=strict)
    out = Path(args.out_dir)
    write_frame_file(out / "params.bin", json_frame(MsgType.PARAMS, params))
    write_frame_file(out / "msk.bin", json_frame(MsgType.MSK, msk))
    ibbs_logger.log_system_event("setup", f"parameters written to {out}")
    print(f"params: {out / 'params.bin'}")
    print(f"msk:    {out / 'msk.bin'}")
    if not params.exceptional_verified:
        print("warning: exceptional set is unverified for this modulus")
    return ExitCode.OK


def cmd_extract(args: argparse.Namespace) -> int:
    params = read_model_file(args.params, MsgType.PARAMS, IbbsParams)
    msk = read_model_file(args.msk, MsgType.MSK, IbbsMasterSecret)
    keys = ibbs_extract(_backend_for(params), params, msk, args.identity.encode("utf-8"), _rng(args.seed))
    out = Path(args.out_dir)
    write_frame_file(out / "usk.bin", json_frame(MsgType.USK, keys))
    write_frame_file(out / "upk.bin", json_frame(MsgType.UPK, keys.pk))
    ibbs_logger.log_system_event("extract", f"keys issued for identity of {len(args.identity)} chars")
    print(f"usk: {out / 'usk.bin'}")
    print(f"upk: {out / 'upk.bin'}")
    return ExitCode.OK


async def _sign_pipe(inputs_signer: BlindSessionInputs,
                     inputs_user: BlindSessionInputs) -> BlindSessionOutcome:
    signer_end, user_end = pipe_pair()
    _, user_outcome = await asyncio.gather(
        run_blind_session(signer_end, SessionRole.SIGNER, inputs_signer),
        run_blind_session(user_end, SessionRole.USER, inputs_user),
    )
    return user_outcome


async def _serve_signer(inputs: BlindSessionInputs, address: Optional[str]) -> None:
    done = asyncio.Event()

    async def handler(transport: FrameTransport) -> None:
        try:
            await run_blind_session(transport, SessionRole.SIGNER, inputs)
        finally:
            done.set()

    server = await serve_tcp(handler, address, transcript=TranscriptLog("signer"))
    async with server:
        await done.wait()


async def _connect_user(inputs: BlindSessionInputs, address: Optional[str]) -> BlindSessionOutcome:
    transport = await open_tcp(address, name="user", transcript=TranscriptLog("user"))
    try:
        return await run_blind_session(transport, SessionRole.USER, inputs)
    finally:
        await transport.close()


def _write_signature(params: IbbsParams, outcome: BlindSessionOutcome, out: str) -> None:
    codec = WireCodec(params.action, params.n)
    Path(out).write_bytes(codec.encode_signature_file(outcome.signature, params.mode))
    print(f"signature: {out} ({outcome.attempts} attempt(s))")


def cmd_sign(args: argparse.Namespace) -> int:
    params = read_model_file(args.params, MsgType.PARAMS, IbbsParams)
    backend = _backend_for(params)
    transport = args.transport or config.get("wire.transport", "pipe")
    role = SessionRole(args.role)
    rng = _rng(args.seed)

    if transport == "pipe":
        # both endpoints in this process
        keys = read_model_file(args.usk, MsgType.USK, IbbsUserKeys)
        signer = BlindSessionInputs(backend=backend, params=params, rng=rng, keys=keys)
        user = BlindSessionInputs(backend=backend, params=params, rng=_rng(None if args.seed is None else args.seed + 1),
                                  pk=keys.pk, identity=_identity(args), message=_read_message(args.message_file))
        outcome = asyncio.run(_sign_pipe(signer, user))
        _write_signature(params, outcome, args.out)
        return ExitCode.OK

    if role == SessionRole.SIGNER:
        keys = read_model_file(args.usk, MsgType.USK, IbbsUserKeys)
        inputs = BlindSessionInputs(backend=backend, params=params, rng=rng, keys=keys)
        asyncio.run(_serve_signer(inputs, args.address))
        return ExitCode.OK

    pk = read_model_file(args.upk, MsgType.UPK, IbbsPublicKey)
    inputs = BlindSessionInputs(backend=backend, params=params, rng=rng, pk=pk,
                                identity=_identity(args), message=_read_message(args.message_file))
    outcome = asyncio.run(_connect_user(inputs, args.address))
    _write_signature(params, outcome, args.out)
    return ExitCode.OK


def _identity(args: argparse.Namespace) -> bytes:
    if not args.identity:
        raise UsageError("--id is required for the user role")
    return args.identity.encode("utf-8")


def cmd_verify(args: argparse.Namespace) -> int:
    params = read_model_file(args.params, MsgType.PARAMS, IbbsParams)
    pk = read_model_file(args.upk, MsgType.UPK, IbbsPublicKey)
    codec = WireCodec(params.action, params.n)
    mode, payload = codec.split_signature_file(Path(args.sig).read_bytes())
    if mode != params.mode:
        raise VerificationFailedError(f"signature made in {mode.value} mode, parameters are {params.mode.value}")
    # a well-framed signature with out-of-range entries is a forgery, not a decode fault
    try:
        sig = codec.parse_signature_payload(payload)
    except WireDecodeError as e:
        ibbs_logger.log_security_event("verification_failed", f"signature {args.sig} has invalid entries: {e}",
                                       "high")
        raise VerificationFailedError(f"signature entries out of range: {e}") from e
    message = Path(args.message_file).read_bytes()
    if not ibbs_verify(_backend_for(params), params, pk, args.identity.encode("utf-8"), sig, message):
        ibbs_logger.log_security_event("verification_failed", f"signature {args.sig} rejected", "high")
        raise VerificationFailedError("signature does not verify")
    print("signature valid")
    return ExitCode.OK


def cmd_bench(args: argparse.Namespace) -> int:
    backend = BackendFactory.from_config(args.backend, 1)
    generator = ReportGenerator()
    tables = generator.bench(
        backend,
        levels=args.levels or config.get("bench.levels", [80, 100, 128, 192, 256]),
        n_values=args.n_values or config.get("bench.count_n", [4, 16]),
        repeats=args.repeats,
        convention=args.convention,
    )
    print(generator.render_text(tables), end="")
    if args.format != "text":
        print(f"report: {generator.write(tables, args.format)}")
    return ExitCode.OK


async def _demo(args: argparse.Namespace) -> Tuple[BlindSessionOutcome, IbbsParams, IbbsUserKeys,
                                                   List[TranscriptLog], ActionBackend]:
    backend = BackendFactory.from_config(args.backend, args.n)
    rng = _rng(args.seed)
    params, msk = ibbs_setup(backend, rng, mode=args.mode, strict=False if args.relaxed else None)
    identity = args.identity.encode("utf-8")
    keys = ibbs_extract(backend, params, msk, identity, rng)

    signer_end, user_end = pipe_pair()
    signer = BlindSessionInputs(backend=backend, params=params, rng=rng, keys=keys)
    user = BlindSessionInputs(backend=backend, params=params, rng=_rng(None if args.seed is None else args.seed + 1),
                              pk=keys.pk, identity=identity, message=args.message.encode("utf-8"))
    _, outcome = await asyncio.gather(
        run_blind_session(signer_end, SessionRole.SIGNER, signer),
        run_blind_session(user_end, SessionRole.USER, user),
    )
    return outcome, params, keys, [signer_end.transcript, user_end.transcript], backend


def cmd_demo(args: argparse.Namespace) -> int:
    outcome, params, keys, transcripts, backend = asyncio.run(_demo(args))
    valid = ibbs_verify(backend, params, keys.pk, args.identity.encode("utf-8"),
                        outcome.signature, args.message.encode("utf-8"))
    print(f"backend={backend.kind.value} N={backend.N} n={params.n} mode={params.mode.value}")
    if params.mode == IbbsMode.OTTER:
        print("identity binding: KGC-issued public key (otter mode)")
    print(f"attempts={outcome.attempts} verified={valid}")
    if args.transcript:
        path = Path(args.transcript)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            for transcript in transcripts:
                for entry in transcript.entries:
                    handle.write(json.dumps(entry.model_dump()) + "\n")
        print(f"transcript: {path}")
    if not valid:
        raise VerificationFailedError("demo signature does not verify")
    return ExitCode.OK


async def _id_demo(args: argparse.Namespace) -> bool:
    backend = BackendFactory.from_config(args.backend, args.n)
    rng = _rng(args.seed)
    params, s = ibid_setup(backend, rng, mode=args.mode, strict=False if args.relaxed else None)
    identity = args.identity.encode("utf-8")
    usk = ibid_extract(backend, params, s, identity, rng)

    if args.socketpair:
        prover_end, verifier_end = await socketpair_transports()
    else:
        prover_end, verifier_end = pipe_pair(("prover", "verifier"))
    prover = IbidSessionInputs(backend=backend, params=params, rng=rng, usk=usk, identity=identity)
    verifier = IbidSessionInputs(backend=backend, params=params, rng=_rng(None if args.seed is None else args.seed + 1),
                                 identity=identity)
    try:
        _, accepted = await asyncio.gather(
            run_ibid_session(prover_end, SessionRole.PROVER, prover),
            run_ibid_session(verifier_end, SessionRole.VERIFIER, verifier),
        )
    finally:
        await prover_end.close()
        await verifier_end.close()
    print(f"mode={params.mode.value} n={len(params.E)} accepted={accepted}")
    return accepted


def cmd_id_demo(args: argparse.Namespace) -> int:
    if not asyncio.run(_id_demo(args)):
        raise VerificationFailedError("identification rejected")
    return ExitCode.OK


COMMANDS = {
    "setup": cmd_setup,
    "extract": cmd_extract,
    "sign": cmd_sign,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "demo": cmd_demo,
    "id-demo": cmd_id_demo,
}


def cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            ibbs_logger.set_log_level(args.log_level)
        return COMMANDS[args.command](args)
    except SystemExit as e:
        return int(e.code or 0)
    except IbbsError as e:
        log.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        log.error(f"I/O error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.FILE_IO
    except Exception as e:
        log.exception(f"Unexpected error: {e}")
        return ExitCode.UNEXPECTED
