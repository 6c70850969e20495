"""Ordered, reliable frame transports: in-process pipes, TCP and socket pairs."""

import asyncio
import socket
from abc import ABC, abstractmethod
from typing import Awaitable, Callable, Optional, Tuple

from loguru import logger

from ..utils.config import config
from ..utils.errors import ProtocolError, RemoteError, TransportError, TransportTimeoutError
from .codec import HEADER, Frame, MsgType, decode_error, decode_frame, decode_header, encode_frame
from .transcript import RECEIVED, SENT, TranscriptLog


class FrameTransport(ABC):
    """Frame-level transport over an ordered byte stream."""

    def __init__(self, name: str, transcript: Optional[TranscriptLog] = None,
                 recv_timeout: Optional[float] = None):
        self.name = name
        self.transcript = transcript
        if recv_timeout is None:
            recv_timeout = config.get("wire.recv_timeout", 30.0)
        self.recv_timeout = recv_timeout
        self.stats = {"frames_sent": 0, "frames_received": 0, "bytes_sent": 0, "bytes_received": 0}

    @abstractmethod
    async def send_bytes(self, data: bytes) -> None:
        """Write one encoded frame."""

    @abstractmethod
    async def recv_bytes(self) -> bytes:
        """Read one encoded frame (header and payload)."""

    async def close(self) -> None:
        pass

    async def send_frame(self, frame: Frame) -> None:
        data = encode_frame(frame)
        await self.send_bytes(data)
        self.stats["frames_sent"] += 1
        self.stats["bytes_sent"] += len(data)
        if self.transcript is not None:
            self.transcript.record(SENT, frame)

    async def recv_frame(self) -> Frame:
        """Next frame; an ERROR frame from the peer is raised as RemoteError.

        Raises:
            TransportTimeoutError: If nothing arrives within ``recv_timeout``
            WireDecodeError: If the frame is malformed
            RemoteError: If the peer sent an ERROR frame
        """
        try:
            data = await asyncio.wait_for(self.recv_bytes(), timeout=self.recv_timeout)
        except asyncio.TimeoutError:
            raise TransportTimeoutError(f"{self.name}: no frame within {self.recv_timeout}s") from None
        frame = decode_frame(data)
        self.stats["frames_received"] += 1
        self.stats["bytes_received"] += len(data)
        if self.transcript is not None:
            self.transcript.record(RECEIVED, frame)
        if frame.msg_type == MsgType.ERROR:
            code, text = decode_error(frame)
            raise RemoteError(code, text)
        return frame

    async def expect(self, *msg_types: MsgType) -> Frame:
        """Next frame, which must have one of the given types."""
        frame = await self.recv_frame()
        if frame.msg_type not in msg_types:
            expected = "/".join(t.name for t in msg_types)
            raise ProtocolError(f"{self.name}: expected {expected}, got {frame.msg_type.name}")
        return frame


class QueueTransport(FrameTransport):
    """One end of an in-process pipe."""

    def __init__(self, name: str, inbox: "asyncio.Queue[Optional[bytes]]",
                 outbox: "asyncio.Queue[Optional[bytes]]", **kwargs):
        super().__init__(name, **kwargs)
        self.inbox = inbox
        self.outbox = outbox
        self.closed = False

    async def send_bytes(self, data: bytes) -> None:
        if self.closed:
            raise TransportError(f"{self.name}: pipe closed")
        await self.outbox.put(bytes(data))

    async def recv_bytes(self) -> bytes:
        data = await self.inbox.get()
        if data is None:
            raise TransportError(f"{self.name}: peer closed the pipe")
        return data

    async def close(self) -> None:
        if not self.closed:
            self.closed = True
            await self.outbox.put(None)


def pipe_pair(names: Tuple[str, str] = ("signer", "user"), transcripts: bool = True,
              **kwargs) -> Tuple[QueueTransport, QueueTransport]:
    """Two connected in-process endpoints."""
    a_to_b: "asyncio.Queue[Optional[bytes]]" = asyncio.Queue()
    b_to_a: "asyncio.Queue[Optional[bytes]]" = asyncio.Queue()
    a = QueueTransport(names[0], inbox=b_to_a, outbox=a_to_b,
                       transcript=TranscriptLog(names[0]) if transcripts else None, **kwargs)
    b = QueueTransport(names[1], inbox=a_to_b, outbox=b_to_a,
                       transcript=TranscriptLog(names[1]) if transcripts else None, **kwargs)
    return a, b


class StreamTransport(FrameTransport):
    """Frames over an asyncio stream pair (TCP or a socket pair)."""

    def __init__(self, name: str, reader: asyncio.StreamReader, writer: asyncio.StreamWriter, **kwargs):
        super().__init__(name, **kwargs)
        self.reader = reader
        self.writer = writer

    async def send_bytes(self, data: bytes) -> None:
        try:
            self.writer.write(data)
            await self.writer.drain()
        except (ConnectionError, OSError) as e:
            raise TransportError(f"{self.name}: send failed: {e}") from e

    async def recv_bytes(self) -> bytes:
        try:
            header = await self.reader.readexactly(HEADER.size)
            _, length = decode_header(header)
            payload = await self.reader.readexactly(length)
        except asyncio.IncompleteReadError as e:
            raise TransportError(f"{self.name}: stream closed after {len(e.partial)} byte(s)") from e
        except (ConnectionError, OSError) as e:
            raise TransportError(f"{self.name}: receive failed: {e}") from e
        return header + payload

    async def close(self) -> None:
        self.writer.close()
        try:
            await self.writer.wait_closed()
        except (ConnectionError, OSError):
            pass


def parse_address(address: str) -> Tuple[str, int]:
    """'host:port' -> (host, port)."""
    host, sep, port = address.rpartition(":")
    if not sep or not port.isdigit():
        raise TransportError(f"address '{address}' is not host:port")
    return host or "127.0.0.1", int(port)


async def open_tcp(address: Optional[str] = None, name: str = "client", **kwargs) -> StreamTransport:
    host, port = parse_address(address or config.default_address())
    try:
        reader, writer = await asyncio.open_connection(host, port)
    except OSError as e:
        raise TransportError(f"cannot connect to {host}:{port}: {e}") from e
    logger.info(f"Connected to {host}:{port}")
    return StreamTransport(name, reader, writer, **kwargs)


async def serve_tcp(handler: Callable[[StreamTransport], Awaitable[None]],
                    address: Optional[str] = None, name: str = "server",
                    **kwargs) -> asyncio.AbstractServer:
    """Start a TCP server running ``handler`` once per connection."""
    host, port = parse_address(address or config.default_address())

    async def _on_connect(reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        peer = writer.get_extra_info("peername")
        transport = StreamTransport(f"{name}:{peer}", reader, writer, **kwargs)
        try:
            await handler(transport)
        except Exception as e:
            logger.error(f"Session with {peer} failed: {e}")
        finally:
            await transport.close()

    server = await asyncio.start_server(_on_connect, host, port)
    logger.info(f"Listening on {host}:{port}")
    return server


async def socketpair_transports(names: Tuple[str, str] = ("prover", "verifier"),
                                **kwargs) -> Tuple[StreamTransport, StreamTransport]:
    """Two stream transports over a connected socket pair."""
    left, right = socket.socketpair()
    r1, w1 = await asyncio.open_connection(sock=left)
    r2, w2 = await asyncio.open_connection(sock=right)
    return (StreamTransport(names[0], r1, w1, transcript=TranscriptLog(names[0]), **kwargs),
            StreamTransport(names[1], r2, w2, transcript=TranscriptLog(names[1]), **kwargs))
