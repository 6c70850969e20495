"""Exception hierarchy shared by the library and the CLI."""

from typing import Optional, Sequence, Tuple


class ExitCode:
    """Process exit codes, one per error class."""
    OK = 0
    UNEXPECTED = 1
    USAGE = 2
    FILE_IO = 3
    VERIFICATION_FAILED = 4
    PROTOCOL = 5
    RETRY_LIMIT = 6
    DECODE = 7
    PARAMETER = 8


class IbbsError(Exception):
    """Base class for all toolkit errors."""
    exit_code = ExitCode.UNEXPECTED


class ParameterError(IbbsError, ValueError):
    """Invalid parameters or backend configuration."""
    exit_code = ExitCode.PARAMETER


class CurveNotInOrbitError(ParameterError):
    """Curve is not in the orbit of the base curve."""


class IsogenyError(IbbsError):
    """No kernel point of the required order was found."""


class OrbitBoundError(ParameterError):
    """Orbit enumeration exceeded the configured bound."""


class ExceptionalSetError(ParameterError):
    """An (super-)exceptional set could not be produced."""


class LengthMismatchError(IbbsError, ValueError):
    """Vector arguments have inconsistent lengths."""
    exit_code = ExitCode.PARAMETER


class InvalidSignError(IbbsError, ValueError):
    """A sign entry outside {-1, 1}."""
    exit_code = ExitCode.PARAMETER


class SessionStateError(IbbsError):
    """A one-shot session was reused or driven out of order."""
    exit_code = ExitCode.PROTOCOL


class ZeroChallengeError(IbbsError):
    """A zero challenge entry leaves the blinding undetermined."""


class ExtractionError(IbbsError, ValueError):
    """Transcripts do not allow witness extraction."""


class RetryLimitExceededError(IbbsError):
    """Blind signing did not produce a signature within the retry limit."""
    exit_code = ExitCode.RETRY_LIMIT

    def __init__(self, attempts: int,
                 failures: Optional[Sequence[Tuple[Tuple[int, int], ...]]] = None):
        self.attempts = attempts
        self.failures = list(failures or [])
        super().__init__(f"no signature after {attempts} attempt(s)")


class WireDecodeError(IbbsError, ValueError):
    """Malformed frame or payload."""
    exit_code = ExitCode.DECODE


class ProtocolError(IbbsError):
    """Peer violated the message order or sent an unexpected frame."""
    exit_code = ExitCode.PROTOCOL


class RemoteError(ProtocolError):
    """Peer reported an error frame."""

    def __init__(self, code: int, text: str):
        self.code = code
        self.text = text
        super().__init__(f"remote error {code}: {text}")


class TransportError(IbbsError):
    """The byte stream failed or closed early."""
    exit_code = ExitCode.PROTOCOL


class TransportTimeoutError(TransportError):
    """No frame arrived within the receive timeout."""


class VerificationFailedError(IbbsError):
    """A signature or identification transcript did not verify."""
    exit_code = ExitCode.VERIFICATION_FAILED


class UsageError(IbbsError):
    """Invalid command-line usage."""
    exit_code = ExitCode.USAGE
