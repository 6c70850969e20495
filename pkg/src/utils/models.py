"""Shared data models for backends, hashes and protocols."""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

# Curves are integers: the Montgomery coefficient A in [0, p) for the CSIDH
# backend, a residue in [0, N) for the toy backend.
Curve = int
CurveVec = Tuple[int, ...]
ExponentVec = Tuple[int, ...]
SignVec = Tuple[int, ...]
TernaryVec = Tuple[int, ...]


class BackendKind(str, Enum):
    """Group action backends."""
    TOY = "toy"
    CSIDH = "csidh"


class IbidMode(str, Enum):
    """Identification challenge alphabets."""
    PAPER = "paper"
    BINARY = "binary"


class IbbsMode(str, Enum):
    """Blind signature variants."""
    PAPER = "paper"
    OTTER = "otter"


class SessionRole(str, Enum):
    """Endpoint roles for interactive sessions."""
    SIGNER = "signer"
    USER = "user"
    PROVER = "prover"
    VERIFIER = "verifier"


class SessionPhase(str, Enum):
    """Phase markers for one-shot state machines."""
    OPEN = "open"
    COMMITTED = "committed"
    CHALLENGED = "challenged"
    RESPONDED = "responded"
    DECIDED = "decided"
    CONSUMED = "consumed"


class ActionParams(BaseModel):
    """Backend description.

    ``N`` is the class number for the CSIDH backend (filled in by orbit
    enumeration when not supplied) and the modulus for the toy backend.
    """
    model_config = ConfigDict(frozen=True)

    backend_kind: BackendKind
    p: Optional[int] = None
    ell_list: Tuple[int, ...] = ()
    N: Optional[int] = Field(default=None, gt=0)
    n: int = Field(default=16, ge=1)
    generator: str = "shift"

    @property
    def modulus(self) -> int:
        if self.N is None:
            raise ValueError("class number not established")
        return self.N

    @property
    def exponent_bits(self) -> int:
        return max(1, (self.modulus - 1).bit_length())

    @property
    def exponent_bytes(self) -> int:
        return (self.exponent_bits + 7) // 8

    @property
    def curve_bits(self) -> int:
        bound = self.p if self.backend_kind == BackendKind.CSIDH else self.modulus
        return max(1, (bound - 1).bit_length())

    @property
    def curve_bytes(self) -> int:
        return (self.curve_bits + 7) // 8

    def with_n(self, n: int) -> "ActionParams":
        return self.model_copy(update={"n": n})


class ExceptionalSet(BaseModel):
    """Set c_1 = 1, ..., c_n with invertible differences (and sums if super)."""
    model_config = ConfigDict(frozen=True)

    values: Tuple[int, ...]
    modulus: int = Field(gt=1)
    super_exceptional: bool = True
    verified: bool = True

    @property
    def n(self) -> int:
        return len(self.values)
