"""Abstract group action backend."""

import copy
import random
from abc import ABC, abstractmethod
from typing import List, Sequence, Tuple

from ..utils.errors import (
    CurveNotInOrbitError,
    InvalidSignError,
    LengthMismatchError,
    ParameterError,
)
from ..utils.models import ActionParams, BackendKind, Curve, CurveVec, ExponentVec


class ActionBackend(ABC):
    """Commutative action of a cyclic group Z_N on an orbit of curves.

    Implementations are immutable after construction; every method is a pure
    function of the backend, its arguments and the caller's RNG.
    """

    kind: BackendKind

    def __init__(self, params: ActionParams):
        """Initialize the backend.

        Args:
            params: Backend description; ``N`` must be set by the subclass
                before the first action
        """
        self.params = params

    @property
    def N(self) -> int:
        return self.params.modulus

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def base_curve(self) -> Curve:
        """E0: A = 0 for CSIDH, z = 0 for the toy backend."""
        return 0

    @abstractmethod
    def contains(self, E: Curve) -> bool:
        """Whether E lies in the orbit of E0."""

    @abstractmethod
    def _shift(self, e: int, E: Curve) -> Curve:
        """Apply [g^e] to a curve already known to be in the orbit."""

    @abstractmethod
    def _negate(self, E: Curve) -> Curve:
        """Quadratic twist of an orbit element."""

    @abstractmethod
    def enumerate_orbit(self) -> List[Curve]:
        """Orbit [E0, g*E0, g^2*E0, ...] of length N."""

    def require(self, E: Curve) -> Curve:
        if not self.contains(E):
            raise CurveNotInOrbitError(f"curve {E} is not in the orbit of E0")
        return E

    def act(self, e: int, E: Curve) -> Curve:
        """Group action [g^e] * E.

        Raises:
            CurveNotInOrbitError: If E is not an orbit element
        """
        return self._shift(e % self.N, self.require(E))

    def twist(self, E: Curve) -> Curve:
        """Quadratic twist; twist(act(a, E)) = act(-a, twist(E))."""
        return self._negate(self.require(E))

    def curve_power(self, E: Curve, s: int) -> Curve:
        """E for s = 1, its twist for s = -1."""
        if s == 1:
            return self.require(E)
        if s == -1:
            return self.twist(E)
        raise InvalidSignError(f"curve power sign must be +1 or -1, got {s}")

    def act_vec(self, e: Sequence[int], Es: Sequence[Curve]) -> CurveVec:
        """Componentwise action."""
        if len(e) != len(Es):
            raise LengthMismatchError(f"exponent length {len(e)} != curve length {len(Es)}")
        return tuple(self.act(ei, Ei) for ei, Ei in zip(e, Es))

    def curve_power_vec(self, Es: Sequence[Curve], signs: Sequence[int]) -> CurveVec:
        if len(Es) != len(signs):
            raise LengthMismatchError(f"curve length {len(Es)} != sign length {len(signs)}")
        return tuple(self.curve_power(E, s) for E, s in zip(Es, signs))

    def base_vec(self, n: int) -> CurveVec:
        return (self.base_curve,) * n

    def gaip_bruteforce(self, E: Curve) -> int:
        """The unique a with act(a, E0) = E, by orbit search."""
        for a, candidate in enumerate(self.enumerate_orbit()):
            if candidate == E:
                return a
        raise CurveNotInOrbitError(f"curve {E} is not in the orbit of E0")

    def mt_gaip_bruteforce(self, curves: Sequence[Curve]) -> Tuple[int, int, int]:
        """Multi-target inverse: (i, j, a) with curves[i] = act(a, curves[j]), i != j.

        Every pair of orbit curves is related, so the pair (1, 0) is always a
        solution and is the one returned. The search cost is the discrete logs
        of the inputs, not a pair search.

        Raises:
            ParameterError: With fewer than two curves
            CurveNotInOrbitError: If a curve is outside the orbit
        """
        if len(curves) < 2:
            raise ParameterError("multi-target search needs at least two curves")
        logs = [self.gaip_bruteforce(E) for E in curves]
        return 1, 0, (logs[1] - logs[0]) % self.N

    def sample_exponent(self, rng: random.Random) -> int:
        """Uniform element of Z_N by rejection from the RNG bit stream."""
        bits = (self.N - 1).bit_length()
        while True:
            candidate = rng.getrandbits(bits) if bits else 0
            if candidate < self.N:
                return candidate

    def sample_exponent_vec(self, rng: random.Random, n: int) -> ExponentVec:
        return tuple(self.sample_exponent(rng) for _ in range(n))

    def with_n(self, n: int) -> "ActionBackend":
        """Same backend (shared orbit tables) with a different vector length."""
        clone = copy.copy(self)
        clone.params = self.params.with_n(n)
        return clone

    def describe(self) -> dict:
        return {
            "backend": self.kind.value,
            "p": self.params.p,
            "N": self.N,
            "n": self.n,
            "generator": self.params.generator,
        }
