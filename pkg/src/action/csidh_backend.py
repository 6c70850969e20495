"""CSIDH backend at desk scale: orbit of E0 under repeated Velu steps."""

import random
import re
from math import isqrt
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..utils.config import config
from ..utils.errors import (
    CurveNotInOrbitError,
    InvalidSignError,
    IsogenyError,
    OrbitBoundError,
    ParameterError,
)
from ..utils.models import ActionParams, BackendKind, Curve
from .base_backend import ActionBackend
from .montgomery import (
    PrimeField,
    a24_of,
    curve_rhs,
    is_infinity,
    kernel_multiples,
    ladder,
    velu_codomain,
)

_GENERATOR_TAG = re.compile(r"^ell(\d+)-(plus|minus)$")


def is_prime(value: int) -> bool:
    """Trial division; desk-scale primes only."""
    if value < 2:
        return False
    if value % 2 == 0:
        return value == 2
    for d in range(3, isqrt(value) + 1, 2):
        if value % d == 0:
            return False
    return True


def parse_generator(tag: str) -> Tuple[int, int]:
    """'ell3-plus' -> (3, +1): the ideal (l, pi - 1) for plus, (l, pi + 1) for minus."""
    match = _GENERATOR_TAG.match(tag)
    if not match:
        raise ParameterError(f"unknown generator convention '{tag}'")
    return int(match.group(1)), 1 if match.group(2) == "plus" else -1


class CsidhBackend(ActionBackend):
    """Class group action on supersingular Montgomery curves over F_p.

    The orbit of E0 under the generator is enumerated once at construction;
    act(a, E) is then a rotation of that table. ``velu_step`` stays available
    for direct verification.
    """

    kind = BackendKind.CSIDH

    def __init__(self, params: ActionParams, max_orbit: Optional[int] = None,
                 retry_budget: Optional[int] = None):
        """Initialize the backend and enumerate the orbit.

        Args:
            params: CSIDH parameters; ``N`` is checked against the orbit when given
            max_orbit: Orbit size bound
            retry_budget: Point sampling attempts per Velu step

        Raises:
            ParameterError: If p is not 4 * prod(l_i) - 1, not prime, or N disagrees
            OrbitBoundError: If the orbit does not close within the bound
        """
        if params.backend_kind != BackendKind.CSIDH:
            raise ParameterError(f"csidh backend given {params.backend_kind.value} parameters")
        self._validate_prime(params)

        self.p = params.p
        self.ell_list = tuple(params.ell_list)
        self.field = PrimeField(self.p)
        self.max_orbit = max_orbit or config.get("action.csidh.max_orbit", 1000)
        self.retry_budget = retry_budget or config.get("action.csidh.point_retry_budget", 64)
        self.generator_ell, self.generator_direction = parse_generator(params.generator)
        if self.generator_ell not in self.ell_list:
            raise ParameterError(f"generator degree {self.generator_ell} not in {self.ell_list}")

        orbit = self._walk_orbit()
        if params.N is not None and params.N != len(orbit):
            raise ParameterError(f"configured N={params.N} but the orbit has {len(orbit)} curves")
        if len(orbit) % 2 == 0:
            raise ParameterError(f"class number {len(orbit)} is even")

        super().__init__(params.model_copy(update={"N": len(orbit)}))
        self._orbit: Tuple[Curve, ...] = tuple(orbit)
        self._index: Dict[Curve, int] = {A: i for i, A in enumerate(orbit)}
        logger.info(f"CSIDH backend ready: p={self.p}, N={self.N}, generator {params.generator}")

    @staticmethod
    def _validate_prime(params: ActionParams) -> None:
        if not params.ell_list:
            raise ParameterError("csidh backend needs a list of small primes")
        product = 4
        for ell in params.ell_list:
            if ell < 3 or not is_prime(ell):
                raise ParameterError(f"small prime list entry {ell} is not an odd prime")
            product *= ell
        if len(set(params.ell_list)) != len(params.ell_list):
            raise ParameterError("small primes must be distinct")
        if params.p != product - 1:
            raise ParameterError(f"p={params.p} differs from 4 * prod(l_i) - 1 = {product - 1}")
        if not is_prime(params.p):
            raise ParameterError(f"p={params.p} is not prime")

    def _walk_orbit(self) -> List[Curve]:
        orbit = [0]
        seen = {0}
        current = 0
        while True:
            current = self.velu_step(current, self.generator_ell, self.generator_direction)
            if current == 0:
                return orbit
            if current in seen:
                raise OrbitBoundError(f"walk re-entered the orbit at A={current} without reaching E0")
            if len(orbit) >= self.max_orbit:
                raise OrbitBoundError(f"orbit exceeds bound {self.max_orbit}")
            orbit.append(current)
            seen.add(current)

    def kernel_points(self, A: int, ell: int, direction: int,
                      rng: Optional[random.Random] = None,
                      field: Optional[PrimeField] = None) -> List[int]:
        """x-coordinates of the (l-1)/2 kernel multiples for the ideal (l, pi - direction).

        Points with rational y (Legendre symbol +1) give direction +1; points on the
        twist give direction -1. A random point is multiplied by (p + 1) / l and
        retried on the identity.

        Raises:
            ParameterError: If l is not one of the small primes
            InvalidSignError: If direction is not +1 or -1
            IsogenyError: If the retry budget is exhausted
        """
        if ell not in self.ell_list:
            raise ParameterError(f"degree {ell} not in {self.ell_list}")
        if direction not in (1, -1):
            raise InvalidSignError(f"direction must be +1 or -1, got {direction}")
        F = field if field is not None else self.field
        A %= self.p
        if F.sqr(A) == 4:
            raise CurveNotInOrbitError(f"A={A} gives a singular curve")

        rng = rng or random.Random(A * 1009 + ell * 7 + direction)
        a24 = a24_of(F, A)
        cofactor = (self.p + 1) // ell
        for _ in range(self.retry_budget):
            x = rng.randrange(1, self.p)
            if F.legendre(curve_rhs(F, A, x)) != direction:
                continue
            Q = ladder(F, cofactor, x, a24)
            if is_infinity(Q, self.p):
                continue
            return kernel_multiples(F, Q, a24, (ell - 1) // 2)
        raise IsogenyError(f"no point of order {ell} found on A={A} after {self.retry_budget} tries")

    def velu_step(self, E: Curve, ell: int, direction: int,
                  rng: Optional[random.Random] = None) -> Curve:
        """Codomain of the l-isogeny for the ideal (l, pi - direction)."""
        kernel_xs = self.kernel_points(E, ell, direction, rng)
        return velu_codomain(self.field, E % self.p, kernel_xs)

    def is_supersingular(self, A: Curve, trials: int = 8,
                         rng: Optional[random.Random] = None) -> bool:
        """[p + 1] P = infinity for random points on the curve and its twist."""
        F = self.field
        rng = rng or random.Random(A)
        a24 = a24_of(F, A % self.p)
        checked = 0
        while checked < trials:
            x = rng.randrange(1, self.p)
            if curve_rhs(F, A, x) == 0:
                continue
            if not is_infinity(ladder(F, self.p + 1, x, a24), self.p):
                return False
            checked += 1
        return True

    def isogeny_costs(self) -> Dict[int, Dict[str, int]]:
        """Field operations per Velu step from E0, split into sampling and codomain.

        Each stage counts on a private field, so the backend's own counters are
        left untouched.

        Returns:
            Mapping l -> {"sampling": ops, "codomain": ops}
        """
        costs = {}
        for ell in self.ell_list:
            sampling_field, codomain_field = PrimeField(self.p), PrimeField(self.p)
            kernel_xs = self.kernel_points(0, ell, 1, field=sampling_field)
            velu_codomain(codomain_field, 0, kernel_xs)
            costs[ell] = {"sampling": sum(sampling_field.snapshot().values()),
                          "codomain": sum(codomain_field.snapshot().values())}
        return costs

    def contains(self, E: Curve) -> bool:
        return E in self._index

    def _shift(self, e: int, E: Curve) -> Curve:
        return self._orbit[(self._index[E] + e) % self.N]

    def _negate(self, E: Curve) -> Curve:
        twisted = (-E) % self.p
        if twisted not in self._index:
            raise CurveNotInOrbitError(f"twist of A={E} is not in the orbit")
        return twisted

    def enumerate_orbit(self) -> List[Curve]:
        return list(self._orbit)

    def gaip_bruteforce(self, E: Curve) -> int:
        return self._index[self.require(E)]
