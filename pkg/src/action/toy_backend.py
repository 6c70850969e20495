"""Toy backend: Z_N acting on itself by translation."""

from typing import List

from loguru import logger

from ..utils.errors import ParameterError
from ..utils.models import ActionParams, BackendKind, Curve
from .base_backend import ActionBackend


class ToyBackend(ActionBackend):
    """Curves are residues z mod N; act(e, z) = z + e and twist(z) = -z."""

    kind = BackendKind.TOY

    def __init__(self, params: ActionParams):
        if params.backend_kind != BackendKind.TOY:
            raise ParameterError(f"toy backend given {params.backend_kind.value} parameters")
        if params.N is None or params.N < 3 or params.N % 2 == 0:
            raise ParameterError(f"toy modulus must be odd and at least 3, got {params.N}")
        super().__init__(params)
        logger.debug(f"Toy backend ready (N={params.N}, n={params.n})")

    def contains(self, E: Curve) -> bool:
        return isinstance(E, int) and 0 <= E < self.N

    def _shift(self, e: int, E: Curve) -> Curve:
        return (E + e) % self.N

    def _negate(self, E: Curve) -> Curve:
        return (-E) % self.N

    def enumerate_orbit(self) -> List[Curve]:
        return list(range(self.N))

    def gaip_bruteforce(self, E: Curve) -> int:
        return self.require(E)
