"""Backend factory for creating group action backends."""

from functools import lru_cache
from typing import Dict, Optional, Type

from ..utils.config import config
from ..utils.errors import ParameterError
from ..utils.models import ActionParams, BackendKind
from .base_backend import ActionBackend
from .csidh_backend import CsidhBackend
from .toy_backend import ToyBackend


class BackendFactory:
    """Factory for creating group action backends."""

    # Registry of available backend classes
    BACKEND_CLASSES: Dict[BackendKind, Type[ActionBackend]] = {
        BackendKind.TOY: ToyBackend,
        BackendKind.CSIDH: CsidhBackend,
    }

    @classmethod
    def create_backend(cls, params: ActionParams) -> ActionBackend:
        """Create a backend for the given parameters.

        Args:
            params: Backend description

        Returns:
            ActionBackend instance

        Raises:
            ParameterError: If the backend kind is not registered
        """
        if params.backend_kind not in cls.BACKEND_CLASSES:
            raise ParameterError(f"Unknown backend: {params.backend_kind}")
        return cls.BACKEND_CLASSES[params.backend_kind](params)

    @classmethod
    def from_config(cls, backend: Optional[str] = None, n: Optional[int] = None) -> ActionBackend:
        """Create a backend from the ``action`` configuration section."""
        try:
            params = config.build_action_params(backend, n)
        except ValueError as e:
            raise ParameterError(f"Unknown backend: {backend}") from e
        return create_backend(params)

    @classmethod
    def get_available_backends(cls) -> list:
        return [kind.value for kind in cls.BACKEND_CLASSES]


@lru_cache(maxsize=8)
def _cached_csidh(p: int, ell_list: tuple, generator: str) -> CsidhBackend:
    return CsidhBackend(ActionParams(backend_kind=BackendKind.CSIDH, p=p,
                                     ell_list=ell_list, n=1, generator=generator))


def create_backend(params: ActionParams) -> ActionBackend:
    """Create a backend, reusing enumerated CSIDH orbits across vector lengths."""
    if params.backend_kind == BackendKind.CSIDH:
        base = _cached_csidh(params.p, tuple(params.ell_list), params.generator)
        if params.N is not None and params.N != base.N:
            raise ParameterError(f"configured N={params.N} but the orbit has {base.N} curves")
        return base.with_n(params.n)
    return BackendFactory.create_backend(params)
