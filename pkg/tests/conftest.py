"""Shared fixtures."""

import random
import sys
from pathlib import Path
from typing import Iterable

import pytest

# Add repository root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.action.backend_factory import create_backend
from src.action.toy_backend import ToyBackend
from src.utils.models import ActionParams, BackendKind

CSIDH_P = 419
CSIDH_ELLS = (3, 5, 7)


class ScriptedRandom(random.Random):
    """Random whose getrandbits replays a fixed script."""

    def __new__(cls, script: Iterable[int]):
        # random.Random.__new__ would try to seed from the script list
        return super().__new__(cls)

    def __init__(self, script: Iterable[int]):
        super().__init__(0)
        self.script = list(script)

    def getrandbits(self, k: int) -> int:
        if not self.script:
            raise AssertionError("random script exhausted")
        value = self.script.pop(0)
        assert 0 <= value < (1 << k), f"scripted {value} does not fit in {k} bits"
        return value


def make_toy(N: int = 101, n: int = 4) -> ToyBackend:
    return ToyBackend(ActionParams(backend_kind=BackendKind.TOY, N=N, n=n))


def make_csidh(n: int = 4):
    return create_backend(ActionParams(backend_kind=BackendKind.CSIDH, p=CSIDH_P,
                                       ell_list=CSIDH_ELLS, n=n, generator="ell3-plus"))


@pytest.fixture
def toy_backend() -> ToyBackend:
    return make_toy()


@pytest.fixture
def csidh_backend():
    return make_csidh()


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)
