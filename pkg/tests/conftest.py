import math

import numpy as np
import pytest

from app.config.settings import get_settings
from app.models.phasepoly import MixedPhasePolynomial, PhaseGadget
from app.models.topology import named_topology
from app.service.benchmark_service import BenchmarkService

FIG1_TEXT = "qubits 3\nZ 111 0.7853981633974483\nX 011 1.5707963267948966\n"


@pytest.fixture(autouse=True)
def _fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def line3():
    return named_topology("line-3")


@pytest.fixture
def valencia():
    return named_topology("valencia")


@pytest.fixture
def yorktown():
    return named_topology("yorktown")


@pytest.fixture
def fig1():
    """Z(111, π/4) 다음 X(011, π/2)"""
    return MixedPhasePolynomial(
        3,
        (PhaseGadget.z("111", math.pi / 4), PhaseGadget.x("011", math.pi / 2)),
    )


@pytest.fixture
def random_polys():
    """(n, m, 개수) → 결정적인 무작위 다항식 목록"""
    def make(n: int, m: int, count: int, seed: int = 0):
        return [BenchmarkService.random_circuit(n, m, seed * 1000 + i) for i in range(count)]
    return make
