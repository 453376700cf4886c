import json
import logging
import os
import random
import typing as t

import pytest  # type: ignore

from hermgenus.config import DEFAULT_SEED, HermGenusConfig, parse_config
from hermgenus.field import QuadField, make_field
from hermgenus.ideal import PrimeIdeal, prime_decomposition
from hermgenus.lattice import HermLattice, build_H_lattice
from hermgenus.selftest import diagonal_lattice, example_lattice


logger = logging.getLogger(__name__)

HERE = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(HERE, "data")


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


@pytest.fixture
def d(request) -> int:
    return request.param if hasattr(request, "param") else -17


@pytest.fixture
def field(d: int) -> QuadField:
    return make_field(d)


@pytest.fixture
def f17() -> QuadField:
    return make_field(-17)


@pytest.fixture
def P3(f17: QuadField) -> PrimeIdeal:
    return prime_decomposition(f17, 3)[0]


@pytest.fixture
def example() -> HermLattice:
    return example_lattice()


@pytest.fixture
def example_doc() -> dict:
    with open(data_path("example.json")) as fh:
        return json.load(fh)


@pytest.fixture
def identity2(field: QuadField) -> HermLattice:
    return diagonal_lattice(field, [1, 1])


@pytest.fixture
def h_lattice(request, field: QuadField) -> HermLattice:
    """``(p, i)`` parameters build H(i) at the first prime above p."""
    p, i = request.param if hasattr(request, "param") else (17, 1)
    prime = prime_decomposition(field, p)[0]
    return build_H_lattice(field, prime, i)


@pytest.fixture
def rng(request) -> random.Random:
    seed = request.param if hasattr(request, "param") else DEFAULT_SEED
    return random.Random(seed)


@pytest.fixture
def config() -> HermGenusConfig:
    return parse_config()


def lattice_key(lattices: t.Iterable[HermLattice]) -> t.List[tuple]:
    return sorted(L.key() for L in lattices)
