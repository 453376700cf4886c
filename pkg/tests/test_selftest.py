import random

import pytest  # type: ignore

from hermgenus import selftest
from hermgenus.exceptions import PreconditionError
from hermgenus.field import make_field
from hermgenus.lattice import scale
from hermgenus.parse import read_lattice
from hermgenus.selftest import (
    diagonal_lattice,
    example_lattice,
    random_lattice,
    run_suites,
)

from .conftest import data_path


def test_example_lattice_matches_data_file():
    assert example_lattice() == read_lattice(data_path("example.json"))


def test_diagonal_lattice(f17):
    L = diagonal_lattice(f17, [1, 17])
    assert L.rank == 2
    assert scale(L) == scale(diagonal_lattice(f17, [1]))


def test_random_lattice_is_seeded(config):
    field = make_field(-5)
    first = random_lattice(random.Random(config.seed), field, 3)
    second = random_lattice(random.Random(config.seed), field, 3)
    assert first == second
    assert first.rank == 3


def test_registry():
    assert sorted(selftest.suites) == [
        "class_group_oracle",
        "det_group_oracle",
        "group_sanity",
        "neighbour_contract",
        "rho_map",
        "scale_norm_chain",
    ]


def test_rho_map(config):
    results = run_suites(config, ["rho_map"])
    assert results["rho_map"]["passed"]
    assert results["rho_map"]["lattices"] == 4 * len(selftest.ORACLE_CASES)


def test_failures_are_collected(config, monkeypatch, caplog):
    def failing(config):
        raise PreconditionError("no isotropic prime")

    monkeypatch.setitem(selftest.suites, "rho_map", failing)
    results = run_suites(config, ["rho_map"])
    assert not results["rho_map"]["passed"]
    assert "no isotropic prime" in results["rho_map"]["error"]
    assert "Suite rho_map failed" in caplog.text


def test_other_errors_propagate(config, monkeypatch):
    def broken(config):
        raise KeyError("bug")

    monkeypatch.setitem(selftest.suites, "rho_map", broken)
    with pytest.raises(KeyError):
        run_suites(config, ["rho_map"])


@pytest.mark.slow
@pytest.mark.parametrize("name", [
    "class_group_oracle",
    "scale_norm_chain",
    "det_group_oracle",
    "neighbour_contract",
    "group_sanity",
])
def test_suite_passes(config, name):
    results = run_suites(config, [name])
    assert results[name]["passed"], results[name]
