import copy
import json

import pytest  # type: ignore

from hermgenus.exceptions import InputError, LatticeFileError
from hermgenus.ideal import prime_decomposition
from hermgenus.lattice import HermLattice
from hermgenus.parse import (
    dump_lattice,
    parse_lattice,
    parse_lattice_file,
    read_lattice,
    validate,
    write_lattice,
)

from .conftest import data_path


def neighbour_lattice(example):
    f17 = example.field
    P3 = prime_decomposition(f17, 3)[0]
    pb = [
        (P3.ideal, [f17.one, f17.zero]),
        (P3.conj().ideal.inverse(), [f17.zero, f17.one]),
    ]
    return HermLattice(example.space, pb)


def test_parse_example(example, example_doc):
    assert parse_lattice(example_doc) == example
    assert read_lattice(data_path("example.json")) == example


def test_parse_rank_one():
    L = read_lattice(data_path("rank_one.json"))
    assert L.rank == 1
    assert L.field.d == -5


def test_round_trip_with_pseudo_basis(example, tmp_path):
    L1 = neighbour_lattice(example)
    assert parse_lattice(L1.asdict()) == L1
    assert parse_lattice_file(dump_lattice(L1)) == L1
    path = str(tmp_path / "neighbour.json")
    write_lattice(L1, path)
    assert read_lattice(path) == L1


def test_dump_is_sorted(example):
    text = dump_lattice(example)
    assert text == json.dumps(json.loads(text), sort_keys=True, indent=2)


def test_ideal_by_generators(example):
    L1 = neighbour_lattice(example)
    doc = L1.asdict()
    for pair in doc["pseudo_basis"]:
        del pair["ideal"]["hnf"]
    assert parse_lattice(doc) == L1


def test_bad_gram_file():
    with pytest.raises(LatticeFileError) as info:
        read_lattice(data_path("bad_gram.json"))
    assert info.value.field == "gram"
    assert "hermitian" in info.value.reason


def test_missing_file(tmp_path):
    with pytest.raises(InputError) as info:
        read_lattice(str(tmp_path / "missing.json"))
    assert not isinstance(info.value, LatticeFileError)


def test_syntax_error():
    with pytest.raises(LatticeFileError) as info:
        parse_lattice_file('{"d": -17,\n "gram": [}')
    assert info.value.field == "<document>"
    assert "line 2" in info.value.reason


def mutate(doc, **changes):
    doc = copy.deepcopy(doc)
    for key, value in changes.items():
        if value is None:
            doc.pop(key, None)
        else:
            doc[key] = value
    return doc


@pytest.mark.parametrize("changes, field", [
    ({"d": None}, "d"),
    ({"gram": None}, "gram"),
    ({"d": -4}, "d"),
    ({"d": "-17"}, "d"),
    ({"d": True}, "d"),
    ({"rank": 3}, "rank"),
    ({"gram": []}, "gram"),
    ({"gram": [[["1", "0"]], [["0", "0"], ["1", "0"]]]}, "gram[0]"),
    ({"gram": [[["1/0", "0"], ["0", "0"]], [["0", "0"], ["1", "0"]]]},
     "gram[0]"),
    ({"gram": [[["1", "0"], ["1", "0"]], [["1", "0"], ["1", "0"]]]}, "gram"),
    ({"pseudo_basis": []}, "pseudo_basis"),
    ({"pseudo_basis": [1, 2]}, "pseudo_basis[0]"),
])
def test_schema_errors(example_doc, changes, field):
    with pytest.raises(LatticeFileError) as info:
        parse_lattice(mutate(example_doc, **changes))
    assert info.value.field == field


def test_not_an_object():
    with pytest.raises(LatticeFileError) as info:
        parse_lattice([1, 2])
    assert info.value.field == "<document>"


def pair(ideal, vector):
    return {"ideal": ideal, "vector": vector}


ONE = {"den": 1, "hnf": [[1, 0], [0, 1]]}
E1 = [["1", "0"], ["0", "0"]]
E2 = [["0", "0"], ["1", "0"]]


@pytest.mark.parametrize("pseudo_basis, field", [
    ([pair({"den": 1, "hnf": [[2, 0], [0, 1]]}, E1), pair(ONE, E2)],
     "pseudo_basis[0].ideal"),
    ([pair({"den": 1, "hnf": [[0, 0], [0, 1]]}, E1), pair(ONE, E2)],
     "pseudo_basis[0].ideal"),
    ([pair({"den": 1}, E1), pair(ONE, E2)], "pseudo_basis[0].ideal"),
    ([pair(ONE, E1), pair(ONE, [["1", "0"]])], "pseudo_basis[1].vector"),
    ([pair(ONE, E1), pair(ONE, E1)], "pseudo_basis"),
])
def test_pseudo_basis_errors(example_doc, pseudo_basis, field):
    doc = mutate(example_doc, pseudo_basis=pseudo_basis)
    with pytest.raises(LatticeFileError) as info:
        parse_lattice(doc)
    assert info.value.field == field


def test_validators(f17):
    assert validate("int", "x", 3) == 3
    assert validate("element", "x", [1, 3], f17) == f17(1, 3)
    assert validate("element", "x", ["1/2", "-3"], f17).to_pair() == ["1/2", "-3"]
    with pytest.raises(LatticeFileError):
        validate("rational", "x", 1.5)
    with pytest.raises(LatticeFileError):
        validate("element", "x", ["1"], f17)
