import pytest  # type: ignore

from hermgenus import oracle
from hermgenus.exceptions import PreconditionError, VerificationError
from hermgenus.ideal import prime_decomposition
from hermgenus.lattice import apply_map, build_H_lattice, is_unitary
from hermgenus.local import DetGroupLabel, det_group
from hermgenus.oracle import mod_PN_det_oracle, quasi_reflection_witness
from hermgenus.selftest import diagonal_lattice


def test_witness_for_diagonal(f17):
    L = diagonal_lattice(f17, [1, 1])
    T = quasi_reflection_witness(L, 17)
    assert T is not None
    assert is_unitary(L.space, T)
    assert apply_map(L, T) == L


def test_no_witness_for_E1(example):
    assert quasi_reflection_witness(example, 17) is None
    assert quasi_reflection_witness(example, 2) is None


def test_oracle_preconditions(f17, example):
    with pytest.raises(PreconditionError):
        mod_PN_det_oracle(diagonal_lattice(f17, [1]), 17)
    with pytest.raises(PreconditionError):
        mod_PN_det_oracle(example, 3)
    with pytest.raises(PreconditionError):
        mod_PN_det_oracle(example, 17, depth=2)
    with pytest.raises(PreconditionError):
        quasi_reflection_witness(example, 5)


def test_oracle_finds_E0_by_witness(f17):
    found = mod_PN_det_oracle(diagonal_lattice(f17, [1, 1]), 17)
    assert list(found) == [DetGroupLabel.E0, DetGroupLabel.E1]


def test_oracle_rejects_unmatched_witness(f17, monkeypatch):
    P17 = prime_decomposition(f17, 17)[0]
    H = build_H_lattice(f17, P17, 1)
    assert det_group(H, 17) is DetGroupLabel.E1
    monkeypatch.setattr(
        oracle, "quasi_reflection_witness", lambda L, ld: [[f17.one]])
    with pytest.raises(VerificationError):
        mod_PN_det_oracle(H, 17)


@pytest.mark.slow
def test_oracle_on_example(example):
    assert list(mod_PN_det_oracle(example, 2)) == [DetGroupLabel.E1]
    assert list(mod_PN_det_oracle(example, 17)) == [DetGroupLabel.E1]


@pytest.mark.slow
@pytest.mark.parametrize("p, i", [(2, 0), (2, 1), (2, 2), (17, 1), (17, 2)])
def test_oracle_agrees_on_H(f17, p, i):
    prime = prime_decomposition(f17, p)[0]
    H = build_H_lattice(f17, prime, i)
    expected = det_group(H, p)
    found = mod_PN_det_oracle(H, p)
    if expected is DetGroupLabel.E1:
        assert list(found) == [DetGroupLabel.E1]
    else:
        assert DetGroupLabel.E0 in found
