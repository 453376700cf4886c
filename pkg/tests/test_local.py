from fractions import Fraction
import itertools

import pytest  # type: ignore

from sympy import primefactors  # type: ignore

from hermgenus.exceptions import InputError, PreconditionError
from hermgenus.field import make_field, torsion_units
from hermgenus.ideal import PrimeKind, prime_decomposition, unit_ideal
from hermgenus.lattice import HermLattice, build_H_lattice, free_lattice, make_space
from hermgenus.local import (
    REAL_PLACE,
    DetGroupLabel,
    cor0_applies,
    det_group,
    det_group_maximal_crosscheck,
    hilbert_symbol,
    is_E1_element,
    is_isotropic,
    is_local_norm,
    is_modular_at,
    jordan_invariants,
    local_data,
    rho_iterate,
    same_local_invariants,
    scale_norm_valuations,
)
from hermgenus.selftest import RANDOM_FIELDS, diagonal_lattice, random_lattice


def test_local_data(f17):
    at2 = local_data(f17, 2)
    assert at2.kind is PrimeKind.RAMIFIED
    assert (at2.e, at2.e_prime, at2.ramification_parity) == (2, 1, 0)
    at17 = local_data(f17, 17)
    assert (at17.e, at17.e_prime) == (1, 0)
    at3 = local_data(f17, 3)
    assert at3.kind is PrimeKind.SPLIT and at3.e == 0
    assert not at3.is_ramified
    assert at3.val(f17(3)) == 1
    assert at3.val(f17(1, 1)) == 0
    assert at17.rational_val(Fraction(1, 17)) == -2


def test_example_jordan(example):
    assert jordan_invariants(example, 2) == [(0, 2, 2, True)]
    assert jordan_invariants(example, 17) == [(1, 2, 2, True)]
    assert jordan_invariants(example, 3) == [(0, 2, 0, False)]
    assert is_modular_at(example, 17)
    assert det_group(example, 2) is DetGroupLabel.E1
    assert det_group(example, 17) is DetGroupLabel.E1
    assert det_group(example, 3) is DetGroupLabel.E0


def test_non_modular(f17):
    L = diagonal_lattice(f17, [1, 17])
    assert jordan_invariants(L, 17) == [(0, 1, 0, False), (2, 1, 2, False)]
    assert not is_modular_at(L, 17)
    assert det_group(L, 17) is DetGroupLabel.E0


@pytest.mark.parametrize("i", range(5))
def test_det_group_of_H(f17, i):
    P17 = prime_decomposition(f17, 17)[0]
    P2 = prime_decomposition(f17, 2)[0]
    at17 = build_H_lattice(f17, P17, i)
    at2 = build_H_lattice(f17, P2, i)
    odd = DetGroupLabel.E1 if i % 2 else DetGroupLabel.E0
    even = DetGroupLabel.E0 if i % 2 else DetGroupLabel.E1
    assert det_group(at17, 17) is odd
    assert det_group(at2, 2) is even
    assert det_group(build_H_lattice(f17, P17, i, copies=2), 17) is odd


def test_cor0(f17):
    P2 = prime_decomposition(f17, 2)[0]
    assert not cor0_applies(build_H_lattice(f17, P2, 0), 2)
    assert cor0_applies(build_H_lattice(f17, P2, 1), 2)
    assert cor0_applies(diagonal_lattice(f17, [1, 1]), 17)
    assert not cor0_applies(diagonal_lattice(f17, [1, 1]), 3)
    assert scale_norm_valuations(build_H_lattice(f17, P2, 1), 2) == (1, 2)


def test_maximal_crosscheck(f17, example):
    assert det_group_maximal_crosscheck(example.space, 17) is DetGroupLabel.E1
    rank_one = make_space(f17, [[1]])
    assert det_group_maximal_crosscheck(rank_one, 17) is DetGroupLabel.E0
    with pytest.raises(PreconditionError):
        det_group_maximal_crosscheck(example.space, 3)


def test_E1_elements(f17):
    at2, at17 = local_data(f17, 2), local_data(f17, 17)
    assert is_E1_element(f17.one, at17)
    assert not is_E1_element(-f17.one, at17)
    assert is_E1_element(-f17.one, at2)
    with pytest.raises(PreconditionError):
        is_E1_element(f17(2), at17)
    with pytest.raises(PreconditionError):
        is_E1_element(f17.one, local_data(f17, 3))


def unit_change(L, p, rng):
    """L_p again, spanned by the rows of a triangular matrix that is a unit at p."""
    field, m = L.field, L.rank
    units = [u for u in (1, -1, 2, 3, 5, 7) if u % p]
    pairs = []
    for i in range(m):
        row = [field.zero] * m
        row[i] = field(rng.choice(units))
        for j in range(i + 1, m):
            row[j] = field(rng.randint(-2, 2), rng.randint(-1, 1))
        pairs.append((unit_ideal(field), row))
    return HermLattice(L.space, pairs)


@pytest.mark.parametrize("d, p, rank", [
    (-17, 17, 3),
    (-17, 3, 3),
    (-5, 5, 3),
    (-7, 7, 3),
    (-3, 3, 3),
    (-17, 2, 2),
    (-5, 2, 2),
    (-1, 2, 2),
    (-2, 2, 2),
])
@pytest.mark.parametrize("rng", [1, 2, 3], indirect=True)
def test_jordan_invariants_under_unit_basis_change(d, p, rank, rng):
    field = make_field(d)
    L = free_lattice(random_lattice(rng, field, rank).space)
    expected = jordan_invariants(L, p)
    for _ in range(3):
        assert jordan_invariants(unit_change(L, p, rng), p) == expected


@pytest.mark.parametrize("gram, expected", [
    ([[1, 1], [1, 2]], [(0, 2, 0, False)]),
    ([[1, 1], [1, 3]], [(0, 1, 0, False), (2, 1, 2, False)]),
    ([[2, 2], [2, 4]], [(2, 2, 2, False)]),
])
def test_dyadic_tied_pivot(gram, expected):
    field = make_field(-1)
    L = free_lattice(make_space(field, [[field(x) for x in row] for row in gram]))
    assert jordan_invariants(L, 2) == expected


def test_dyadic_tied_pivot_matches_diagonal():
    field = make_field(-1)
    tied = make_space(field, [[field(1), field(1)], [field(1), field(3)]])
    assert jordan_invariants(free_lattice(tied), 2) == \
        jordan_invariants(diagonal_lattice(field, [1, 2]), 2)
    plane = make_space(field, [[field(1), field(1)], [field(1), field(2)]])
    assert jordan_invariants(free_lattice(plane), 2) == \
        jordan_invariants(diagonal_lattice(field, [1, 1]), 2)


@pytest.mark.parametrize("d", RANDOM_FIELDS)
def test_torsion_quotients_in_E1(d):
    field = make_field(d)
    for p in primefactors(abs(field.disc)):
        ld = local_data(field, p)
        for u in torsion_units(field):
            assert is_E1_element(u / u.conj(), ld)


@pytest.mark.parametrize("a, b, p, expected", [
    (-1, -1, 2, -1),
    (-1, -1, REAL_PLACE, -1),
    (2, 3, 3, -1),
    (5, 5, 5, 1),
    (3, 3, 3, -1),
    (2, 2, 2, 1),
    (2, 5, 2, -1),
    (Fraction(1, 3), 3, 3, -1),
    (-17, 17, 17, 1),
])
def test_hilbert_symbol(a, b, p, expected):
    assert hilbert_symbol(a, b, p) == expected
    assert hilbert_symbol(b, a, p) == expected


@pytest.mark.parametrize("a, b", itertools.product(
    [-1, 2, 3, -6, 10, Fraction(7, 5), -51],
    [-17, 5, -3, 6, Fraction(-2, 11)],
))
def test_hilbert_product_formula(a, b):
    places = {2, REAL_PLACE}
    for q in (Fraction(a), Fraction(b)):
        places.update(primefactors(abs(q.numerator) * q.denominator))
    product = 1
    for p in places:
        product *= hilbert_symbol(a, b, p)
    assert product == 1


def test_hilbert_rejects():
    with pytest.raises(InputError):
        hilbert_symbol(0, 3, 3)
    with pytest.raises(InputError):
        hilbert_symbol(2, 3, 4)


def test_local_norms():
    assert is_local_norm(17, 17, -17)
    assert is_local_norm(-1, 5, -1)
    assert not is_local_norm(-1, 3, -3)


def test_isotropy(example):
    f3 = make_field(-3)
    plane = diagonal_lattice(f3, [1, 1]).space
    assert not is_isotropic(plane, 3)
    assert is_isotropic(plane, 7)
    assert is_isotropic(diagonal_lattice(f3, [1, 1, 1]).space, 3)
    assert not is_isotropic(diagonal_lattice(f3, [1]).space, 3)
    for p in (2, 3, 5, 17):
        assert is_isotropic(example.space, p)


def test_rho_iterate(f17):
    P17 = prime_decomposition(f17, 17)[0]
    chain = rho_iterate(build_H_lattice(f17, P17, 4), P17)
    assert len(chain) == 3
    assert jordan_invariants(chain[-1], 17)[0][0] == 0
    assert same_local_invariants(
        chain[-1], build_H_lattice(f17, P17, 0), 17)
    assert not same_local_invariants(
        chain[1], build_H_lattice(f17, P17, 0), 17)
