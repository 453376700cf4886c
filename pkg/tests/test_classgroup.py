import pytest  # type: ignore

from sympy import factorint  # type: ignore

from hermgenus.classgroup import (
    c0_subgroup,
    class_group,
    count_reduced_forms,
    ideal_of_form,
    reduce_form,
    reduced_form_key,
)
from hermgenus.field import make_field
from hermgenus.ideal import is_principal, prime_decomposition, unit_ideal
from hermgenus.utils.abelian import AbelianGroup, F2Space, present


@pytest.mark.parametrize("d, invariants", [
    (-17, (4,)),
    (-1, ()),
    (-5, (2,)),
    (-3, ()),
    (-23, (3,)),
    (-14, (4,)),
    (-21, (2, 2)),
])
def test_class_group(d, invariants):
    cg = class_group(make_field(d))
    assert cg.invariants == invariants


def test_reduced_forms_count():
    assert count_reduced_forms(-68) == 4
    assert count_reduced_forms(-20) == 2
    assert count_reduced_forms(-4) == 1
    assert count_reduced_forms(-84) == 4


def test_reduce_form():
    assert reduce_form(3, 2, 6) == (3, 2, 6)
    assert reduce_form(6, 2, 3) == (3, -2, 6)
    a, b, c = reduce_form(14, 26, 13)
    assert b * b - 4 * a * c == 26 * 26 - 4 * 14 * 13
    assert abs(b) <= a <= c


def test_class_table_round_trip(f17):
    cg = class_group(f17)
    for cls, ideal in cg.representatives.items():
        assert cg.class_of(ideal) == cls
        assert reduced_form_key(ideal_of_form(f17, reduced_form_key(ideal))) \
            == reduced_form_key(ideal)
    p3 = prime_decomposition(f17, 3)[0].ideal
    assert cg.group.element_order(cg.class_of(p3)) == 4
    assert cg.is_trivial(unit_ideal(f17))
    assert cg.class_of(p3 * p3.conj()) == cg.group.zero()


def test_c0_subgroup(f17):
    cg = class_group(f17)
    c0 = c0_subgroup(cg)
    assert len(c0.members) == 2
    assert c0.index == 2
    assert c0.reps[0] == unit_ideal(f17)
    assert c0.reps[1] == prime_decomposition(f17, 3)[0].ideal
    assert cg.class_of(prime_decomposition(f17, 3)[0].ideal) not in c0


@pytest.mark.parametrize("d", [-1, -5, -17, -21, -26, -47])
def test_hilbert_90_on_classes(d):
    field = make_field(d)
    cg = class_group(field)
    c0 = c0_subgroup(cg)
    for cls, ideal in cg.representatives.items():
        twisted = ideal / ideal.conj()
        assert (is_principal(twisted) is not None) == (cls in c0)


@pytest.mark.slow
def test_class_number_oracle():
    for d in range(-200, 0):
        if d != -1 and any(e > 1 for e in factorint(-d).values()):
            continue
        field = make_field(d)
        assert class_group(field).order == count_reduced_forms(field.disc)


def test_present():
    p = present([[4, 0], [0, 6]], 2)
    assert sorted(p.group.invariants) == [2, 12]
    assert p.group.order == 24
    trivial = present([[1]], 1)
    assert trivial.group.order == 1


def test_abelian_group():
    group = AbelianGroup((2, 4))
    assert group.order == 8
    assert group.element_order((1, 1)) == 4
    assert len(group.span([(0, 2)])) == 2
    assert group.add((1, 3), (1, 3)) == (0, 2)


def test_f2_space():
    space = F2Space(3, [0b011, 0b110])
    assert space.rank == 2 and space.codim == 1
    assert 0b101 in space
    assert len(space.quotient_representatives()) == 2
    assert space.transversal(0b111) == space.transversal(0b100)
