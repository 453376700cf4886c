from fractions import Fraction

import pytest  # type: ignore

from hermgenus.exceptions import InputError
from hermgenus.field import (
    OmegaKind,
    conj,
    format_rational,
    is_integral,
    make_field,
    norm,
    parse_rational,
    torsion_units,
    trace,
)


@pytest.mark.parametrize("d, disc, kind", [
    (-17, -68, OmegaKind.SQRT),
    (-3, -3, OmegaKind.HALF),
    (-1, -4, OmegaKind.SQRT),
    (-7, -7, OmegaKind.HALF),
    (-2, -8, OmegaKind.SQRT),
])
def test_make_field(d, disc, kind):
    field = make_field(d)
    assert field.disc == disc
    assert field.omega_kind is kind


@pytest.mark.parametrize("d", [-4, 0, 1, 5, -12, -18])
def test_make_field_rejects(d):
    with pytest.raises(InputError):
        make_field(d)


def test_conj(f17):
    x = f17(3, 2)
    assert conj(x) == f17(3, -2)
    assert conj(f17(5)) == f17(5)
    y = f17(Fraction(1, 2), 1)
    assert conj(conj(y)) == y


def test_norm_trace(f17):
    assert norm(f17.sqrt_d) == 17
    assert norm(f17(1, 1)) == 18
    assert trace(f17(Fraction(3, 7), 5)) == Fraction(6, 7)
    assert norm(f17.zero) == 0


def test_ring_laws(f17):
    x, y = f17(2, -3), f17(Fraction(1, 3), 4)
    assert norm(x * y) == norm(x) * norm(y)
    assert trace(x + y) == trace(x) + trace(y)
    assert x * x.inverse() == 1
    assert (x / y) * y == x
    assert 1 / x == x.inverse()
    assert x ** -2 * x ** 2 == 1


def test_division_by_zero(f17):
    with pytest.raises(ZeroDivisionError):
        f17(1, 1) / f17.zero


def test_is_integral():
    f3 = make_field(-3)
    assert is_integral(f3(Fraction(1, 2), Fraction(1, 2)))
    f17 = make_field(-17)
    assert not is_integral(f17(Fraction(1, 2), Fraction(1, 2)))
    assert is_integral(f17.zero)


def test_omega_coords_round_trip():
    f7 = make_field(-7)
    x = f7(Fraction(3, 2), Fraction(5, 2))
    cx, cy = x.omega_coords()
    assert (cx, cy) == (-1, 5)
    assert f7.from_omega(cx, cy) == x


@pytest.mark.parametrize("d, count", [(-1, 4), (-3, 6), (-17, 2), (-2, 2)])
def test_torsion_units(d, count):
    field = make_field(d)
    units = torsion_units(field)
    assert len(set(units)) == count
    assert all(norm(u) == 1 and u.is_integral() for u in units)


def test_rationals():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("7") == 7
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"
    for bad in ("1/0", "a", "1/2/3", ""):
        with pytest.raises(InputError):
            parse_rational(bad)


def test_is_definite_gram(f17):
    s = f17.sqrt_d
    assert f17.is_definite_gram([[f17(2), f17(1)], [f17(1), f17(3)]])
    assert f17.is_definite_gram([[f17(-1), f17.zero], [f17.zero, f17(-2)]])
    assert not f17.is_definite_gram([[f17(102), s], [-s, f17.zero]])
