"""
Exact arithmetic in an imaginary quadratic field E = Q(sqrt(d)).

Elements are stored in sqrt(d)-coordinates ``a + b*sqrt(d)`` with
:class:`fractions.Fraction` coefficients. The integral basis ``{1, w}`` of
the ring of integers is only used where integrality matters (see
:meth:`FieldElement.omega_coords`).
"""
from fractions import Fraction
import logging
import typing as t

from sympy import factorint  # type: ignore

from .exceptions import InputError
from .utils.enum import BaseStrEnum
from .utils.intmat import determinant


__all__ = (
    "OmegaKind",
    "QuadField",
    "FieldElement",
    "make_field",
    "conj",
    "norm",
    "trace",
    "is_integral",
    "torsion_units",
    "format_rational",
    "parse_rational",
)


logger = logging.getLogger(__name__)

Rational = t.Union[int, Fraction]
Scalar = t.Union[int, Fraction, "FieldElement"]


class OmegaKind(BaseStrEnum):
    SQRT = "sqrt"   # w = sqrt(d)
    HALF = "half"   # w = (1 + sqrt(d)) / 2


def format_rational(value: Rational) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "%d/%d" % (value.numerator, value.denominator)


def parse_rational(text: str) -> Fraction:
    text = text.strip().replace("−", "-")
    parts = text.split("/")
    if len(parts) > 2 or not all(parts):
        raise InputError("Malformed rational %r" % text)
    try:
        num = int(parts[0])
        den = int(parts[1]) if len(parts) == 2 else 1
    except ValueError as error:
        raise InputError("Malformed rational %r" % text) from error
    if den == 0:
        raise InputError("Zero denominator in rational %r" % text)
    return Fraction(num, den)


class QuadField:

    __slots__ = ("d", "disc", "omega_kind")

    def __init__(self, d: int, disc: int, omega_kind: OmegaKind) -> None:
        self.d = d
        self.disc = disc
        self.omega_kind = omega_kind

    def __repr__(self) -> str:
        return "QuadField(d=%d)" % self.d

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuadField) and other.d == self.d

    def __hash__(self) -> int:
        return hash(("QuadField", self.d))

    def asdict(self) -> dict:
        return {
            "d": self.d,
            "disc": self.disc,
            "omega_kind": str(self.omega_kind),
            "integral_basis": ["1", self.omega_label],
        }

    @property
    def omega_label(self) -> str:
        if self.omega_kind is OmegaKind.HALF:
            return "(1+sqrt(%d))/2" % self.d
        return "sqrt(%d)" % self.d

    def __call__(self, a: Rational = 0, b: Rational = 0) -> "FieldElement":
        return FieldElement(self.d, a, b)

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def sqrt_d(self) -> "FieldElement":
        return self(0, 1)

    @property
    def omega(self) -> "FieldElement":
        if self.omega_kind is OmegaKind.HALF:
            return self(Fraction(1, 2), Fraction(1, 2))
        return self(0, 1)

    @property
    def omega_trace(self) -> int:
        return 1 if self.omega_kind is OmegaKind.HALF else 0

    @property
    def omega_norm(self) -> int:
        if self.omega_kind is OmegaKind.HALF:
            return (1 - self.d) // 4
        return -self.d

    def from_omega(self, x: Rational, y: Rational) -> "FieldElement":
        """The element ``x + y*w``."""
        if self.omega_kind is OmegaKind.HALF:
            return self(Fraction(x) + Fraction(y, 2), Fraction(y, 2))
        return self(x, y)

    def is_definite_gram(self, gram: t.Sequence[t.Sequence["FieldElement"]]) -> bool:
        """Positive or negative definiteness via leading principal minors."""
        minors = [
            determinant([list(row[:k]) for row in gram[:k]]).a
            for k in range(1, len(gram) + 1)
        ]
        if all(m > 0 for m in minors):
            return True
        return all(m != 0 and (m < 0) == (k % 2 == 0) for k, m in enumerate(minors))

    def coerce(self, value: Scalar) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.d != self.d:
                raise InputError(
                    "Element of Q(sqrt(%d)) used in Q(sqrt(%d))"
                    % (value.d, self.d))
            return value
        return self(value)


class FieldElement:
    """
    An element ``a + b*sqrt(d)`` of Q(sqrt(d)).

    Instances are immutable and hashable; arithmetic with ``int`` and
    ``Fraction`` operands is supported on both sides.
    """

    __slots__ = ("d", "a", "b")

    def __init__(self, d: int, a: Rational = 0, b: Rational = 0) -> None:
        self.d = d
        self.a = Fraction(a)
        self.b = Fraction(b)

    def _other(self, other: t.Any) -> t.Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.d != self.d:
                raise InputError(
                    "Mixed fields: sqrt(%d) and sqrt(%d)" % (self.d, other.d))
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.d, other)
        return None

    def __repr__(self) -> str:
        return "FieldElement(%s)" % self

    def __str__(self) -> str:
        if not self.b:
            return format_rational(self.a)
        root = "sqrt(%d)" % self.d
        if self.b == 1:
            tail = root
        elif self.b == -1:
            tail = "-" + root
        else:
            tail = "%s*%s" % (format_rational(self.b), root)
        if not self.a:
            return tail
        sign = "" if tail.startswith("-") else "+"
        return "%s%s%s" % (format_rational(self.a), sign, tail)

    def __eq__(self, other: object) -> bool:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return self.a == rhs.a and self.b == rhs.b

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self) -> int:
        if not self.b:
            return hash(self.a)
        return hash((self.d, self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.d, -self.a, -self.b)

    def __add__(self, other: t.Any) -> "FieldElement":
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return FieldElement(self.d, self.a + rhs.a, self.b + rhs.b)

    __radd__ = __add__

    def __sub__(self, other: t.Any) -> "FieldElement":
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return FieldElement(self.d, self.a - rhs.a, self.b - rhs.b)

    def __rsub__(self, other: t.Any) -> "FieldElement":
        return -self + other

    def __mul__(self, other: t.Any) -> "FieldElement":
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return FieldElement(
            self.d,
            self.a * rhs.a + self.d * self.b * rhs.b,
            self.a * rhs.b + self.b * rhs.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("Division by zero in Q(sqrt(%d))" % self.d)
        return FieldElement(self.d, self.a / n, -self.b / n)

    def __truediv__(self, other: t.Any) -> "FieldElement":
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return self * rhs.inverse()

    def __rtruediv__(self, other: t.Any) -> "FieldElement":
        lhs = self._other(other)
        if lhs is None:
            return NotImplemented
        return lhs * self.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        base = self if k >= 0 else self.inverse()
        result = FieldElement(self.d, 1)
        for _ in range(abs(k)):
            result = result * base
        return result

    def conj(self) -> "FieldElement":
        return FieldElement(self.d, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    @property
    def is_rational(self) -> bool:
        return not self.b

    def omega_coords(self) -> t.Tuple[Fraction, Fraction]:
        """Coordinates ``(x, y)`` with ``self == x + y*w``."""
        if self.d % 4 == 1:
            return self.a - self.b, 2 * self.b
        return self.a, self.b

    def is_integral(self) -> bool:
        tr, nr = self.trace(), self.norm()
        return tr.denominator == 1 and nr.denominator == 1

    def to_pair(self) -> t.List[str]:
        return [format_rational(self.a), format_rational(self.b)]


def make_field(d: int) -> QuadField:
    """
    Field descriptor of Q(sqrt(d)) for a squarefree negative ``d``.

    :raises InputError: when ``d`` is not negative or not squarefree.
    """
    if not isinstance(d, int) or isinstance(d, bool):
        raise InputError("d must be an integer, got %r" % (d,))
    if d >= 0:
        raise InputError(
            "d must be negative (imaginary quadratic fields only), got %d" % d)
    if d != -1 and any(e > 1 for e in factorint(-d).values()):
        raise InputError("d = %d is not squarefree" % d)
    if d % 4 == 1:
        field = QuadField(d, d, OmegaKind.HALF)
    else:
        field = QuadField(d, 4 * d, OmegaKind.SQRT)
    logger.debug("Created %r with discriminant %d", field, field.disc)
    return field


def conj(x: FieldElement) -> FieldElement:
    return x.conj()


def norm(x: FieldElement) -> Fraction:
    return x.norm()


def trace(x: FieldElement) -> Fraction:
    return x.trace()


def is_integral(x: FieldElement) -> bool:
    return x.is_integral()


def torsion_units(field: QuadField) -> t.List[FieldElement]:
    """All units of O; every one has norm 1 since d < 0."""
    if field.d == -1:
        return [field(1), field(-1), field(0, 1), field(0, -1)]
    if field.d == -3:
        half = Fraction(1, 2)
        return [
            field(1), field(-1),
            field(half, half), field(-half, -half),
            field(half, -half), field(-half, half),
        ]
    return [field(1), field(-1)]
