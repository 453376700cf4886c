"""
Fractional ideals of the ring of integers O of an imaginary quadratic field.

A :class:`FracIdeal` is kept in canonical Hermite form: ``den * I`` is the
integral ideal with Z-basis ``{n, r + s*w}``, ``s | n``, ``0 <= r < n`` and
``den`` minimal. Two ideals are equal iff their canonical forms agree.
"""
from fractions import Fraction
import logging
import typing as t

from sympy import isprime, legendre_symbol, sqrt_mod  # type: ignore

from .exceptions import InputError, PreconditionError
from .field import FieldElement, QuadField, OmegaKind, make_field
from .utils.enum import BaseStrEnum
from .utils.intmat import common_denominator, hnf


__all__ = (
    "PrimeKind",
    "FracIdeal",
    "PrimeIdeal",
    "ideal_from_generators",
    "unit_ideal",
    "mul",
    "inv",
    "conj_ideal",
    "ideal_norm",
    "ideal_add",
    "ideal_contains",
    "ideal_pow",
    "prime_decomposition",
    "primes_above",
    "different",
    "valuation",
    "element_valuation",
    "local_generator",
    "residue_representatives",
    "is_principal",
    "rational_valuation",
)


logger = logging.getLogger(__name__)


class PrimeKind(BaseStrEnum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def rational_valuation(value: Fraction, p: int) -> t.Optional[int]:
    """p-adic valuation of a rational; ``None`` for zero."""
    value = Fraction(value)
    if not value:
        return None
    v = 0
    num, den = value.numerator, value.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


class FracIdeal:

    __slots__ = ("field", "den", "n", "r", "s")

    def __init__(self, field: QuadField, den: int, n: int, r: int, s: int):
        self.field = field
        self.den = den
        self.n = n
        self.r = r
        self.s = s

    @classmethod
    def from_z_generators(
        cls,
        field: QuadField,
        elements: t.Iterable[FieldElement],
    ) -> "FracIdeal":
        """Ideal whose Z-span is spanned by ``elements`` (must be O-stable)."""
        coords = [field.coerce(x).omega_coords() for x in elements]
        den = common_denominator(c for pair in coords for c in pair)
        rows = [[int(y * den), int(x * den)] for x, y in coords]
        basis = hnf(rows) if rows else []
        if len(basis) != 2:
            raise InputError("Generators do not span a fractional ideal")
        (s, r), (_, n) = basis
        return cls(field, den, n, r % n, s)

    def __repr__(self) -> str:
        return "FracIdeal(d=%d, den=%d, hnf=[[%d,0],[%d,%d]])" % (
            self.field.d, self.den, self.n, self.r, self.s)

    def __str__(self) -> str:
        gens = ", ".join(str(b) for b in self.basis())
        return "(%s)" % gens

    def key(self) -> t.Tuple[int, int, int, int]:
        return (self.den, self.n, self.r, self.s)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FracIdeal):
            return NotImplemented
        return self.field == other.field and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.field.d,) + self.key())

    def __lt__(self, other: "FracIdeal") -> bool:
        return self.key() < other.key()

    def basis(self) -> t.List[FieldElement]:
        """Z-basis of the ideal (also a set of O-generators)."""
        f = self.field
        return [
            f.from_omega(Fraction(self.n, self.den), 0),
            f.from_omega(Fraction(self.r, self.den), Fraction(self.s, self.den)),
        ]

    def asdict(self) -> dict:
        return {
            "den": self.den,
            "hnf": [[self.n, 0], [self.r, self.s]],
            "generators": [b.to_pair() for b in self.basis()],
        }

    @property
    def is_integral(self) -> bool:
        return self.den == 1

    def norm(self) -> Fraction:
        return Fraction(self.n * self.s, self.den * self.den)

    def contains_element(self, x: FieldElement) -> bool:
        cx, cy = self.field.coerce(x).omega_coords()
        cx, cy = cx * self.den, cy * self.den
        k = cy / self.s
        if k.denominator != 1:
            return False
        return ((cx - k * self.r) / self.n).denominator == 1

    __contains__ = contains_element

    def __mul__(self, other: t.Union["FracIdeal", FieldElement, int, Fraction]):
        if isinstance(other, FracIdeal):
            return mul(self, other)
        x = self.field.coerce(other)
        if not x:
            raise InputError("Scaling an ideal by zero")
        return FracIdeal.from_z_generators(
            self.field, [b * x for b in self.basis()])

    __rmul__ = __mul__

    def __truediv__(self, other: t.Union["FracIdeal", FieldElement, int]):
        if isinstance(other, FracIdeal):
            return mul(self, inv(other))
        return self * (1 / self.field.coerce(other))

    def __add__(self, other: "FracIdeal") -> "FracIdeal":
        return ideal_add(self, other)

    def __pow__(self, k: int) -> "FracIdeal":
        return ideal_pow(self, k)

    def conj(self) -> "FracIdeal":
        return conj_ideal(self)

    def inverse(self) -> "FracIdeal":
        return inv(self)

    def issubset(self, other: "FracIdeal") -> bool:
        return ideal_contains(other, self)


def unit_ideal(field: QuadField) -> FracIdeal:
    return FracIdeal(field, 1, 1, 0, 1)


def ideal_from_generators(
    generators: t.Sequence[t.Union[FieldElement, int, Fraction]],
    field: t.Optional[QuadField] = None,
) -> FracIdeal:
    """
    Smallest fractional ideal containing ``generators``.

    :raises InputError: if every generator is zero.
    """
    if field is None:
        elems = [g for g in generators if isinstance(g, FieldElement)]
        if not elems:
            raise InputError("Cannot infer the field from rational generators")
        field = make_field(elems[0].d)
    gens = [field.coerce(g) for g in generators]
    gens = [g for g in gens if g]
    if not gens:
        raise InputError("An ideal needs at least one nonzero generator")
    omega = field.omega
    return FracIdeal.from_z_generators(
        field, [x for g in gens for x in (g, g * omega)])


def mul(a: FracIdeal, b: FracIdeal) -> FracIdeal:
    return FracIdeal.from_z_generators(
        a.field, [x * y for x in a.basis() for y in b.basis()])


def conj_ideal(a: FracIdeal) -> FracIdeal:
    return FracIdeal.from_z_generators(a.field, [x.conj() for x in a.basis()])


def ideal_norm(a: FracIdeal) -> Fraction:
    return a.norm()


def inv(a: FracIdeal) -> FracIdeal:
    nr = a.norm()
    return FracIdeal.from_z_generators(
        a.field, [x.conj() / nr for x in a.basis()])


def ideal_add(a: FracIdeal, b: FracIdeal) -> FracIdeal:
    return FracIdeal.from_z_generators(a.field, a.basis() + b.basis())


def ideal_contains(a: FracIdeal, b: FracIdeal) -> bool:
    """True iff ``b`` is contained in ``a``."""
    return all(x in a for x in b.basis())


def ideal_pow(a: FracIdeal, k: int) -> FracIdeal:
    base = a if k >= 0 else inv(a)
    result = unit_ideal(a.field)
    for _ in range(abs(k)):
        result = mul(result, base)
    return result


def _min_poly_mod(field: QuadField, x: int, p: int) -> int:
    if field.omega_kind is OmegaKind.HALF:
        return (x * x - x - (field.d - 1) // 4) % p
    return (x * x - field.d) % p


class PrimeIdeal:
    """
    A prime ideal of O above the rational prime ``p``.

    ``root`` is the image of w in O/P = F_p for residue degree 1
    (``None`` for inert primes); ``index`` orders the two conjugate
    primes of a split ``p`` canonically.
    """

    __slots__ = ("p", "kind", "ideal", "residue_degree", "root", "index")

    def __init__(
        self,
        p: int,
        kind: PrimeKind,
        ideal: FracIdeal,
        residue_degree: int,
        root: t.Optional[int],
        index: int = 0,
    ) -> None:
        self.p = p
        self.kind = kind
        self.ideal = ideal
        self.residue_degree = residue_degree
        self.root = root
        self.index = index

    def __repr__(self) -> str:
        return "PrimeIdeal(p=%d, %s, index=%d)" % (self.p, self.kind, self.index)

    def __str__(self) -> str:
        suffix = "'" if self.index else ""
        return "P%d%s" % (self.p, suffix)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimeIdeal):
            return NotImplemented
        return self.ideal == other.ideal

    def __hash__(self) -> int:
        return hash(self.ideal)

    @property
    def field(self) -> QuadField:
        return self.ideal.field

    @property
    def e(self) -> int:
        """Ramification index over Z."""
        return 2 if self.kind is PrimeKind.RAMIFIED else 1

    @property
    def norm(self) -> int:
        return self.p ** self.residue_degree

    def conj(self) -> "PrimeIdeal":
        if self.kind is not PrimeKind.SPLIT:
            return self
        return prime_decomposition(self.field, self.p)[1 - self.index]

    def asdict(self) -> dict:
        return {"p": self.p, "kind": str(self.kind), "index": self.index}


def prime_decomposition(field: QuadField, p: int) -> t.List[PrimeIdeal]:
    """
    The primes of O above ``p`` (Kummer-Dedekind).

    Split primes come as two conjugates, the one with the smaller
    canonical Hermite form first.
    """
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise InputError("%r is not a rational prime" % (p,))
    disc = field.disc
    if disc % p == 0:
        roots = [x for x in range(p) if _min_poly_mod(field, x, p) == 0] \
            if p == 2 else [_ramified_root(field, p)]
        root = roots[0]
        ideal = FracIdeal.from_z_generators(
            field, [field(p), field.omega - root,
                    field.omega * p, field.omega * (field.omega - root)])
        return [PrimeIdeal(p, PrimeKind.RAMIFIED, ideal, 1, root)]
    if p == 2:
        split = disc % 8 == 1
        roots = [x for x in range(2) if _min_poly_mod(field, x, 2) == 0]
    else:
        split = legendre_symbol(disc % p, p) == 1
        roots = _split_roots(field, p) if split else []
    if not split:
        ideal = FracIdeal(field, 1, p, 0, p)
        return [PrimeIdeal(p, PrimeKind.INERT, ideal, 2, None)]
    found = []
    for root in roots:
        ideal = FracIdeal(field, 1, p, (-root) % p, 1)
        found.append((ideal.key(), root, ideal))
    found.sort()
    return [
        PrimeIdeal(p, PrimeKind.SPLIT, ideal, 1, root, index)
        for index, (_, root, ideal) in enumerate(found)
    ]


def _ramified_root(field: QuadField, p: int) -> int:
    if field.omega_kind is OmegaKind.HALF:
        return (p + 1) // 2
    return 0


def _split_roots(field: QuadField, p: int) -> t.List[int]:
    roots = sorted(sqrt_mod(field.d % p, p, all_roots=True))
    if field.omega_kind is OmegaKind.HALF:
        half = (p + 1) // 2
        roots = sorted(((1 + r) * half) % p for r in roots)
    return roots


def primes_above(field: QuadField, p: int) -> t.List[PrimeIdeal]:
    return prime_decomposition(field, p)


def different(field: QuadField) -> FracIdeal:
    """The different of O over Z, generated by sqrt(disc)."""
    if field.omega_kind is OmegaKind.HALF:
        return ideal_from_generators([field.sqrt_d], field)
    return ideal_from_generators([2 * field.sqrt_d], field)


def _mod_inverse(value: Fraction, p: int) -> int:
    return (value.numerator * pow(value.denominator, -1, p)) % p


def element_valuation(x: FieldElement, prime: PrimeIdeal) -> t.Optional[int]:
    """Valuation of ``x`` at ``prime``; ``None`` for zero."""
    if not x:
        return None
    p = prime.p
    if prime.kind is PrimeKind.RAMIFIED:
        return rational_valuation(x.norm(), p)
    if prime.kind is PrimeKind.INERT:
        return rational_valuation(x.norm(), p) // 2
    cx, cy = x.omega_coords()
    k = min(v for v in (rational_valuation(cx, p), rational_valuation(cy, p))
            if v is not None)
    scale = Fraction(p) ** -k
    cx, cy = cx * scale, cy * scale
    residue = (_mod_inverse(cx, p) + _mod_inverse(cy, p) * prime.root) % p
    if residue:
        return k
    return k + rational_valuation(x.norm() * scale * scale, p)


def valuation(ideal: FracIdeal, prime: PrimeIdeal) -> int:
    """Exponent of ``prime`` in the factorization of ``ideal``."""
    return min(
        v for v in (element_valuation(b, prime) for b in ideal.basis())
        if v is not None
    )


def local_generator(ideal: FracIdeal, p: int) -> FieldElement:
    """
    An element of ``ideal`` whose valuation equals that of the ideal at
    every prime above ``p``.
    """
    primes = prime_decomposition(ideal.field, p)
    target = [valuation(ideal, q) for q in primes]
    b1, b2 = ideal.basis()
    candidates = [b1, b2] + [b1 + k * b2 for k in range(1, p)]
    for cand in candidates:
        if [element_valuation(cand, q) for q in primes] == target:
            return cand
    raise PreconditionError(
        "No local generator of %s found at %d" % (ideal, p))


def residue_representatives(prime: PrimeIdeal) -> t.List[FieldElement]:
    """Canonical residue system of O/P, integers first."""
    field = prime.field
    p = prime.p
    if prime.residue_degree == 1:
        return [field(k) for k in range(p)]
    return [field.from_omega(a, b) for b in range(p) for a in range(p)]


def _lagrange_reduce(
    u: FieldElement, v: FieldElement,
) -> t.Tuple[FieldElement, FieldElement]:
    if u.norm() > v.norm():
        u, v = v, u
    while True:
        mu = round((u * v.conj()).trace() / (2 * u.norm()))
        v = v - mu * u
        if v.norm() >= u.norm():
            return u, v
        u, v = v, u


def is_principal(ideal: FracIdeal) -> t.Optional[FieldElement]:
    """
    A generator of ``ideal`` if it is principal, else ``None``.

    Gauss-reduces the Z-lattice ``den * I`` under the norm form; the ideal
    is principal iff the shortest vector has norm ``Nr(den * I)``.
    """
    field = ideal.field
    u, _ = _lagrange_reduce(field(ideal.n), field.from_omega(ideal.r, ideal.s))
    if u.norm() == ideal.n * ideal.s:
        gen = u / ideal.den
        logger.debug("%r is principal, generated by %s", ideal, gen)
        return gen
    return None


