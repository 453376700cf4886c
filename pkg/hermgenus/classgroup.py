"""
Ideal class group of an imaginary quadratic field.

Classes are identified by the reduced binary quadratic form attached to an
oriented Z-basis of an ideal. The group structure comes from a breadth
first search over products with the prime ideals below the Minkowski
bound and a Smith normal form of the resulting relations.
"""
import logging
import math
import typing as t

from sortedcontainers import SortedDict, SortedSet  # type: ignore
from sympy import primefactors, primerange  # type: ignore

from .exceptions import VerificationError
from .field import QuadField
from .ideal import (
    FracIdeal,
    PrimeIdeal,
    PrimeKind,
    is_principal,
    prime_decomposition,
    unit_ideal,
)
from .utils.abelian import AbelianGroup, Element, present


__all__ = (
    "Form",
    "reduce_form",
    "reduced_form_key",
    "count_reduced_forms",
    "minkowski_bound",
    "ideal_of_form",
    "ClassGroup",
    "class_group",
    "C0Subgroup",
    "c0_subgroup",
)


logger = logging.getLogger(__name__)

Form = t.Tuple[int, int, int]

# 6367/10000 > 2/pi, so the bound only errs on the large side.
MINKOWSKI_NUM = 6367
MINKOWSKI_DEN = 10000


def reduce_form(a: int, b: int, c: int) -> Form:
    """Reduced representative of a positive definite form."""
    r = (a - b) // (2 * a)
    a, b, c = a, b + 2 * r * a, a * r * r + b * r + c
    while not (a < c or (a == c and b >= 0)):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
    return a, b, c


def reduced_form_key(ideal: FracIdeal) -> Form:
    """
    The reduced form of ``Nr(x*n + y*(r + s*w)) / Nr(den*I)``; equal keys
    mean equal ideal classes.
    """
    field = ideal.field
    n, r, s = ideal.n, ideal.r, ideal.s
    beta = field.from_omega(r, s)
    a = n // s
    b = int(beta.trace()) // s
    c = int(beta.norm()) // (n * s)
    return reduce_form(a, b, c)


def count_reduced_forms(disc: int) -> int:
    """Number of primitive reduced forms of discriminant ``disc``."""
    count = 0
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                count += 1
        a += 1
    return count


def minkowski_bound(field: QuadField) -> int:
    disc = abs(field.disc)
    return math.isqrt(disc * MINKOWSKI_NUM ** 2 // MINKOWSKI_DEN ** 2) + 1


def ideal_of_form(field: QuadField, form: Form) -> FracIdeal:
    """An integral ideal of norm ``a`` whose key is ``form``."""
    a, b, _ = form
    if field.disc % 4:
        root = field.sqrt_d
    else:
        root = 2 * field.sqrt_d
    beta = (b + root) / 2
    return FracIdeal.from_z_generators(field, [field(a), beta])


class ClassGroup:
    """
    The class group with a lookup table from reduced forms to Smith
    coordinates and a small representative ideal per class.
    """

    __slots__ = ("field", "group", "table", "representatives", "generators")

    def __init__(
        self,
        field: QuadField,
        group: AbelianGroup,
        table: SortedDict,
        representatives: SortedDict,
        generators: t.List[PrimeIdeal],
    ) -> None:
        self.field = field
        self.group = group
        self.table = table
        self.representatives = representatives
        self.generators = generators

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def invariants(self) -> t.Tuple[int, ...]:
        return self.group.invariants

    def class_of(self, ideal: FracIdeal) -> Element:
        try:
            return self.table[reduced_form_key(ideal)]
        except KeyError:
            raise VerificationError(
                "Form %r of %r missing from the class table"
                % (reduced_form_key(ideal), ideal)) from None

    def representative(self, cls: Element) -> FracIdeal:
        return self.representatives[self.group.reduce(cls)]

    def add(self, a: Element, b: Element) -> Element:
        return self.group.add(a, b)

    def neg(self, a: Element) -> Element:
        return self.group.neg(a)

    def is_trivial(self, ideal: FracIdeal) -> bool:
        return self.class_of(ideal) == self.group.zero()

    def asdict(self) -> dict:
        return {
            "order": self.order,
            "invariants": list(self.invariants),
            "generators": [str(p) for p in self.generators],
        }


def class_group(field: QuadField) -> ClassGroup:
    """
    Compute the class group of ``field``.

    :raises VerificationError: if the table disagrees with the count of
        reduced forms or with principality testing.
    """
    bound = minkowski_bound(field)
    gens = []
    for p in primerange(2, bound + 1):
        primes = prime_decomposition(field, p)
        if primes[0].kind is not PrimeKind.INERT:
            gens.append(primes[0])
    logger.debug(
        "Class group of d=%d: Minkowski bound %d, %d generators",
        field.d, bound, len(gens))

    unit = unit_ideal(field)
    start = reduced_form_key(unit)
    paths: t.Dict[Form, t.List[int]] = {start: [0] * len(gens)}
    ideals: t.Dict[Form, FracIdeal] = {start: unit}
    relations = []
    frontier = [start]
    while frontier:
        nxt = []
        for key in frontier:
            for j, prime in enumerate(gens):
                ideal = ideals[key] * prime.ideal
                new = reduced_form_key(ideal)
                path = list(paths[key])
                path[j] += 1
                if new in paths:
                    rel = [x - y for x, y in zip(path, paths[new])]
                    if any(rel):
                        relations.append(rel)
                    continue
                paths[new] = path
                rep = ideal_of_form(field, new)
                if reduced_form_key(rep) != new:
                    raise VerificationError(
                        "Ideal of form %r has another key" % (new,))
                ideals[new] = rep
                nxt.append(new)
        frontier = nxt

    expected = count_reduced_forms(field.disc)
    if len(paths) != expected:
        raise VerificationError(
            "Class search found %d classes, reduced forms count %d"
            % (len(paths), expected))

    presentation = present(relations, len(gens))
    group = presentation.group
    if group.order != len(paths):
        raise VerificationError(
            "Smith form order %d differs from %d classes"
            % (group.order, len(paths)))

    table = SortedDict()
    representatives = SortedDict()
    for key, path in paths.items():
        coords = presentation.coordinates(path)
        table[key] = coords
        representatives[coords] = ideals[key]
    if len(representatives) != group.order:
        raise VerificationError("Distinct classes share Smith coordinates")
    for coords, ideal in representatives.items():
        trivial = coords == group.zero()
        if trivial != (is_principal(ideal) is not None):
            raise VerificationError(
                "Principality of %r contradicts its class" % (ideal,))

    logger.info(
        "Class group of Q(sqrt(%d)): order %d, invariants %r",
        field.d, group.order, group.invariants)
    return ClassGroup(field, group, table, representatives, gens)


class C0Subgroup:
    """
    The subgroup of classes generated by ramified primes, with one
    integral ideal ``A_i`` per coset; ``A_1`` is O.
    """

    __slots__ = ("classgroup", "members", "cosets", "reps")

    def __init__(
        self,
        classgroup: ClassGroup,
        members: SortedSet,
        cosets: t.Dict[Element, int],
        reps: t.List[FracIdeal],
    ) -> None:
        self.classgroup = classgroup
        self.members = members
        self.cosets = cosets
        self.reps = reps

    def __contains__(self, cls: Element) -> bool:
        return cls in self.members

    @property
    def index(self) -> int:
        return len(self.reps)

    def coset_key(self, cls: Element) -> Element:
        group = self.classgroup.group
        return min(group.add(cls, h) for h in self.members)

    def coset_index(self, cls: Element) -> int:
        """Position of the coset of ``cls`` among the representatives."""
        return self.cosets[self.coset_key(cls)]

    def coset_index_of(self, ideal: FracIdeal) -> int:
        return self.coset_index(self.classgroup.class_of(ideal))

    def asdict(self) -> dict:
        return {
            "order": len(self.members),
            "index": self.index,
            "representatives": [str(a) for a in self.reps],
        }


def c0_subgroup(cg: ClassGroup, prime_bound: int = 1000) -> C0Subgroup:
    """
    The subgroup C_0 generated by the classes of ramified primes, and
    coset representatives of C/C_0 taken among small prime ideals.
    """
    field = cg.field
    group = cg.group
    ramified = [
        prime_decomposition(field, p)[0]
        for p in primefactors(abs(field.disc))
    ]
    members = group.span(cg.class_of(q.ideal) for q in ramified)

    partial = C0Subgroup(cg, members, {}, [])
    cosets: t.Dict[Element, int] = {partial.coset_key(group.zero()): 0}
    reps = [unit_ideal(field)]
    target = group.order // len(members)
    for p in primerange(2, prime_bound):
        if len(reps) == target:
            break
        for prime in prime_decomposition(field, p):
            if prime.kind is PrimeKind.INERT:
                continue
            key = partial.coset_key(cg.class_of(prime.ideal))
            if key not in cosets:
                cosets[key] = len(reps)
                reps.append(prime.ideal)
    if len(reps) < target:
        for cls, ideal in cg.representatives.items():
            key = partial.coset_key(cls)
            if key not in cosets:
                cosets[key] = len(reps)
                reps.append(ideal)
    logger.debug(
        "C0 of order %d, %d coset representatives", len(members), len(reps))
    return C0Subgroup(cg, members, cosets, reps)


