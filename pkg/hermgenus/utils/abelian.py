"""
Finite abelian groups in Smith coordinates, plus F_2 linear algebra.

Elements of ``Z/d_1 x ... x Z/d_k`` are tuples of residues.
"""
from functools import reduce
import itertools
import operator
import typing as t

from sortedcontainers import SortedSet  # type: ignore
from sympy import Matrix  # type: ignore
from sympy.matrices.normalforms import invariant_factors  # type: ignore

from ..exceptions import VerificationError
from .intmat import snf_with_transform


__all__ = (
    "AbelianGroup",
    "Presentation",
    "present",
    "F2Space",
)


Element = t.Tuple[int, ...]


class AbelianGroup:

    __slots__ = ("invariants",)

    def __init__(self, invariants: t.Iterable[int]) -> None:
        self.invariants = tuple(int(d) for d in invariants)
        if any(d < 2 for d in self.invariants):
            raise VerificationError(
                "Invariant factors must exceed 1: %r" % (self.invariants,))

    def __repr__(self) -> str:
        return "AbelianGroup(%r)" % (self.invariants,)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AbelianGroup)
            and other.invariants == self.invariants
        )

    def __hash__(self) -> int:
        return hash(self.invariants)

    @property
    def order(self) -> int:
        return reduce(operator.mul, self.invariants, 1)

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def zero(self) -> Element:
        return (0,) * self.rank

    def reduce(self, vec: t.Iterable[int]) -> Element:
        return tuple(int(v) % d for v, d in zip(vec, self.invariants))

    def add(self, a: Element, b: Element) -> Element:
        return self.reduce(x + y for x, y in zip(a, b))

    def neg(self, a: Element) -> Element:
        return self.reduce(-x for x in a)

    def scale(self, a: Element, k: int) -> Element:
        return self.reduce(k * x for x in a)

    def elements(self) -> t.Iterator[Element]:
        return itertools.product(*(range(d) for d in self.invariants))

    def element_order(self, a: Element) -> int:
        k, x = 1, a
        zero = self.zero()
        while x != zero:
            x = self.add(x, a)
            k += 1
        return k

    def generator(self, i: int) -> Element:
        return tuple(int(j == i) for j in range(self.rank))

    def span(self, gens: t.Iterable[Element]) -> SortedSet:
        """The subgroup generated by ``gens``."""
        members = SortedSet([self.zero()])
        frontier = [self.zero()]
        gens = [self.reduce(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return members

    def asdict(self) -> dict:
        return {"invariants": list(self.invariants), "order": self.order}


class Presentation:
    """
    The quotient ``Z^n / <relations>`` with the map from Z^n to Smith
    coordinates.
    """

    __slots__ = ("group", "transform", "columns")

    def __init__(
        self,
        group: AbelianGroup,
        transform: t.List[t.List[int]],
        columns: t.List[int],
    ) -> None:
        self.group = group
        self.transform = transform
        self.columns = columns

    def coordinates(self, vec: t.Sequence[int]) -> Element:
        image = [
            sum(v * self.transform[k][j] for k, v in enumerate(vec))
            for j in self.columns
        ]
        return self.group.reduce(image)


def present(
    relations: t.Sequence[t.Sequence[int]],
    ngens: int,
) -> Presentation:
    """
    Smith form of a relation matrix on ``ngens`` generators.

    The invariant factors are cross-checked against sympy.

    :raises VerificationError: if the relations do not define a finite
        group or the two Smith computations disagree.
    """
    if ngens == 0:
        return Presentation(AbelianGroup(()), [], [])
    rows = [list(r) for r in relations if any(r)]
    if len(rows) < ngens:
        raise VerificationError(
            "%d relations cannot present a finite group on %d generators"
            % (len(rows), ngens))
    diag_matrix, _, v = snf_with_transform(rows)
    diag = [diag_matrix[i][i] for i in range(ngens)]
    if 0 in diag:
        raise VerificationError("Relation matrix is not of full rank")
    columns = [i for i, d in enumerate(diag) if d != 1]
    invariants = [diag[i] for i in columns]
    check = [int(x) for x in invariant_factors(Matrix(rows))]
    check = [abs(x) for x in check if abs(x) > 1]
    if sorted(check) != sorted(invariants):
        raise VerificationError(
            "Smith forms disagree: %r != %r" % (invariants, check))
    return Presentation(AbelianGroup(invariants), v, columns)


class F2Space:
    """
    A subspace of F_2^n held as an echelon basis of bit masks.

    ``transversal`` reduces a vector modulo the subspace to a canonical
    representative of its coset.
    """

    __slots__ = ("dim", "basis")

    def __init__(self, dim: int, vectors: t.Iterable[int] = ()) -> None:
        self.dim = dim
        self.basis: t.List[int] = []
        for vec in vectors:
            self.add(vec)

    def add(self, vec: int) -> bool:
        vec = self.transversal(vec)
        if not vec:
            return False
        self.basis.append(vec)
        self.basis.sort(reverse=True)
        return True

    def transversal(self, vec: int) -> int:
        for b in self.basis:
            vec = min(vec, vec ^ b)
        return vec

    def __contains__(self, vec: int) -> bool:
        return self.transversal(vec) == 0

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.dim - self.rank

    def quotient_representatives(self) -> t.List[int]:
        reps = SortedSet(self.transversal(v) for v in range(1 << self.dim))
        return list(reps)
