"""
Hermitian spaces over E and O-lattices inside them.

A :class:`HermLattice` carries a pseudo-basis ``[(A_i, v_i)]`` with
``L = sum A_i v_i`` and, for equality and set operations, the canonical
Hermite basis of L seen as a rank ``2m`` Z-module in omega-coordinates.
Vectors are rows; a linear map ``T`` acts as ``y -> y T``.
"""
from fractions import Fraction
import logging
import typing as t

from .exceptions import InputError, PreconditionError, VerificationError
from .field import FieldElement, QuadField
from .ideal import (
    FracIdeal,
    PrimeIdeal,
    PrimeKind,
    element_valuation,
    ideal_from_generators,
    local_generator,
    unit_ideal,
)
from .utils.intmat import (
    determinant,
    inverse,
    mat_mul,
    rational_hnf,
    snf_with_transform,
    solve_integer_combination,
    common_denominator,
    z_dual,
)


__all__ = (
    "Vector",
    "Matrix",
    "HermSpace",
    "HermLattice",
    "make_space",
    "free_lattice",
    "pseudo_basis_from_generators",
    "scale",
    "norm_ideal",
    "dual",
    "lattice_sum",
    "intersect",
    "scale_by_ideal",
    "volume_ideal",
    "index_ideal",
    "quotient_invariants",
    "pairing_sublattice",
    "rho",
    "quasi_reflection",
    "apply_map",
    "is_automorphism",
    "uniformizer",
    "different_from_uniformizer",
    "RamificationCase",
    "ramification_case",
    "build_H_lattice",
    "space_determinant",
    "to_coords",
    "from_coords",
    "apply_vector",
    "is_unitary",
    "local_basis",
)


logger = logging.getLogger(__name__)

Vector = t.List[FieldElement]
Matrix = t.List[t.List[FieldElement]]
PseudoBasis = t.List[t.Tuple[FracIdeal, Vector]]


def to_coords(vec: t.Sequence[FieldElement]) -> t.List[Fraction]:
    coords: t.List[Fraction] = []
    for x in vec:
        coords.extend(x.omega_coords())
    return coords


def from_coords(field: QuadField, coords: t.Sequence[Fraction]) -> Vector:
    return [
        field.from_omega(coords[k], coords[k + 1])
        for k in range(0, len(coords), 2)
    ]


class HermSpace:
    """A hermitian space ``(E^m, Phi)`` given by its Gram matrix."""

    __slots__ = ("field", "gram")

    def __init__(self, field: QuadField, gram: Matrix) -> None:
        self.field = field
        self.gram = gram

    def __repr__(self) -> str:
        return "HermSpace(d=%d, rank=%d)" % (self.field.d, self.rank)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermSpace):
            return NotImplemented
        return self.field == other.field and self.gram == other.gram

    def __hash__(self) -> int:
        return hash((self.field, tuple(tuple(row) for row in self.gram)))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def inner(self, x: t.Sequence[FieldElement], y: t.Sequence[FieldElement]):
        """``Phi(x, y) = x G conj(y)^T``; linear in x."""
        zero = self.field.zero
        total = zero
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.gram[i]
            total = total + xi * sum(
                (row[j] * yj.conj() for j, yj in enumerate(y)), zero)
        return total

    def determinant(self) -> Fraction:
        det = determinant(self.gram)
        return det.a

    def unit_vectors(self) -> t.List[Vector]:
        """Q-basis of V matching the omega-coordinates."""
        field, m = self.field, self.rank
        basis = []
        for i in range(m):
            for gen in (field.one, field.omega):
                vec = [field.zero] * m
                vec[i] = gen
                basis.append(vec)
        return basis

    def asdict(self) -> dict:
        return {
            "d": self.field.d,
            "rank": self.rank,
            "gram": [[x.to_pair() for x in row] for row in self.gram],
        }


def make_space(field: QuadField, gram: t.Sequence[t.Sequence[t.Any]]) -> HermSpace:
    """
    Validate a Gram matrix and wrap it.

    :raises InputError: for a non-square, non-hermitian or singular matrix.
    """
    m = len(gram)
    if m == 0 or any(len(row) != m for row in gram):
        raise InputError("Gram matrix must be square and nonempty")
    rows = [[field.coerce(x) for x in row] for row in gram]
    for i in range(m):
        for j in range(i, m):
            if rows[i][j] != rows[j][i].conj():
                raise InputError(
                    "Gram matrix is not hermitian at (%d, %d)" % (i + 1, j + 1))
    if not determinant(rows):
        raise InputError("Gram matrix is singular")
    return HermSpace(field, rows)


class HermLattice:

    __slots__ = ("space", "pseudo_basis", "den", "hnf")

    def __init__(
        self,
        space: HermSpace,
        pseudo_basis: PseudoBasis,
        canonical: t.Optional[t.Tuple[int, t.List[t.List[int]]]] = None,
    ) -> None:
        self.space = space
        self.pseudo_basis = pseudo_basis
        if canonical is None:
            vectors = [v for _, v in pseudo_basis]
            if len(vectors) != space.rank or not determinant(vectors):
                raise InputError(
                    "Pseudo-basis vectors must be %d independent vectors"
                    % space.rank)
            canonical = rational_hnf(_generator_rows(pseudo_basis))
        self.den, self.hnf = canonical

    @classmethod
    def from_coordinate_rows(
        cls,
        space: HermSpace,
        rows: t.Sequence[t.Sequence[Fraction]],
    ) -> "HermLattice":
        """The O-lattice whose Z-span is spanned by ``rows`` (O-stable)."""
        den, basis = rational_hnf(rows)
        if len(basis) != 2 * space.rank:
            raise InputError("Coordinate rows do not span a full lattice")
        gens = [
            (unit_ideal(space.field),
             from_coords(space.field, [Fraction(x, den) for x in row]))
            for row in basis
        ]
        pb = pseudo_basis_from_generators(space.field, gens, space.rank)
        return cls(space, pb, (den, basis))

    def __repr__(self) -> str:
        return "HermLattice(d=%d, rank=%d, den=%d)" % (
            self.space.field.d, self.rank, self.den)

    def key(self) -> t.Tuple[int, t.Tuple[t.Tuple[int, ...], ...]]:
        return (self.den, tuple(tuple(row) for row in self.hnf))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermLattice):
            return NotImplemented
        return self.space == other.space and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __lt__(self, other: "HermLattice") -> bool:
        return self.key() < other.key()

    @property
    def field(self) -> QuadField:
        return self.space.field

    @property
    def rank(self) -> int:
        return self.space.rank

    def z_basis(self) -> t.List[t.List[Fraction]]:
        return [[Fraction(x, self.den) for x in row] for row in self.hnf]

    def z_basis_vectors(self) -> t.List[Vector]:
        return [from_coords(self.field, row) for row in self.z_basis()]

    def contains(self, vec: Vector) -> bool:
        target = [x * self.den for x in to_coords(vec)]
        if any(x.denominator != 1 for x in target):
            return False
        return solve_integer_combination(self.hnf, [int(x) for x in target]) \
            is not None

    def issubset(self, other: "HermLattice") -> bool:
        return all(other.contains(v) for v in self.z_basis_vectors())

    def inner(self, x: Vector, y: Vector) -> FieldElement:
        return self.space.inner(x, y)

    def asdict(self) -> dict:
        doc = self.space.asdict()
        doc["pseudo_basis"] = [
            {"ideal": ideal.asdict(), "vector": [x.to_pair() for x in vec]}
            for ideal, vec in self.pseudo_basis
        ]
        return doc


def _generator_rows(pseudo_basis: PseudoBasis) -> t.List[t.List[Fraction]]:
    return [
        to_coords([beta * x for x in vec])
        for ideal, vec in pseudo_basis
        for beta in ideal.basis()
    ]


def free_lattice(space: HermSpace) -> HermLattice:
    """O^m inside ``space``."""
    field, m = space.field, space.rank
    pb = []
    for i in range(m):
        vec = [field.zero] * m
        vec[i] = field.one
        pb.append((unit_ideal(field), vec))
    return HermLattice(space, pb)


def _bezout_in_ideals(
    a: FieldElement,
    b: FieldElement,
    first: FracIdeal,
    second: FracIdeal,
) -> t.Tuple[FieldElement, FieldElement]:
    """``u`` in ``first``, ``v`` in ``second`` with ``a*u + b*v == 1``."""
    us, vs = first.basis(), second.basis()
    terms = [a * u for u in us] + [b * v for v in vs]
    coords = [x.omega_coords() for x in terms]
    den = common_denominator(c for pair in coords for c in pair)
    vectors = [[int(x * den), int(y * den)] for x, y in coords]
    sol = solve_integer_combination(vectors, [den, 0])
    if sol is None:
        raise VerificationError(
            "Ideals are not coprime while combining pseudo-basis pairs")
    u = sum((c * x for c, x in zip(sol[:2], us)), us[0] * 0)
    v = sum((c * x for c, x in zip(sol[2:], vs)), vs[0] * 0)
    return u, v


def pseudo_basis_from_generators(
    field: QuadField,
    pairs: t.Sequence[t.Tuple[FracIdeal, Vector]],
    rank: int,
) -> PseudoBasis:
    """
    Pseudo-basis of ``sum A_j g_j`` in triangular form: the i-th vector has
    coordinate 1 at position i and zeros after it.

    :raises InputError: if the generators do not span E^rank.
    """
    pool = [(ideal, list(vec)) for ideal, vec in pairs if any(vec)]
    result: t.List[t.Optional[t.Tuple[FracIdeal, Vector]]] = [None] * rank
    for i in reversed(range(rank)):
        live = [pair for pair in pool if pair[1][i]]
        pool = [pair for pair in pool if not pair[1][i]]
        if not live:
            raise InputError("Generators do not span a rank %d lattice" % rank)
        ideal, vec = live[0]
        c = vec[i]
        ideal, vec = ideal * c, [x / c for x in vec]
        for other, gvec in live[1:]:
            b = gvec[i]
            dd = ideal + other * b
            u, v = _bezout_in_ideals(field.one, b, ideal / dd, other / dd)
            merged = [u * x + v * y for x, y in zip(vec, gvec)]
            rest = [b * x - y for x, y in zip(vec, gvec)]
            leftover = ideal * other / dd
            ideal, vec = dd, merged
            if any(rest):
                pool.append((leftover, rest))
        result[i] = (ideal, vec)
    return [pair for pair in result if pair is not None]


def scale(L: HermLattice) -> FracIdeal:
    """The ideal generated by all ``Phi(x, y)`` with x, y in L."""
    gens = []
    for ai, vi in L.pseudo_basis:
        for aj, vj in L.pseudo_basis:
            phi = L.inner(vi, vj)
            if not phi:
                continue
            for beta in ai.basis():
                for gamma in aj.basis():
                    gens.append(beta * gamma.conj() * phi)
    return FracIdeal.from_z_generators(L.field, gens)


def norm_ideal(L: HermLattice) -> FracIdeal:
    """The ideal generated by all ``Phi(x, x)`` with x in L."""
    gens: t.List[t.Any] = []
    pb = L.pseudo_basis
    for i, (ai, vi) in enumerate(pb):
        gens.append(ai.norm() * L.inner(vi, vi))
        for aj, vj in pb[i + 1:]:
            phi = L.inner(vi, vj)
            if not phi:
                continue
            for gamma in (ai * aj.conj()).basis():
                gens.append((gamma * phi).trace())
    return ideal_from_generators(gens, L.field)


def _functional_rows(
    space: HermSpace,
    targets: t.Sequence[Vector],
) -> t.List[t.List[Fraction]]:
    """Rows ``y -> omega-coords of Phi(y, x)`` for each x in ``targets``."""
    units = space.unit_vectors()
    rows = []
    for x in targets:
        values = [space.inner(e, x).omega_coords() for e in units]
        rows.append([c[0] for c in values])
        rows.append([c[1] for c in values])
    return rows


def _dual_of_span(rows: t.Sequence[t.Sequence[Fraction]]) -> t.List[t.List[Fraction]]:
    den, basis = rational_hnf(rows)
    return z_dual([[Fraction(x, den) for x in row] for row in basis])


def dual(L: HermLattice) -> HermLattice:
    """``L^# = {x in V : Phi(x, L) in O}``."""
    rows = _functional_rows(L.space, L.z_basis_vectors())
    return HermLattice.from_coordinate_rows(L.space, _dual_of_span(rows))


def _check_same_space(L: HermLattice, M: HermLattice) -> None:
    if L.space != M.space:
        raise InputError("Lattices live in different hermitian spaces")


def lattice_sum(L: HermLattice, M: HermLattice) -> HermLattice:
    _check_same_space(L, M)
    return HermLattice.from_coordinate_rows(L.space, L.z_basis() + M.z_basis())


def intersect(L: HermLattice, M: HermLattice) -> HermLattice:
    _check_same_space(L, M)
    rows = z_dual(L.z_basis()) + z_dual(M.z_basis())
    return HermLattice.from_coordinate_rows(L.space, _dual_of_span(rows))


def scale_by_ideal(ideal: FracIdeal, L: HermLattice) -> HermLattice:
    pb = [(ideal * a, v) for a, v in L.pseudo_basis]
    return HermLattice(L.space, pb)


def volume_ideal(L: HermLattice) -> FracIdeal:
    """``det(v_1, ..., v_m) * prod A_i``."""
    det = determinant([v for _, v in L.pseudo_basis])
    vol = unit_ideal(L.field) * det
    for ideal, _ in L.pseudo_basis:
        vol = vol * ideal
    return vol


def index_ideal(L: HermLattice, M: HermLattice) -> FracIdeal:
    """The module index ``[L : M]_O``."""
    _check_same_space(L, M)
    return volume_ideal(M) / volume_ideal(L)


def quotient_invariants(L: HermLattice, M: HermLattice) -> t.List[int]:
    """
    Elementary divisors of ``L / M`` as abelian groups (entries > 1).

    :raises PreconditionError: if M is not contained in L.
    """
    _check_same_space(L, M)
    coeffs = mat_mul(M.z_basis(), inverse(L.z_basis()))
    if any(Fraction(x).denominator != 1 for row in coeffs for x in row):
        raise PreconditionError("Sublattice is not contained in the lattice")
    diag, _, _ = snf_with_transform([[int(x) for x in row] for row in coeffs])
    return [diag[i][i] for i in range(len(diag)) if diag[i][i] > 1]


def pairing_sublattice(
    L: HermLattice,
    x: Vector,
    ideal: FracIdeal,
) -> HermLattice:
    """``{y in L : Phi(y, x) in ideal}``."""
    units = L.space.unit_vectors()
    values = [L.inner(e, x).omega_coords() for e in units]
    den, n, r, s = ideal.den, ideal.n, ideal.r, ideal.s
    coeff_w = [c[1] * den / s for c in values]
    coeff_1 = [(c[0] * den - b * r) / n for c, b in zip(values, coeff_w)]
    rows = z_dual(L.z_basis()) + [coeff_1, coeff_w]
    return HermLattice.from_coordinate_rows(L.space, _dual_of_span(rows))


def rho(L: HermLattice, prime: PrimeIdeal) -> HermLattice:
    """``L + (P^-1 L  cap  P L^#)``."""
    P = prime.ideal
    inner = intersect(scale_by_ideal(P.inverse(), L), scale_by_ideal(P, dual(L)))
    result = lattice_sum(L, inner)
    logger.debug("rho at %s: %r -> %r", prime, L, result)
    return result


def quasi_reflection(
    space: HermSpace,
    x: Vector,
    delta: FieldElement,
) -> Matrix:
    """
    Matrix of ``y -> y + (delta - 1) Phi(y, x) / Phi(x, x) * x``.

    :raises PreconditionError: if x is isotropic or ``Nr(delta) != 1``.
    """
    field = space.field
    delta = field.coerce(delta)
    if delta.norm() != 1:
        raise PreconditionError("Quasi-reflection needs Nr(delta) = 1")
    q = space.inner(x, x)
    if not q:
        raise PreconditionError("Quasi-reflection along an isotropic vector")
    m = space.rank
    factor = (delta - 1) / q
    column = [
        sum((space.gram[i][j] * x[j].conj() for j in range(m)), field.zero)
        for i in range(m)
    ]
    return [
        [(field.one if i == j else field.zero) + factor * column[i] * x[j]
         for j in range(m)]
        for i in range(m)
    ]


def apply_vector(vec: Vector, T: Matrix) -> Vector:
    m = len(T)
    zero = vec[0] * 0
    return [sum((vec[i] * T[i][j] for i in range(m)), zero) for j in range(m)]


def apply_map(L: HermLattice, T: Matrix) -> HermLattice:
    """The image lattice ``{y T : y in L}``."""
    pb = [(a, apply_vector(v, T)) for a, v in L.pseudo_basis]
    return HermLattice(L.space, pb)


def is_unitary(space: HermSpace, T: Matrix) -> bool:
    conj_t = [[x.conj() for x in row] for row in zip(*T)]
    return mat_mul(mat_mul(T, space.gram), conj_t) == space.gram


def is_automorphism(L: HermLattice, T: Matrix) -> bool:
    return is_unitary(L.space, T) and apply_map(L, T) == L


def uniformizer(prime: PrimeIdeal) -> FieldElement:
    """
    A prime element at P. For ramified P the element is chosen with
    ``conj(pi) == -pi`` whenever possible, else ``1 + sqrt(d)``.
    """
    field = prime.field
    if prime.kind is not PrimeKind.RAMIFIED:
        return field(prime.p)
    case = ramification_case(prime)
    if case.case == 1:
        return field.sqrt_d
    return field.one + field.sqrt_d


def different_from_uniformizer(prime: PrimeIdeal) -> int:
    """Exponent of ``(pi - conj(pi))`` at P; equals that of the different."""
    pi = local_generator(prime.ideal, prime.p) \
        if prime.kind is PrimeKind.RAMIFIED else uniformizer(prime)
    diff = pi - pi.conj()
    if not diff:
        return 0
    return element_valuation(diff, prime)


class RamificationCase:
    """
    Which of the two ramified shapes occurs at P.

    Case 1 has a prime element with ``conj(pi) == -pi``; case 2 is the
    dyadic ``d = 3 mod 4`` shape, with ``k`` kept for reference only.
    """

    __slots__ = ("case", "k")

    def __init__(self, case: int, k: int) -> None:
        self.case = case
        self.k = k

    def asdict(self) -> dict:
        return {"case": self.case, "k": self.k}


def ramification_case(prime: PrimeIdeal) -> RamificationCase:
    if prime.kind is not PrimeKind.RAMIFIED:
        raise PreconditionError("%s is not ramified" % prime)
    d = prime.field.d
    if prime.p != 2 or d % 4 == 2:
        return RamificationCase(1, 0)
    k = 0
    rest = d - 1
    while rest % 2 == 0:
        rest //= 2
        k += 1
    return RamificationCase(2, k - 1)


def build_H_lattice(
    field: QuadField,
    prime: PrimeIdeal,
    i: int,
    copies: int = 1,
) -> HermLattice:
    """
    Free lattice with Gram blocks ``[[0, pi^i], [conj(pi)^i, 0]]``; its
    completion at P is ``H(i)^copies``.
    """
    if prime.kind is not PrimeKind.RAMIFIED:
        raise PreconditionError("H(i) needs a ramified prime, got %s" % prime)
    if copies < 1:
        raise InputError("H(i) needs at least one copy")
    pi = uniformizer(prime)
    m = 2 * copies
    gram = [[field.zero] * m for _ in range(m)]
    for k in range(copies):
        gram[2 * k][2 * k + 1] = pi ** i
        gram[2 * k + 1][2 * k] = pi.conj() ** i
    return free_lattice(make_space(field, gram))


def space_determinant(space: HermSpace) -> Fraction:
    return space.determinant()


def local_basis(L: HermLattice, p: int) -> t.List[Vector]:
    """Vectors ``a_i v_i`` spanning ``L_p`` over the local ring at p."""
    return [
        [local_generator(ideal, p) * x for x in vec]
        for ideal, vec in L.pseudo_basis
    ]


