"""
Brute-force check of the determinant group of a rank 2 lattice at a
ramified prime.

Automorphisms are searched in two ways: an exact quasi-reflection with a
determinant outside E1, and a layered enumeration of matrices over
``O / P^k`` preserving the Gram matrix modulo the matching power of P.
Residues are integer pairs ``(x, y)`` standing for ``x + y*w``.
"""
import itertools
import logging
import typing as t

from sortedcontainers import SortedSet  # type: ignore

from .exceptions import PreconditionError, VerificationError
from .field import FieldElement, QuadField
from .ideal import FracIdeal, ideal_pow, local_generator, residue_representatives
from .lattice import HermLattice, Matrix, apply_vector, local_basis, quasi_reflection
from .local import DetGroupLabel, LocalData, local_data, is_E1_element
from .utils.intmat import common_denominator, inverse


__all__ = (
    "quasi_reflection_witness",
    "mod_PN_det_oracle",
)


logger = logging.getLogger(__name__)

Pair = t.Tuple[int, int]


class _Residues:
    """Integer arithmetic in O with membership tests for powers of P."""

    __slots__ = ("field", "trace", "norm", "powers")

    def __init__(self, field: QuadField, prime_ideal: FracIdeal, depth: int):
        self.field = field
        self.trace = field.omega_trace
        self.norm = field.omega_norm
        self.powers = [ideal_pow(prime_ideal, k) for k in range(depth + 1)]

    def mul(self, a: Pair, b: Pair) -> Pair:
        x1, y1 = a
        x2, y2 = b
        return (
            x1 * x2 - self.norm * y1 * y2,
            x1 * y2 + y1 * x2 + self.trace * y1 * y2,
        )

    def conj(self, a: Pair) -> Pair:
        x, y = a
        return (x + self.trace * y, -y)

    @staticmethod
    def add(a: Pair, b: Pair) -> Pair:
        return (a[0] + b[0], a[1] + b[1])

    @staticmethod
    def sub(a: Pair, b: Pair) -> Pair:
        return (a[0] - b[0], a[1] - b[1])

    def contains(self, k: int, a: Pair) -> bool:
        ideal = self.powers[k]
        x, y = a
        if y % ideal.s:
            return False
        return (x - (y // ideal.s) * ideal.r) % ideal.n == 0

    def reduce(self, k: int, a: Pair) -> Pair:
        ideal = self.powers[k]
        x, y = a
        q = y // ideal.s
        x, y = x - q * ideal.r, y - q * ideal.s
        return (x % ideal.n, y)

    def to_pair(self, x: FieldElement) -> Pair:
        cx, cy = x.omega_coords()
        if cx.denominator != 1 or cy.denominator != 1:
            raise PreconditionError("Residue of a non-integral element")
        return (int(cx), int(cy))


def _integral_gram(L: HermLattice, ld: LocalData) -> t.Tuple[Matrix, t.List]:
    basis = local_basis(L, ld.p)
    gram = [[L.inner(x, y) for y in basis] for x in basis]
    den = common_denominator(
        c for row in gram for x in row for c in x.omega_coords())
    return [[x * den for x in row] for row in gram], basis


def quasi_reflection_witness(
    L: HermLattice,
    p: t.Union[int, LocalData],
) -> t.Optional[Matrix]:
    """
    A quasi-reflection in ``Aut(L_p)`` whose determinant is not in E1,
    or ``None`` if the search over lines of ``L / P L`` finds none.
    """
    ld = p if isinstance(p, LocalData) else local_data(L.field, p)
    if not ld.is_ramified:
        raise PreconditionError("Witness search needs a ramified prime")
    field = L.field
    pi = local_generator(ld.prime.ideal, ld.p)
    deltas = [pi / pi.conj()]
    if field(-1) not in deltas and not is_E1_element(field(-1), ld):
        deltas.append(field(-1))
    basis = local_basis(L, ld.p)
    coords = inverse(basis)
    m = L.rank
    residues = residue_representatives(ld.prime)
    lines = [
        [field.zero] * i + [field.one] + list(tail)
        for i in range(m)
        for tail in itertools.product(residues, repeat=m - i - 1)
    ]
    for line in lines:
        x = apply_vector(line, basis)
        if not L.inner(x, x):
            continue
        for delta in deltas:
            T = quasi_reflection(L.space, x, delta)
            images = [apply_vector(apply_vector(b, T), coords) for b in basis]
            if all(
                ld.val(c) is None or ld.val(c) >= 0
                for row in images for c in row
            ):
                logger.debug(
                    "Quasi-reflection witness at %d: x=%s, delta=%s",
                    ld.p, [str(c) for c in x], delta)
                return T
    return None


def mod_PN_det_oracle(
    L: HermLattice,
    p: int,
    depth: t.Optional[int] = None,
) -> SortedSet:
    """
    Classes (E0 meaning "outside E1", E1) of determinants of automorphisms
    of ``L_p`` seen modulo ``P^depth``.

    When a quasi-reflection witness exists the enumeration stops at the
    first level ``k >= e``, which must then show E0.

    :raises PreconditionError: unless rank 2, p ramified and
        ``depth >= e + 2``.
    :raises VerificationError: if the enumeration misses a determinant the
        witness realises.
    """
    ld = local_data(L.field, p)
    if L.rank != 2:
        raise PreconditionError("Determinant oracle needs rank 2")
    if not ld.is_ramified:
        raise PreconditionError("Determinant oracle needs a ramified prime")
    if depth is None:
        depth = ld.e + 2
    if depth < ld.e + 2:
        raise PreconditionError(
            "Oracle depth %d is below e + 2 = %d" % (depth, ld.e + 2))

    witness = quasi_reflection_witness(L, ld)

    gram, _ = _integral_gram(L, ld)
    mu = min(ld.val(x) for row in gram for x in row if x)
    ring = _Residues(L.field, ld.prime.ideal, depth + mu + 1)
    g = [[ring.to_pair(x) for x in row] for row in gram]
    pi = ring.to_pair(local_generator(ld.prime.ideal, ld.p))
    digits = [(a, 0) for a in range(ld.p)]

    def preserves(X: t.List[t.List[Pair]], k: int) -> bool:
        xc = [[ring.conj(v) for v in row] for row in X]
        for i in range(2):
            xg = [
                ring.add(ring.mul(X[i][0], g[0][j]), ring.mul(X[i][1], g[1][j]))
                for j in range(2)
            ]
            for j in range(2):
                entry = ring.add(ring.mul(xg[0], xc[j][0]), ring.mul(xg[1], xc[j][1]))
                if not ring.contains(k + mu, ring.sub(entry, g[i][j])):
                    return False
        return True

    def det_class(X: t.List[t.List[Pair]]) -> DetGroupLabel:
        det = ring.sub(ring.mul(X[0][0], X[1][1]), ring.mul(X[0][1], X[1][0]))
        if ring.contains(ld.e, ring.sub(det, (1, 0))):
            return DetGroupLabel.E1
        return DetGroupLabel.E0

    level = [[[(0, 0), (0, 0)], [(0, 0), (0, 0)]]]
    step = (1, 0)
    classes: SortedSet = SortedSet()
    for k in range(1, depth + 1):
        nxt = []
        for X in level:
            for lift in itertools.product(digits, repeat=4):
                Y = [
                    [ring.reduce(k, ring.add(X[0][0], ring.mul(step, lift[0]))),
                     ring.reduce(k, ring.add(X[0][1], ring.mul(step, lift[1])))],
                    [ring.reduce(k, ring.add(X[1][0], ring.mul(step, lift[2]))),
                     ring.reduce(k, ring.add(X[1][1], ring.mul(step, lift[3])))],
                ]
                if preserves(Y, k):
                    nxt.append(Y)
        level = nxt
        step = ring.mul(step, pi)
        logger.debug("Oracle at %d: %d solutions modulo P^%d", p, len(level), k)
        if k >= ld.e:
            classes = SortedSet(det_class(X) for X in level)
            if witness is not None:
                if DetGroupLabel.E0 not in classes:
                    raise VerificationError(
                        "Quasi-reflection witness at %d has no counterpart "
                        "modulo P^%d" % (p, k))
                return classes
            if classes == SortedSet([DetGroupLabel.E1]):
                return classes
    return classes
