"""
Local invariants of hermitian lattices at a rational prime p.

Valuations are taken at the prime P above p; for split p the minimum over
both conjugate primes is used, which is what a conjugation-stable scale
ideal sees.
"""
from fractions import Fraction
import itertools
import logging
import typing as t

from sympy import isprime, legendre_symbol  # type: ignore

from .exceptions import InputError, PreconditionError, VerificationError
from .field import FieldElement, QuadField
from .ideal import (
    PrimeIdeal,
    PrimeKind,
    different,
    element_valuation,
    prime_decomposition,
    rational_valuation,
    valuation,
)
from .lattice import (
    HermLattice,
    HermSpace,
    Matrix,
    Vector,
    local_basis,
    norm_ideal,
    rho,
    scale,
)
from .utils.enum import BaseStrEnum


__all__ = (
    "DetGroupLabel",
    "LocalData",
    "JordanBlock",
    "local_data",
    "jordan_decomposition",
    "jordan_invariants",
    "is_modular_at",
    "is_E1_element",
    "det_group",
    "hilbert_symbol",
    "is_local_norm",
    "is_isotropic",
    "det_group_maximal_crosscheck",
    "determinant_class_is_norm",
    "scale_norm_valuations",
    "cor0_applies",
    "same_local_invariants",
    "rho_iterate",
    "REAL_PLACE",
)


logger = logging.getLogger(__name__)

REAL_PLACE = 0


class DetGroupLabel(BaseStrEnum):
    E0 = "E0"
    E1 = "E1"


class LocalData:

    __slots__ = ("field", "p", "primes", "e", "kind")

    def __init__(
        self,
        field: QuadField,
        p: int,
        primes: t.List[PrimeIdeal],
        e: int,
    ) -> None:
        self.field = field
        self.p = p
        self.primes = primes
        self.e = e
        self.kind = primes[0].kind

    def __repr__(self) -> str:
        return "LocalData(p=%d, %s, e=%d)" % (self.p, self.kind, self.e)

    @property
    def prime(self) -> PrimeIdeal:
        return self.primes[0]

    @property
    def e_prime(self) -> int:
        return max(0, self.e - 1)

    @property
    def ramification_parity(self) -> int:
        return self.e % 2

    @property
    def is_ramified(self) -> bool:
        return self.kind is PrimeKind.RAMIFIED

    def val(self, x: FieldElement) -> t.Optional[int]:
        """Valuation at P, ``None`` for zero."""
        if not x:
            return None
        return min(element_valuation(x, q) for q in self.primes)

    def rational_val(self, q: Fraction) -> t.Optional[int]:
        v = rational_valuation(q, self.p)
        if v is None:
            return None
        return v * self.prime.e

    def asdict(self) -> dict:
        return {
            "p": self.p,
            "kind": str(self.kind),
            "e": self.e,
            "e_prime": self.e_prime,
        }


def local_data(field: QuadField, p: int) -> LocalData:
    primes = prime_decomposition(field, p)
    e = valuation(different(field), primes[0])
    return LocalData(field, p, primes, e)


def _as_local(field: QuadField, where: t.Union[int, LocalData]) -> LocalData:
    if isinstance(where, LocalData):
        return where
    return local_data(field, where)


class JordanBlock:
    """One modular Jordan constituent of ``L_p``."""

    __slots__ = ("scale_val", "rank", "norm_val", "gram_block", "is_H_type")

    def __init__(
        self,
        scale_val: int,
        rank: int,
        norm_val: int,
        gram_block: Matrix,
        is_H_type: bool,
    ) -> None:
        self.scale_val = scale_val
        self.rank = rank
        self.norm_val = norm_val
        self.gram_block = gram_block
        self.is_H_type = is_H_type

    def __repr__(self) -> str:
        return "JordanBlock(s=%d, r=%d, n=%d, H=%s)" % self.invariants()

    def invariants(self) -> t.Tuple[int, int, int, bool]:
        return (self.scale_val, self.rank, self.norm_val, self.is_H_type)

    def asdict(self) -> dict:
        return {
            "s": self.scale_val,
            "rank": self.rank,
            "norm_val": self.norm_val,
            "H": self.is_H_type,
        }


def _gram(space: HermSpace, vecs: t.Sequence[Vector]) -> Matrix:
    return [[space.inner(x, y) for y in vecs] for x in vecs]


def _combine(a: Vector, c: FieldElement, b: Vector) -> Vector:
    return [x + c * y for x, y in zip(a, b)]


def _small_integers(field: QuadField, p: int) -> t.Iterator[FieldElement]:
    """Residues ``a + b*w`` mod p, smallest ``a + b`` first."""
    for total in range(1, 2 * p - 1):
        for b in range(max(0, total - p + 1), min(total, p - 1) + 1):
            yield field.from_omega(total - b, b)


def _piece_norm_val(ld: LocalData, gram: Matrix) -> int:
    field = ld.field
    vals = [ld.val(gram[i][i]) for i in range(len(gram))]
    for i, j in itertools.combinations(range(len(gram)), 2):
        for gen in (field.one, field.omega):
            tr = (gen * gram[i][j]).trace()
            vals.append(ld.rational_val(tr))
    return min(v for v in vals if v is not None)


def _plane_det(space: HermSpace, x: Vector, y: Vector) -> FieldElement:
    return (
        space.inner(x, x) * space.inner(y, y)
        - space.inner(x, y) * space.inner(y, x)
    )


def _split_pieces(
    L: HermLattice,
    ld: LocalData,
) -> t.List[t.Tuple[int, t.List[Vector]]]:
    space = L.space
    vecs = local_basis(L, ld.p)
    dyadic = ld.is_ramified and ld.p == 2
    pieces = []
    while vecs:
        gram = _gram(space, vecs)
        n = len(vecs)
        entries = [
            (ld.val(gram[i][j]), i, j)
            for i in range(n) for j in range(n) if gram[i][j]
        ]
        mu = min(v for v, _, _ in entries)
        diag = [i for v, i, j in entries if i == j and v == mu]
        plane = None
        if diag and dyadic:
            # a diagonal pivot must be strictly below the off-diagonal
            # entries, unless no tied pair spans a P^mu-modular plane
            plane = next(
                ((a, b) for v, a, b in entries
                 if v == mu and a < b
                 and ld.val(_plane_det(space, vecs[a], vecs[b])) == 2 * mu),
                None)
            if plane is not None:
                diag = []
                logger.debug("Jordan at %d: plane x_%d, x_%d", ld.p, *plane)
        if not diag and plane is None:
            i, j = min((a, b) for v, a, b in entries if v == mu and a < b)
            plane = (i, j)
            for gamma in _small_integers(space.field, ld.p):
                y = _combine(vecs[i], gamma, vecs[j])
                if ld.val(space.inner(y, y)) == mu:
                    vecs[i] = y
                    diag = [i]
                    logger.debug(
                        "Jordan at %d: pivot x_%d + (%s) x_%d", ld.p, i, gamma, j)
                    break
        if diag:
            i = diag[0]
            x = vecs[i]
            q = space.inner(x, x)
            rest = []
            for k, y in enumerate(vecs):
                if k == i:
                    continue
                c = space.inner(y, x) / q
                _check_integral(ld, c)
                rest.append(_combine(y, -c, x))
            pieces.append((mu, [x]))
            vecs = rest
            continue
        i, j = plane
        x, y = vecs[i], vecs[j]
        b11, b12 = space.inner(x, x), space.inner(x, y)
        b21, b22 = space.inner(y, x), space.inner(y, y)
        det = _plane_det(space, x, y)
        rest = []
        for k, z in enumerate(vecs):
            if k in (i, j):
                continue
            w1, w2 = space.inner(z, x), space.inner(z, y)
            c1 = (w1 * b22 - w2 * b21) / det
            c2 = (w2 * b11 - w1 * b12) / det
            _check_integral(ld, c1)
            _check_integral(ld, c2)
            rest.append([
                a - c1 * u - c2 * v for a, u, v in zip(z, x, y)])
        pieces.append((mu, [x, y]))
        vecs = rest
    return pieces


def _check_integral(ld: LocalData, c: FieldElement) -> None:
    v = ld.val(c)
    if v is not None and v < 0:
        raise VerificationError(
            "Jordan elimination left the local ring at p = %d" % ld.p)


def jordan_decomposition(
    L: HermLattice,
    p: t.Union[int, LocalData],
) -> t.List[JordanBlock]:
    """
    Jordan decomposition of ``L_p``, one block per scale valuation in
    increasing order.
    """
    ld = _as_local(L.field, p)
    space = L.space
    pieces = _split_pieces(L, ld)

    vecs = [v for _, piece in pieces for v in piece]
    gram = _gram(space, vecs)
    offsets = []
    pos = 0
    for _, piece in pieces:
        offsets.append(range(pos, pos + len(piece)))
        pos += len(piece)
    for a, b in itertools.combinations(range(len(pieces)), 2):
        if any(gram[i][j] for i in offsets[a] for j in offsets[b]):
            raise VerificationError("Jordan pieces are not orthogonal")

    grouped: t.Dict[int, t.List[int]] = {}
    for k, (s, _) in enumerate(pieces):
        grouped.setdefault(s, []).append(k)
    blocks = []
    for s in sorted(grouped):
        idx = [i for k in grouped[s] for i in offsets[k]]
        block = [[gram[i][j] for j in idx] for i in idx]
        norm_val = min(
            _piece_norm_val(ld, [[gram[i][j] for j in offsets[k]]
                                 for i in offsets[k]])
            for k in grouped[s])
        rank = len(idx)
        h_type = (
            ld.is_ramified
            and rank % 2 == 0
            and norm_val == ld.e + s
            and (s - ld.e) % 2 == 0
        )
        blocks.append(JordanBlock(s, rank, norm_val, block, h_type))
    logger.debug("Jordan decomposition at %d: %r", ld.p, blocks)
    return blocks


def jordan_invariants(
    L: HermLattice,
    p: t.Union[int, LocalData],
) -> t.List[t.Tuple[int, int, int, bool]]:
    return [b.invariants() for b in jordan_decomposition(L, p)]


def is_modular_at(L: HermLattice, p: t.Union[int, LocalData]) -> bool:
    return len(jordan_decomposition(L, p)) == 1


def is_E1_element(delta: FieldElement, ld: LocalData) -> bool:
    """
    Whether a local norm-one unit lies in the subgroup ``{u / conj(u)}``.

    :raises PreconditionError: for a non-unit-norm or non-integral delta,
        or an unramified prime.
    """
    if not ld.is_ramified:
        raise PreconditionError("E1 test needs a ramified prime, p = %d" % ld.p)
    if delta.norm() != 1:
        raise PreconditionError("E1 test needs Nr(delta) = 1, got %s" % delta)
    v = ld.val(delta)
    if v is not None and v < 0:
        raise PreconditionError("E1 test needs an integral delta at %d" % ld.p)
    diff = delta - 1
    if not diff:
        return True
    return ld.val(diff) >= ld.e


def det_group(L: HermLattice, p: t.Union[int, LocalData]) -> DetGroupLabel:
    """The determinant group of ``Aut(L_p)``: E1 or all of E0."""
    ld = _as_local(L.field, p)
    if not ld.is_ramified or L.rank % 2:
        return DetGroupLabel.E0
    blocks = jordan_decomposition(L, ld)
    if all(b.is_H_type for b in blocks):
        return DetGroupLabel.E1
    return DetGroupLabel.E0


def _unit_part(q: Fraction, p: int) -> t.Tuple[int, int, int]:
    """``q = p^v * num / den`` with num, den prime to p."""
    v = rational_valuation(q, p)
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
    while den % p == 0:
        den //= p
    return v, num, den


def hilbert_symbol(a: t.Union[int, Fraction], b: t.Union[int, Fraction], p: int) -> int:
    """
    The Hilbert symbol ``(a, b)_p`` over Q_p; ``p = REAL_PLACE`` selects the
    real place.

    :raises InputError: for zero arguments or a non-prime place.
    """
    a, b = Fraction(a), Fraction(b)
    if not a or not b:
        raise InputError("Hilbert symbol of zero")
    if p == REAL_PLACE:
        return -1 if a < 0 and b < 0 else 1
    if not isprime(p):
        raise InputError("%r is not a place of Q" % (p,))
    alpha, ua, da = _unit_part(a, p)
    beta, ub, db = _unit_part(b, p)
    if p == 2:
        u = (ua * da) % 8
        v = (ub * db) % 8
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        exp = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if exp % 2 else 1
    sign = -1 if (alpha * beta * (p - 1) // 2) % 2 else 1
    leg_u = legendre_symbol(ua % p, p) * legendre_symbol(da % p, p)
    leg_v = legendre_symbol(ub % p, p) * legendre_symbol(db % p, p)
    return sign * leg_u ** (beta % 2) * leg_v ** (alpha % 2)


def is_local_norm(a: t.Union[int, Fraction], p: int, d: int) -> bool:
    """Whether ``a`` is a norm from ``Q_p(sqrt(d))``."""
    return hilbert_symbol(d, a, p) == 1


def is_isotropic(space: HermSpace, p: int) -> bool:
    if space.rank >= 3:
        return True
    if prime_decomposition(space.field, p)[0].kind is PrimeKind.SPLIT:
        return True
    if space.rank == 1:
        return False
    return is_local_norm(-space.determinant(), p, space.field.d)


def determinant_class_is_norm(space: HermSpace, p: int) -> bool:
    """Whether ``det(V, Phi)`` is a local norm at p."""
    return is_local_norm(space.determinant(), p, space.field.d)


def det_group_maximal_crosscheck(space: HermSpace, p: int) -> DetGroupLabel:
    """
    Determinant group of a maximal lattice in ``space`` at ramified p.

    :raises PreconditionError: if p is unramified.
    """
    ld = local_data(space.field, p)
    if not ld.is_ramified:
        raise PreconditionError("p = %d is not ramified" % p)
    m = space.rank
    if m % 2:
        return DetGroupLabel.E0
    target = space.determinant() * (-1) ** (m // 2)
    if is_local_norm(target, p, space.field.d):
        return DetGroupLabel.E1
    return DetGroupLabel.E0


def scale_norm_valuations(
    L: HermLattice,
    p: t.Union[int, LocalData],
) -> t.Tuple[int, int]:
    ld = _as_local(L.field, p)
    s_val = min(valuation(scale(L), q) for q in ld.primes)
    n_val = min(valuation(norm_ideal(L), q) for q in ld.primes)
    return s_val, n_val


def cor0_applies(L: HermLattice, p: t.Union[int, LocalData]) -> bool:
    """``scale(L) P^e' in norm(L)`` at a ramified p; forces E0."""
    ld = _as_local(L.field, p)
    if not ld.is_ramified:
        return False
    s_val, n_val = scale_norm_valuations(L, ld)
    return s_val + ld.e_prime >= n_val


def same_local_invariants(
    L: HermLattice,
    M: HermLattice,
    p: t.Union[int, LocalData],
) -> bool:
    ld = _as_local(L.field, p)
    return jordan_invariants(L, ld) == jordan_invariants(M, ld)


def rho_iterate(
    L: HermLattice,
    prime: PrimeIdeal,
    max_steps: int = 64,
) -> t.List[HermLattice]:
    """
    Apply rho at P until every Jordan scale valuation is below 2; returns
    the chain starting with L.
    """
    chain = [L]
    ld = local_data(L.field, prime.p)
    for _ in range(max_steps):
        blocks = jordan_decomposition(chain[-1], ld)
        if all(b.scale_val < 2 for b in blocks):
            return chain
        chain.append(rho(chain[-1], prime))
    raise VerificationError("rho did not reach scale below 2 at %s" % prime)
